"""Attribution report: (opcode x semantic) instruction counts and cycle shares.

Produced identically by the simulator (from its own counters) and by the
trace analyzer (from parsed records), so a self-trace round-trip can be
compared for exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass

from .labels import OPCODE_ORDER, SEMANTIC_ORDER, OpcodeLabel, SemanticLabel

Cell = tuple[SemanticLabel, OpcodeLabel]


@dataclass(frozen=True)
class AttributionReport:
    counts: tuple[tuple[Cell, int], ...]
    cycles: tuple[tuple[Cell, int], ...]
    total_cycles: int

    @classmethod
    def from_matrices(cls, counts: dict, cycles: dict) -> "AttributionReport":
        def normalize(matrix: dict) -> tuple:
            cells = []
            for sem in SEMANTIC_ORDER:
                for op in OPCODE_ORDER:
                    value = matrix.get((op, sem), 0)
                    if value:
                        cells.append(((sem, op), value))
            return tuple(cells)

        return cls(
            counts=normalize(counts),
            cycles=normalize(cycles),
            total_cycles=sum(cycles.values()),
        )

    # --- cell accessors --------------------------------------------------

    def count(self, sem: SemanticLabel, op: OpcodeLabel) -> int:
        return dict(self.counts).get((sem, op), 0)

    def cell_cycles(self, sem: SemanticLabel, op: OpcodeLabel) -> int:
        return dict(self.cycles).get((sem, op), 0)

    def percentage(self, sem: SemanticLabel, op: OpcodeLabel) -> float:
        if not self.total_cycles:
            return 0.0
        return 100.0 * self.cell_cycles(sem, op) / self.total_cycles

    @property
    def semantics(self) -> tuple[SemanticLabel, ...]:
        present = {sem for (sem, _op), _v in self.counts}
        return tuple(s for s in SEMANTIC_ORDER if s in present)

    def row_count(self, sem: SemanticLabel) -> int:
        return sum(v for (s, _o), v in self.counts if s is sem)

    def row_cycles(self, sem: SemanticLabel) -> int:
        return sum(v for (s, _o), v in self.cycles if s is sem)

    def opcode_count(self, op: OpcodeLabel) -> int:
        return sum(v for (_s, o), v in self.counts if o is op)

    def opcode_cycles(self, op: OpcodeLabel) -> int:
        return sum(v for (_s, o), v in self.cycles if o is op)

    def opcode_share(self, op: OpcodeLabel) -> float:
        """Percentage of all cycles spent in one opcode class."""
        if not self.total_cycles:
            return 0.0
        return 100.0 * self.opcode_cycles(op) / self.total_cycles

    def row_share(self, sem: SemanticLabel) -> float:
        if not self.total_cycles:
            return 0.0
        return 100.0 * self.row_cycles(sem) / self.total_cycles

    @property
    def memory_share(self) -> float:
        return self.opcode_share(OpcodeLabel.MEM_ROT) + self.opcode_share(OpcodeLabel.MEM_RAM)

    @property
    def total_instructions(self) -> int:
        return sum(v for _c, v in self.counts)
