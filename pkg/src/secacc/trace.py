"""Cycle-annotated instruction-trace analysis.

Parses the CSV trace format, merges opcode classes and semantic labels from
an annotation sidecar (mnemonic classes plus pc ranges, the shape of a
hand-annotated disassembly), classifies memory accesses by region through
the address map, and computes latency statistics and attribution reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .config import AddressMap, RegionKind, region_class
from .errors import AnnotationError, TraceFormatError
from .labels import SEMANTIC_ORDER, OpcodeLabel, SemanticLabel
from .report import AttributionReport

TRACE_HEADER = "start_cycle,duration,pc,mnemonic,effective_address"

# Mnemonics that must carry an effective address even before annotation.
_MEMORY_MNEMONICS = {"lw", "sw", "lb", "sb", "lh", "sh", "lbu", "lhu", "ld", "sd"}


@dataclass(frozen=True)
class RawTraceLine:
    start_cycle: int
    duration: int
    pc: int
    mnemonic: str
    effective_address: Optional[int] = None


@dataclass(frozen=True)
class LabeledRecord:
    start_cycle: int
    duration: int
    opcode: OpcodeLabel
    semantic: SemanticLabel
    region: Optional[RegionKind] = None


@dataclass(frozen=True)
class AnnotationSet:
    mnemonic_classes: dict
    semantic_ranges: tuple[tuple[int, int, SemanticLabel], ...]  # end exclusive

    def classify_pc(self, pc: int) -> Optional[SemanticLabel]:
        for start, end, label in self.semantic_ranges:
            if start <= pc < end:
                return label
        return None


def parse_annotations(text: str) -> AnnotationSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"annotation file is not valid JSON: {exc}") from None
    classes = doc.get("mnemonic_classes")
    if not isinstance(classes, dict) or not classes:
        raise TraceFormatError("annotations need a non-empty 'mnemonic_classes' object")
    valid = {"ALU", "CTL", "MEM-LOAD", "MEM-STORE"}
    for mnemonic, cls in classes.items():
        if cls not in valid:
            raise TraceFormatError(f"mnemonic {mnemonic!r} has unknown class {cls!r}")
    ranges = []
    for i, entry in enumerate(doc.get("semantic_ranges", [])):
        try:
            start = int(entry["start"], 16) if isinstance(entry["start"], str) else int(entry["start"])
            end = int(entry["end"], 16) if isinstance(entry["end"], str) else int(entry["end"])
            label = SemanticLabel(entry["label"])
        except (KeyError, ValueError) as exc:
            raise TraceFormatError(f"semantic_ranges[{i}]: {exc}") from None
        if start >= end:
            raise TraceFormatError(f"semantic_ranges[{i}]: start must be below end")
        ranges.append((start, end, label))
    ordered = sorted(ranges)
    for (s1, e1, l1), (s2, e2, l2) in zip(ordered, ordered[1:]):
        if s2 < e1:
            raise TraceFormatError(
                f"semantic ranges for {l1} and {l2} overlap"
            )
    return AnnotationSet(mnemonic_classes=dict(classes), semantic_ranges=tuple(ranges))


def serialize_annotations(annotations: AnnotationSet) -> str:
    doc = {
        "mnemonic_classes": annotations.mnemonic_classes,
        "semantic_ranges": [
            {"start": f"0x{s:x}", "end": f"0x{e:x}", "label": label.value}
            for s, e, label in annotations.semantic_ranges
        ],
    }
    return json.dumps(doc, indent=2)


def parse_trace(text: str) -> tuple[RawTraceLine, ...]:
    """Parse a trace document; rejects malformed lines by number."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != TRACE_HEADER:
        raise TraceFormatError(f"trace must start with header {TRACE_HEADER!r}")
    records = []
    last_start = -1
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 5:
            raise TraceFormatError(f"line {number}: expected 5 fields, got {len(fields)}")
        try:
            start_cycle = int(fields[0])
            duration = int(fields[1])
            pc = int(fields[2], 16)
        except ValueError as exc:
            raise TraceFormatError(f"line {number}: {exc}") from None
        mnemonic = fields[3].strip()
        if not mnemonic:
            raise TraceFormatError(f"line {number}: empty mnemonic")
        eff_text = fields[4].strip()
        effective = None
        if eff_text:
            try:
                effective = int(eff_text, 16)
            except ValueError:
                raise TraceFormatError(
                    f"line {number}: bad effective address {eff_text!r}"
                ) from None
        elif mnemonic in _MEMORY_MNEMONICS:
            raise TraceFormatError(
                f"line {number}: memory mnemonic {mnemonic!r} without effective address"
            )
        if duration < 1:
            raise TraceFormatError(f"line {number}: duration must be >= 1")
        if start_cycle < last_start:
            raise TraceFormatError(f"line {number}: start_cycle went backwards")
        last_start = start_cycle
        records.append(RawTraceLine(start_cycle, duration, pc, mnemonic, effective))
    return tuple(records)


def format_trace_lines(records: Iterable[RawTraceLine]) -> str:
    """Inverse of parse_trace."""
    out = [TRACE_HEADER]
    for r in records:
        eff = f"0x{r.effective_address:x}" if r.effective_address is not None else ""
        out.append(f"{r.start_cycle},{r.duration},0x{r.pc:x},{r.mnemonic},{eff}")
    return "\n".join(out) + "\n"


# --- self-trace emission --------------------------------------------------

_PC_BASE = 0x8000
_PC_STRIDE = 0x100
_MNEMONIC_SLOT = {"addi": 0, "bne": 1, "lw": 2, "sw": 3}

SELF_TRACE_MNEMONIC_CLASSES = {
    "addi": "ALU",
    "bne": "CTL",
    "lw": "MEM-LOAD",
    "sw": "MEM-STORE",
}


def _phase_pc(semantic: SemanticLabel, mnemonic: str) -> int:
    base = _PC_BASE + _PC_STRIDE * SEMANTIC_ORDER.index(semantic)
    return base + 4 * _MNEMONIC_SLOT[mnemonic]


def serialize_trace(records) -> str:
    """Render simulator trace records in the external CSV format."""
    lines = [TRACE_HEADER]
    for r in records:
        eff = f"0x{r.address:x}" if r.address is not None else ""
        pc = _phase_pc(r.semantic, r.mnemonic)
        lines.append(f"{r.start_cycle},{r.duration},0x{pc:x},{r.mnemonic},{eff}")
    return "\n".join(lines) + "\n"


def self_trace_annotations() -> AnnotationSet:
    """Annotation set matching serialize_trace's pc and mnemonic scheme."""
    ranges = tuple(
        (_PC_BASE + _PC_STRIDE * i, _PC_BASE + _PC_STRIDE * (i + 1), sem)
        for i, sem in enumerate(SEMANTIC_ORDER)
    )
    return AnnotationSet(
        mnemonic_classes=dict(SELF_TRACE_MNEMONIC_CLASSES),
        semantic_ranges=ranges,
    )


# --- labeling -------------------------------------------------------------


def annotate(
    records: Sequence[RawTraceLine],
    annotations: AnnotationSet,
    address_map: AddressMap,
) -> tuple[LabeledRecord, ...]:
    """Attach one opcode label and one semantic label to every record."""
    unknown = sorted(
        {r.mnemonic for r in records if r.mnemonic not in annotations.mnemonic_classes}
    )
    if unknown:
        raise AnnotationError(f"unknown mnemonics: {', '.join(unknown)}")
    labeled = []
    for i, r in enumerate(records):
        semantic = annotations.classify_pc(r.pc)
        if semantic is None:
            raise AnnotationError(
                f"record {i}: pc 0x{r.pc:x} is outside every semantic range"
            )
        cls = annotations.mnemonic_classes[r.mnemonic]
        region = None
        if cls in ("MEM-LOAD", "MEM-STORE"):
            if r.effective_address is None:
                raise AnnotationError(
                    f"record {i}: memory mnemonic {r.mnemonic!r} without address"
                )
            region = address_map.classify(r.effective_address)
            if region is None:
                raise AnnotationError(
                    f"record {i}: address 0x{r.effective_address:x} is unmapped"
                )
            opcode = (
                OpcodeLabel.MEM_RAM
                if region is RegionKind.SYSTEM_RAM
                else OpcodeLabel.MEM_ROT
            )
        else:
            opcode = OpcodeLabel.ALU if cls == "ALU" else OpcodeLabel.CTL
        labeled.append(LabeledRecord(r.start_cycle, r.duration, opcode, semantic, region))
    return tuple(labeled)


@dataclass(frozen=True)
class RegionStats:
    count: int
    total: int
    minimum: int
    maximum: int

    @property
    def mean(self) -> float:
        return self.total / self.count


@dataclass(frozen=True)
class LatencyStats:
    """Per memory-class (RoT vs RAM) access-cost statistics."""

    rot: Optional[RegionStats]
    ram: Optional[RegionStats]

    def for_class(self, name: str) -> Optional[RegionStats]:
        return self.rot if name == "rot" else self.ram


def latency_stats(records: Sequence[LabeledRecord]) -> LatencyStats:
    groups: dict = {"rot": [], "ram": []}
    for r in records:
        if r.region is not None:
            groups[region_class(r.region)].append(r.duration)
    if not groups["rot"] and not groups["ram"]:
        raise AnnotationError("no memory records to compute latency statistics from")

    def stats(values) -> Optional[RegionStats]:
        if not values:
            return None
        return RegionStats(len(values), sum(values), min(values), max(values))

    return LatencyStats(rot=stats(groups["rot"]), ram=stats(groups["ram"]))


def attribute(records: Sequence[LabeledRecord]) -> AttributionReport:
    """Fold labeled records into the (opcode x semantic) report."""
    counts: dict = {}
    cycles: dict = {}
    for r in records:
        key = (r.opcode, r.semantic)
        counts[key] = counts.get(key, 0) + 1
        cycles[key] = cycles.get(key, 0) + r.duration
    return AttributionReport.from_matrices(counts, cycles)
