"""SoC configuration: memory regions, access latencies, accelerator specs.

The configuration is loaded from a JSON document (see ``data/default.json``)
and is immutable after validation, so a single ``SocConfig`` can be shared
by any number of concurrent simulations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, Optional

from .errors import ConfigError


class RegionKind(Enum):
    ROT_SCRATCHPAD = "rot_scratchpad"
    ACCEL_FIFO = "accel_fifo"
    SYSTEM_RAM = "system_ram"
    MMIO_STATUS = "mmio_status"

    def __str__(self) -> str:
        return self.value


# Accelerator FIFOs and MMIO status registers sit on the same interconnect
# as the private scratchpad, so they share its latency parameters.
ROT_CLASS = (RegionKind.ROT_SCRATCHPAD, RegionKind.ACCEL_FIFO, RegionKind.MMIO_STATUS)


def region_class(kind: RegionKind) -> str:
    """Latency/reporting class of a region kind: 'rot' or 'ram'."""
    return "ram" if kind is RegionKind.SYSTEM_RAM else "rot"


@dataclass(frozen=True)
class Region:
    name: str
    kind: RegionKind
    start: int
    end: int  # exclusive

    def __contains__(self, addr: int) -> bool:
        return self.start <= addr < self.end


@dataclass(frozen=True)
class AddressMap:
    regions: tuple[Region, ...]

    def classify(self, addr: int) -> Optional[RegionKind]:
        for region in self.regions:
            if addr in region:
                return region.kind
        return None

    def region_named(self, name: str) -> Region:
        for region in self.regions:
            if region.name == name:
                return region
        raise ConfigError(f"no region named {name!r}")


@dataclass(frozen=True)
class LatencyParams:
    base_read: int
    base_write: int
    post_branch_penalty: int


@dataclass(frozen=True)
class LatencyModel:
    rot: LatencyParams
    ram: LatencyParams

    def params_for(self, kind: RegionKind) -> LatencyParams:
        return self.ram if kind is RegionKind.SYSTEM_RAM else self.rot


@dataclass(frozen=True)
class AcceleratorSpec:
    name: str
    block_size: int = 0
    word_size: int = 4
    input_fifo_capacity: int = 0  # words
    has_output_fifo: bool = False
    compute_cycles_per_block: int = 0
    # Big-number job engine only: (operation, key_bits) -> cycles.
    job_cost_table: tuple[tuple[tuple[str, int], int], ...] = ()

    @property
    def is_job_engine(self) -> bool:
        return bool(self.job_cost_table)

    def job_cost(self, operation: str, key_bits: int) -> int:
        for (op, bits), cost in self.job_cost_table:
            if op == operation and bits == key_bits:
                return cost
        raise ConfigError(
            f"accelerator {self.name!r} has no job cost for ({operation}, {key_bits})"
        )


@dataclass(frozen=True)
class SocConfig:
    address_map: AddressMap
    latency: LatencyModel
    accelerators: tuple[AcceleratorSpec, ...]
    alu_cycles: int = 1
    ctl_cycles: int = 1
    templates: dict = field(default_factory=dict, compare=False)
    baseline: dict = field(default_factory=dict, compare=False)

    def accelerator(self, name: str) -> AcceleratorSpec:
        for spec in self.accelerators:
            if spec.name == name:
                return spec
        raise ConfigError(f"no accelerator named {name!r}")


def classify_address(address_map: AddressMap, addr: int) -> Optional[RegionKind]:
    """Kind of the region containing ``addr``, or None when unmapped."""
    return address_map.classify(addr)


def access_latency(
    model: LatencyModel, kind: RegionKind, access: str, post_branch: bool = False
) -> int:
    """Cycle cost of one memory access.

    ``access`` is "read" or "write"; the post-branch penalty is charged to
    the first access retiring after a taken control-flow transfer.
    """
    params = model.params_for(kind)
    base = params.base_read if access == "read" else params.base_write
    if post_branch:
        base += params.post_branch_penalty
    return base


# --- parsing -----------------------------------------------------------


def _parse_addr(value, where: str) -> int:
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 16)
        except ValueError:
            pass
    raise ConfigError(f"{where}: expected a hex address string, got {value!r}")


def _parse_region(entry: dict, index: int) -> Region:
    where = f"address_map.regions[{index}]"
    for key in ("name", "kind", "start", "end"):
        if key not in entry:
            raise ConfigError(f"{where}: missing key {key!r}")
    try:
        kind = RegionKind(entry["kind"])
    except ValueError:
        raise ConfigError(f"{where}: unknown region kind {entry['kind']!r}") from None
    start = _parse_addr(entry["start"], f"{where}.start")
    end = _parse_addr(entry["end"], f"{where}.end")
    if start >= end:
        raise ConfigError(f"{where} ({entry['name']}): start must be below end")
    if start % 4 or end % 4:
        raise ConfigError(f"{where} ({entry['name']}): bounds must be 4-byte aligned")
    return Region(str(entry["name"]), kind, start, end)


def _parse_address_map(doc: dict) -> AddressMap:
    entries = doc.get("regions")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("address_map.regions: expected a non-empty list")
    regions = tuple(_parse_region(e, i) for i, e in enumerate(entries))
    ordered = sorted(regions, key=lambda r: r.start)
    for lo, hi in zip(ordered, ordered[1:]):
        if hi.start < lo.end:
            raise ConfigError(
                f"address_map: regions {lo.name!r} and {hi.name!r} overlap"
            )
    return AddressMap(regions)


def _parse_latency_group(doc: dict, group: str) -> LatencyParams:
    if group not in doc:
        raise ConfigError(f"latency: missing group {group!r}")
    entry = doc[group]
    try:
        params = LatencyParams(
            base_read=int(entry["read"]),
            base_write=int(entry["write"]),
            post_branch_penalty=int(entry.get("post_branch_penalty", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"latency.{group}: {exc}") from None
    if params.base_read < 1:
        raise ConfigError(f"latency.{group}.read: must be >= 1")
    if params.base_write < 1:
        raise ConfigError(f"latency.{group}.write: must be >= 1")
    if params.post_branch_penalty < 0:
        raise ConfigError(f"latency.{group}.post_branch_penalty: must be >= 0")
    return params


def _parse_accelerator(entry: dict, index: int) -> AcceleratorSpec:
    where = f"accelerators[{index}]"
    if "name" not in entry:
        raise ConfigError(f"{where}: missing key 'name'")
    name = str(entry["name"])
    job_table = []
    for op, per_bits in entry.get("job_cost_table", {}).items():
        for bits, cost in per_bits.items():
            cost = int(cost)
            if cost <= 0:
                raise ConfigError(f"{where}.job_cost_table[{op}][{bits}]: must be > 0")
            job_table.append(((op, int(bits)), cost))
    spec = AcceleratorSpec(
        name=name,
        block_size=int(entry.get("block_size", 0)),
        word_size=int(entry.get("word_size", 4)),
        input_fifo_capacity=int(entry.get("input_fifo_capacity", 0)),
        has_output_fifo=bool(entry.get("has_output_fifo", False)),
        compute_cycles_per_block=int(entry.get("compute_cycles_per_block", 0)),
        job_cost_table=tuple(sorted(job_table)),
    )
    if spec.block_size and spec.block_size % spec.word_size:
        raise ConfigError(f"{where} ({name}): block_size must be a word multiple")
    if not spec.is_job_engine and spec.compute_cycles_per_block <= 0:
        raise ConfigError(
            f"{where} ({name}): compute_cycles_per_block must be > 0 "
            "for streaming engines"
        )
    return spec


def parse_config(doc: dict) -> SocConfig:
    """Validate a parsed JSON document and build a SocConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration document must be a JSON object")
    for key in ("address_map", "latency", "accelerators", "core"):
        if key not in doc:
            raise ConfigError(f"missing top-level key {key!r}")
    address_map = _parse_address_map(doc["address_map"])
    latency = LatencyModel(
        rot=_parse_latency_group(doc["latency"], "rot"),
        ram=_parse_latency_group(doc["latency"], "ram"),
    )
    accelerators = tuple(
        _parse_accelerator(e, i) for i, e in enumerate(doc["accelerators"])
    )
    names = [a.name for a in accelerators]
    if len(set(names)) != len(names):
        raise ConfigError("accelerator names must be unique")
    core = doc["core"]
    alu_cycles = int(core.get("alu_cycles", 1))
    ctl_cycles = int(core.get("ctl_cycles", 1))
    if alu_cycles < 1:
        raise ConfigError("core.alu_cycles: must be >= 1")
    if ctl_cycles < 1:
        raise ConfigError("core.ctl_cycles: must be >= 1")
    return SocConfig(
        address_map=address_map,
        latency=latency,
        accelerators=accelerators,
        alu_cycles=alu_cycles,
        ctl_cycles=ctl_cycles,
        templates=dict(doc.get("templates", {})),
        baseline=dict(doc.get("baseline", {})),
    )


def load_config(text: str) -> SocConfig:
    """Parse and validate a JSON configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration is not valid JSON: {exc}") from None
    return parse_config(doc)


def load_config_file(path) -> SocConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return load_config(handle.read())


def serialize_config(config: SocConfig) -> str:
    """JSON text such that load_config(serialize_config(c)) == c."""
    doc = {
        "address_map": {
            "regions": [
                {
                    "name": r.name,
                    "kind": r.kind.value,
                    "start": f"0x{r.start:x}",
                    "end": f"0x{r.end:x}",
                }
                for r in config.address_map.regions
            ]
        },
        "latency": {
            group: {
                "read": params.base_read,
                "write": params.base_write,
                "post_branch_penalty": params.post_branch_penalty,
            }
            for group, params in (("rot", config.latency.rot), ("ram", config.latency.ram))
        },
        "accelerators": [],
        "core": {"alu_cycles": config.alu_cycles, "ctl_cycles": config.ctl_cycles},
    }
    for spec in config.accelerators:
        entry = {
            "name": spec.name,
            "block_size": spec.block_size,
            "word_size": spec.word_size,
            "input_fifo_capacity": spec.input_fifo_capacity,
            "has_output_fifo": spec.has_output_fifo,
            "compute_cycles_per_block": spec.compute_cycles_per_block,
        }
        if spec.job_cost_table:
            table: dict = {}
            for (op, bits), cost in spec.job_cost_table:
                table.setdefault(op, {})[str(bits)] = cost
            entry["job_cost_table"] = table
        doc["accelerators"].append(entry)
    if config.templates:
        doc["templates"] = config.templates
    if config.baseline:
        doc["baseline"] = config.baseline
    return json.dumps(doc, indent=2)


def default_config_text() -> str:
    return resources.files("secacc.data").joinpath("default.json").read_text()


def default_config() -> SocConfig:
    """The shipped configuration (Table-2 latencies, engine cycle constants)."""
    return load_config(default_config_text())
