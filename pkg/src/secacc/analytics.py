"""Closed-form bandwidth bounds, utilization, speedups and payload sweeps.

The peak memory bound prices each per-block access at its minimum latency:
it is the fastest the driver core could possibly feed an engine, so a
simulated run can never beat it.  The theoretical figure is the engine's
own limit (compute cycles per block over block size).  Utilization and
speedups compare achieved cycles/byte against those anchors and against a
calibrated software baseline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import crypto, keys
from .config import LatencyModel, RegionKind, SocConfig
from .drivers import (
    AES_WORKLOAD,
    HASH_WORKLOADS,
    RSA_WORKLOADS,
    DriverTemplate,
    gen_aes_program,
    gen_hash_program,
    gen_otbn_program,
)
from .errors import ModelViolationError, ProgramError
from .sim import SimResult, run, run_otbn


@dataclass(frozen=True)
class BandwidthFigure:
    cycles_per_byte: float
    source: str  # bound | theoretical | simulated | measured | baseline

    def __post_init__(self):
        if self.cycles_per_byte <= 0:
            raise ValueError("cycles/byte must be positive")


@dataclass(frozen=True)
class AccessBudget:
    """Per-block memory accesses the driver performs to move one block."""

    accel_reads: int = 0
    accel_writes: int = 0
    rot_reads: int = 0
    rot_writes: int = 0
    ram_reads: int = 0
    ram_writes: int = 0


@dataclass(frozen=True)
class BoundBreakdown:
    """Table-shaped intermediate cells of the peak-bound computation."""

    block_size: int
    accel_cost: int
    rot_cost: int
    ram_cost: int

    @property
    def total_cost(self) -> int:
        return self.accel_cost + self.rot_cost + self.ram_cost

    @property
    def cycles_per_byte(self) -> float:
        return self.total_cost / self.block_size


def budget_for(spec, placement: RegionKind) -> AccessBudget:
    """Access budget implied by an engine's FIFO geometry and a placement."""
    words = spec.block_size // spec.word_size
    payload_reads = words
    result_writes = words if spec.has_output_fifo else 0
    if placement is RegionKind.SYSTEM_RAM:
        rot_reads, rot_writes = 0, 0
        ram_reads, ram_writes = payload_reads, result_writes
    else:
        rot_reads, rot_writes = payload_reads, result_writes
        ram_reads, ram_writes = 0, 0
    return AccessBudget(
        accel_reads=words if spec.has_output_fifo else 0,
        accel_writes=words,
        rot_reads=rot_reads,
        rot_writes=rot_writes,
        ram_reads=ram_reads,
        ram_writes=ram_writes,
    )


def bound_breakdown(budget: AccessBudget, latency: LatencyModel, block_size: int) -> BoundBreakdown:
    if block_size <= 0:
        raise ProgramError("block size must be positive")
    rot = latency.rot
    ram = latency.ram
    # Accelerator FIFO accesses ride the RoT interconnect.
    accel = budget.accel_reads * rot.base_read + budget.accel_writes * rot.base_write
    rot_cost = budget.rot_reads * rot.base_read + budget.rot_writes * rot.base_write
    ram_cost = budget.ram_reads * ram.base_read + budget.ram_writes * ram.base_write
    return BoundBreakdown(block_size, accel, rot_cost, ram_cost)


def peak_bound(budget: AccessBudget, latency: LatencyModel, block_size: int) -> BandwidthFigure:
    """Minimum cycles/byte the memory system allows for one engine."""
    breakdown = bound_breakdown(budget, latency, block_size)
    return BandwidthFigure(breakdown.cycles_per_byte, "bound")


def theoretical_bandwidth(spec) -> BandwidthFigure:
    """The engine's intrinsic limit: compute cycles per block over block size."""
    if spec.is_job_engine:
        raise ProgramError(f"{spec.name} is a job engine; it has no per-byte figure")
    if spec.block_size <= 0:
        raise ProgramError("block size must be positive")
    return BandwidthFigure(spec.compute_cycles_per_block / spec.block_size, "theoretical")


def utilization(theoretical: BandwidthFigure, achieved: BandwidthFigure) -> float:
    """Fraction of the engine's intrinsic bandwidth actually exploited."""
    if achieved.cycles_per_byte < theoretical.cycles_per_byte:
        raise ModelViolationError(
            f"achieved {achieved.cycles_per_byte:.3f} cycles/byte beats the engine "
            f"limit {theoretical.cycles_per_byte:.3f}; the model is miscalibrated"
        )
    return theoretical.cycles_per_byte / achieved.cycles_per_byte


@dataclass(frozen=True)
class BaselineModel:
    """Calibrated software cycles/byte per workload; never a simulation."""

    entries: tuple[tuple[str, float, str], ...]  # (workload, cpb, provenance note)

    @classmethod
    def from_config(cls, config: SocConfig) -> "BaselineModel":
        entries = []
        for workload, entry in config.baseline.items():
            entries.append(
                (workload, float(entry["cycles_per_byte"]), str(entry.get("note", "")))
            )
        return cls(tuple(entries))

    def cycles_per_byte(self, workload: str) -> float:
        for name, cpb, _note in self.entries:
            if name == workload:
                return cpb
        raise ProgramError(f"no baseline entry for workload {workload!r}")

    def note(self, workload: str) -> str:
        for name, _cpb, note in self.entries:
            if name == workload:
                return note
        raise ProgramError(f"no baseline entry for workload {workload!r}")


def speedup(baseline: BaselineModel, workload: str, achieved: BandwidthFigure) -> float:
    return baseline.cycles_per_byte(workload) / achieved.cycles_per_byte


# --- simulation orchestration --------------------------------------------


def default_input(workload: str, payload_bytes: int) -> bytes:
    """Deterministic payload pattern; reduced below the modulus for RSA."""
    pattern = bytes((7 * i + 13) & 0xFF for i in range(payload_bytes))
    if workload in RSA_WORKLOADS:
        bits = 512 if workload == "rsa512" else 1024
        modulus = keys.default_rsa_params(bits, "decrypt").modulus
        value = int.from_bytes(pattern, "big") % modulus
        return value.to_bytes(payload_bytes, "big")
    return pattern


def baseline_key(workload: str, direction: str = "decrypt") -> str:
    if workload in RSA_WORKLOADS:
        return f"{workload}_{direction}"
    return workload


def simulate_workload(
    workload: str,
    payload_bytes: int,
    placement: RegionKind,
    config: SocConfig,
    direction: str = "encrypt",
    emit_trace: bool = False,
) -> SimResult:
    """Generate and run the driver program for one workload point."""
    template = DriverTemplate.from_config(config)
    if workload in HASH_WORKLOADS:
        program = gen_hash_program(workload, payload_bytes, placement, template)
        return run(program, config, default_input(workload, payload_bytes), emit_trace)
    if workload == AES_WORKLOAD:
        program = gen_aes_program(payload_bytes, placement, template, direction=direction)
        return run(program, config, default_input(workload, payload_bytes), emit_trace)
    if workload in RSA_WORKLOADS:
        bits = 512 if workload == "rsa512" else 1024
        if payload_bytes != bits // 8:
            raise ProgramError(
                f"{workload} processes exactly one {bits // 8}-byte block per job"
            )
        op = "rsa_encrypt" if direction == "encrypt" else "rsa_decrypt"
        program = gen_otbn_program(op, bits, placement, template)
        params = keys.default_rsa_params(bits, direction)
        return run_otbn(program, config, params, default_input(workload, payload_bytes), emit_trace)
    raise ProgramError(f"unknown workload {workload!r}")


@dataclass(frozen=True)
class SweepCurve:
    workload: str
    placement: RegionKind
    points: tuple[tuple[int, float], ...]  # (payload bytes, cycles/byte)

    @property
    def placement_name(self) -> str:
        return "ram" if self.placement is RegionKind.SYSTEM_RAM else "rot"


def sweep(
    workloads: Sequence[str],
    payloads: Sequence[int],
    placements: Iterable[RegionKind],
    config: SocConfig,
    direction: str = "encrypt",
) -> list[SweepCurve]:
    """One simulation per (workload, placement, payload) point."""
    ordered = list(payloads)
    if any(b <= 0 for b in ordered):
        raise ProgramError("payload sizes must be positive")
    if ordered != sorted(set(ordered)):
        raise ProgramError("payload sizes must be strictly increasing")
    curves = []
    for workload in workloads:
        for placement in placements:
            points = []
            for payload_bytes in ordered:
                result = simulate_workload(
                    workload, payload_bytes, placement, config, direction=direction
                )
                points.append((payload_bytes, result.cycles_per_byte))
            curves.append(SweepCurve(workload, placement, tuple(points)))
    return curves


DEFAULT_SWEEP_PAYLOADS = tuple(64 * 2 ** i for i in range(7))  # 64 B .. 4 KiB
