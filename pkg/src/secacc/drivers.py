"""Driver-program generators.

Each generator produces the labeled micro-op stream a secure-core driver
executes to feed one accelerator: configuration, payload transfer into the
input FIFO, polling, and result readback.  Transfer loops are emitted fully
unrolled; per-phase constants (prologue sizes, per-block overhead) are
template knobs so the cost calibration is explicit and overridable from the
configuration file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Optional

from .config import RegionKind, SocConfig
from .errors import ProgramError
from .labels import OpcodeLabel, SemanticLabel

HASH_WORKLOADS = ("sha256", "hmac")
AES_WORKLOAD = "aes256cbc"
RSA_WORKLOADS = ("rsa512", "rsa1024")
WORKLOADS = HASH_WORKLOADS + (AES_WORKLOAD,) + RSA_WORKLOADS

# Deterministic key material for runs where the caller does not supply any.
DEFAULT_KEY32 = bytes(range(1, 33))
DEFAULT_IV16 = bytes(range(101, 117))


class OpKind(Enum):
    ALU = "alu"
    CTL = "ctl"
    LOAD = "load"
    STORE = "store"
    POLL = "poll"


@dataclass(frozen=True)
class MicroOp:
    """One labeled driver operation.

    ``loc``/``index`` say which logical word a memory op touches (payload
    word, FIFO slot, MMIO register...) so the simulator can stream data and
    synthesize effective addresses.  A POLL op stands for one *or more*
    status-read iterations: load, test, conditional branch.
    """

    kind: OpKind
    semantic: SemanticLabel
    region: Optional[RegionKind] = None
    width: int = 4
    taken: bool = False
    loc: str = ""
    index: int = 0
    accel: str = ""
    wait_for: str = ""  # poll condition: "space", "done" or "job"
    cmd: str = ""  # engine command carried by a store: "start", "process", "job_start"

    @property
    def opcode_label(self) -> OpcodeLabel:
        if self.kind is OpKind.ALU:
            return OpcodeLabel.ALU
        if self.kind is OpKind.CTL:
            return OpcodeLabel.CTL
        if self.kind is OpKind.POLL:
            raise ProgramError("a poll expands to three ops; it has no single label")
        return (
            OpcodeLabel.MEM_RAM
            if self.region is RegionKind.SYSTEM_RAM
            else OpcodeLabel.MEM_ROT
        )


@dataclass(frozen=True)
class HashTemplate:
    config_alu: int = 5
    config_mem: int = 6
    hmac_config_mem: int = 23
    prologue_alu: int = 38
    prologue_ctl: int = 18
    prologue_mem: int = 40
    per_block_alu: int = 3
    per_block_ctl: int = 3
    per_block_bookkeeping: int = 2
    final_alu: int = 4
    final_extra_mem: int = 4


@dataclass(frozen=True)
class AesTemplate:
    config_alu: int = 28
    config_ctl: int = 9
    config_mem: int = 64
    prologue_alu: int = 1
    prologue_mem: int = 2
    per_block_alu: int = 5
    per_block_ctl: int = 1
    per_block_bookkeeping: int = 1


@dataclass(frozen=True)
class OtbnTemplate:
    program_words: int = 1024


@dataclass(frozen=True)
class DriverTemplate:
    """Bundle of per-workload-family calibration knobs."""

    hash: HashTemplate = field(default_factory=HashTemplate)
    aes: AesTemplate = field(default_factory=AesTemplate)
    otbn: OtbnTemplate = field(default_factory=OtbnTemplate)

    @classmethod
    def from_config(cls, config: SocConfig) -> "DriverTemplate":
        overrides = config.templates or {}
        return cls(
            hash=HashTemplate(**overrides.get("hash", {})),
            aes=AesTemplate(**overrides.get("aes", {})),
            otbn=OtbnTemplate(**overrides.get("otbn", {})),
        )


@dataclass(frozen=True)
class DriverProgram:
    workload: str
    payload_bytes: int
    placement: RegionKind
    ops: tuple[MicroOp, ...]
    accel: str
    direction: str = "encrypt"
    key: Optional[bytes] = None
    iv: Optional[bytes] = None

    def listing(self) -> str:
        """Textual dump, one op per line: semantic,opcode,region,width."""
        lines = []
        for op in iter_expanded(self.ops):
            region = op.region.value if op.region else "-"
            width = op.width if op.kind in (OpKind.LOAD, OpKind.STORE) else 0
            lines.append(f"{op.semantic},{op.opcode_label},{region},{width}")
        return "\n".join(lines) + "\n"


def _check_placement(placement: RegionKind) -> None:
    if placement not in (RegionKind.ROT_SCRATCHPAD, RegionKind.SYSTEM_RAM):
        raise ProgramError(f"payload placement must be scratchpad or RAM, not {placement}")


def iter_expanded(ops) -> Iterator[MicroOp]:
    """Ops with every POLL replaced by its three constituent ops (one
    iteration: status load, ALU test, conditional branch)."""
    for op in ops:
        if op.kind is OpKind.POLL:
            yield replace(op, kind=OpKind.LOAD, region=RegionKind.MMIO_STATUS, loc="mmio")
            yield replace(op, kind=OpKind.ALU, region=None)
            yield replace(op, kind=OpKind.CTL, region=None, taken=False)
        else:
            yield op


def count_ops(program: DriverProgram) -> dict:
    """Static (opcode x semantic) op counts.

    Poll sites count as a single iteration, so Wait cells are lower bounds;
    dynamic polling can only add iterations at simulation time.
    """
    counts: dict = {}
    for op in iter_expanded(program.ops):
        key = (op.opcode_label, op.semantic)
        counts[key] = counts.get(key, 0) + 1
    return counts


# --- generators ---------------------------------------------------------


def _config_phase(alu: int, ctl: int, mem: int, accel: str, cmd_last: str = "") -> list[MicroOp]:
    sem = SemanticLabel.CONFIG
    ops = [MicroOp(OpKind.ALU, sem) for _ in range(alu)]
    ops += [MicroOp(OpKind.CTL, sem) for _ in range(ctl)]
    for i in range(mem):
        cmd = cmd_last if i == mem - 1 else ""
        ops.append(
            MicroOp(
                OpKind.STORE, sem, RegionKind.MMIO_STATUS,
                loc="mmio", index=i, accel=accel, cmd=cmd,
            )
        )
    return ops


def gen_hash_program(
    workload: str,
    payload_bytes: int,
    placement: RegionKind,
    template: Optional[DriverTemplate] = None,
    key: Optional[bytes] = None,
) -> DriverProgram:
    """Driver program for the SHA-256 / HMAC engine.

    Phase order: Config, then per 64-byte block a Digest burst of payload
    loads and FIFO pushes followed by one FIFO-space poll, then Final
    (process command, completion wait, digest readback).
    """
    if workload not in HASH_WORKLOADS:
        raise ProgramError(f"unknown hash workload {workload!r}")
    if payload_bytes <= 0:
        raise ProgramError("payload must be positive")
    _check_placement(placement)
    tpl = (template or DriverTemplate()).hash
    accel = "hmac"
    if workload == "hmac" and key is None:
        key = DEFAULT_KEY32

    config_mem = tpl.hmac_config_mem if workload == "hmac" else tpl.config_mem
    ops = _config_phase(tpl.config_alu, 0, config_mem, accel, cmd_last="start")

    # Digest prologue: descriptor reads and setup, ending with the jump into
    # the unrolled transfer code (taken).
    sem = SemanticLabel.DIGEST
    for i in range(tpl.prologue_mem):
        ops.append(MicroOp(OpKind.LOAD, sem, RegionKind.ROT_SCRATCHPAD, loc="scratch", index=i))
    ops += [MicroOp(OpKind.ALU, sem) for _ in range(tpl.prologue_alu)]
    ops += [MicroOp(OpKind.CTL, sem) for _ in range(tpl.prologue_ctl - 1)]
    ops.append(MicroOp(OpKind.CTL, sem, taken=True))

    total_words = (payload_bytes + 3) // 4
    word = 0
    while word < total_words:
        burst = min(16, total_words - word)
        for _ in range(burst):
            ops.append(MicroOp(OpKind.LOAD, sem, placement, loc="payload", index=word))
            ops.append(
                MicroOp(
                    OpKind.STORE, sem, RegionKind.ACCEL_FIFO,
                    loc="fifo", index=word, accel=accel,
                )
            )
            word += 1
        ops += [MicroOp(OpKind.ALU, sem) for _ in range(tpl.per_block_alu)]
        n_ctl = tpl.per_block_ctl
        for i in range(tpl.per_block_bookkeeping):
            if n_ctl > 0:
                ops.append(MicroOp(OpKind.CTL, sem, taken=True))
                n_ctl -= 1
            ops.append(
                MicroOp(OpKind.LOAD, sem, RegionKind.ROT_SCRATCHPAD, loc="scratch", index=i)
            )
        for _ in range(n_ctl):
            ops.append(MicroOp(OpKind.CTL, sem, taken=True))
        ops.append(
            MicroOp(
                OpKind.POLL, SemanticLabel.WAIT, accel=accel, wait_for="space"
            )
        )

    # Final: trigger padding/finalization, wait, read back the digest.
    sem = SemanticLabel.FINAL
    ops.append(MicroOp(OpKind.STORE, sem, RegionKind.MMIO_STATUS, loc="mmio", accel=accel, cmd="process"))
    ops.append(MicroOp(OpKind.POLL, SemanticLabel.WAIT, accel=accel, wait_for="done"))
    for i in range(8):
        ops.append(MicroOp(OpKind.LOAD, sem, RegionKind.MMIO_STATUS, loc="mmio", index=8 + i))
    ops += [MicroOp(OpKind.ALU, sem) for _ in range(tpl.final_alu)]
    for i in range(8):
        ops.append(MicroOp(OpKind.STORE, sem, placement, loc="result", index=i))
    for i in range(tpl.final_extra_mem):
        ops.append(MicroOp(OpKind.LOAD, sem, RegionKind.ROT_SCRATCHPAD, loc="scratch", index=i))

    return DriverProgram(
        workload=workload,
        payload_bytes=payload_bytes,
        placement=placement,
        ops=tuple(ops),
        accel=accel,
        key=key,
    )


def gen_aes_program(
    payload_bytes: int,
    placement: RegionKind,
    template: Optional[DriverTemplate] = None,
    direction: str = "encrypt",
    key: Optional[bytes] = None,
    iv: Optional[bytes] = None,
) -> DriverProgram:
    """Driver program for the AES-256-CBC engine.

    The transfer loop is pipelined: block i is pushed, then block i-1's
    ciphertext is drained from the output FIFO while the engine computes,
    and a completion poll closes the iteration.
    """
    if payload_bytes <= 0 or payload_bytes % 16:
        raise ProgramError("AES payload must be a positive multiple of 16 bytes")
    if direction not in ("encrypt", "decrypt"):
        raise ProgramError(f"unknown direction {direction!r}")
    _check_placement(placement)
    tpl = (template or DriverTemplate()).aes
    accel = "aes"

    ops = _config_phase(tpl.config_alu, tpl.config_ctl, tpl.config_mem, accel)

    sem = SemanticLabel.CIPHER
    ops += [MicroOp(OpKind.ALU, sem) for _ in range(tpl.prologue_alu)]
    for i in range(tpl.prologue_mem):
        ops.append(MicroOp(OpKind.LOAD, sem, RegionKind.ROT_SCRATCHPAD, loc="scratch", index=i))

    n_blocks = payload_bytes // 16

    def drain(block: int) -> list[MicroOp]:
        out = []
        for w in range(4):
            idx = 4 * block + w
            out.append(
                MicroOp(OpKind.LOAD, sem, RegionKind.ACCEL_FIFO, loc="fifo_out", index=idx, accel=accel)
            )
        for w in range(4):
            idx = 4 * block + w
            out.append(MicroOp(OpKind.STORE, sem, placement, loc="result", index=idx))
        return out

    for block in range(n_blocks):
        for w in range(4):
            idx = 4 * block + w
            ops.append(MicroOp(OpKind.LOAD, sem, placement, loc="payload", index=idx))
        for w in range(4):
            idx = 4 * block + w
            ops.append(
                MicroOp(OpKind.STORE, sem, RegionKind.ACCEL_FIFO, loc="fifo", index=idx, accel=accel)
            )
        if block > 0:
            ops += drain(block - 1)
        ops += [MicroOp(OpKind.ALU, sem) for _ in range(tpl.per_block_alu)]
        n_ctl = tpl.per_block_ctl
        for i in range(tpl.per_block_bookkeeping):
            if n_ctl > 0:
                ops.append(MicroOp(OpKind.CTL, sem, taken=True))
                n_ctl -= 1
            ops.append(
                MicroOp(OpKind.LOAD, sem, RegionKind.ROT_SCRATCHPAD, loc="scratch", index=i)
            )
        for _ in range(n_ctl):
            ops.append(MicroOp(OpKind.CTL, sem, taken=True))
        ops.append(MicroOp(OpKind.POLL, SemanticLabel.WAIT, accel=accel, wait_for="done"))
    ops += drain(n_blocks - 1)

    return DriverProgram(
        workload=AES_WORKLOAD,
        payload_bytes=payload_bytes,
        placement=placement,
        ops=tuple(ops),
        accel=accel,
        direction=direction,
        key=key if key is not None else DEFAULT_KEY32,
        iv=iv if iv is not None else DEFAULT_IV16,
    )


def gen_otbn_program(
    op: str,
    key_bits: int,
    placement: RegionKind,
    template: Optional[DriverTemplate] = None,
) -> DriverProgram:
    """Driver program for a big-number job: load program and operands,
    start, poll for completion, read the result back."""
    if op not in ("rsa_encrypt", "rsa_decrypt"):
        raise ProgramError(f"unknown big-number operation {op!r}")
    if key_bits not in (512, 1024):
        raise ProgramError("key_bits must be 512 or 1024")
    _check_placement(placement)
    tpl = (template or DriverTemplate()).otbn
    accel = "otbn"
    operand_words = key_bits // 32

    sem = SemanticLabel.JOB_LOAD
    ops = []
    for i in range(tpl.program_words):
        ops.append(MicroOp(OpKind.LOAD, sem, RegionKind.ROT_SCRATCHPAD, loc="scratch", index=i))
        ops.append(MicroOp(OpKind.STORE, sem, RegionKind.ACCEL_FIFO, loc="imem", index=i, accel=accel))
    # Operands: the payload block from its placement, modulus and exponent
    # from the private scratchpad.
    for i in range(operand_words):
        ops.append(MicroOp(OpKind.LOAD, sem, placement, loc="payload", index=i))
        ops.append(MicroOp(OpKind.STORE, sem, RegionKind.ACCEL_FIFO, loc="dmem", index=i, accel=accel))
    for i in range(2 * operand_words):
        ops.append(MicroOp(OpKind.LOAD, sem, RegionKind.ROT_SCRATCHPAD, loc="scratch", index=i))
        ops.append(
            MicroOp(
                OpKind.STORE, sem, RegionKind.ACCEL_FIFO,
                loc="dmem", index=operand_words + i, accel=accel,
            )
        )

    ops.append(
        MicroOp(
            OpKind.STORE, SemanticLabel.JOB_START, RegionKind.MMIO_STATUS,
            loc="mmio", accel=accel, cmd="job_start",
        )
    )
    ops.append(MicroOp(OpKind.POLL, SemanticLabel.JOB_WAIT, accel=accel, wait_for="job"))

    sem = SemanticLabel.JOB_READBACK
    for i in range(operand_words):
        ops.append(MicroOp(OpKind.LOAD, sem, RegionKind.ACCEL_FIFO, loc="dmem", index=i, accel=accel))
        ops.append(MicroOp(OpKind.STORE, sem, placement, loc="result", index=i))

    return DriverProgram(
        workload="rsa512" if key_bits == 512 else "rsa1024",
        payload_bytes=key_bits // 8,
        placement=placement,
        ops=tuple(ops),
        accel=accel,
        direction="encrypt" if op == "rsa_encrypt" else "decrypt",
    )


def hash_block_count(payload_bytes: int) -> int:
    """Total engine compressions for a payload, padding included."""
    return math.ceil((payload_bytes + 9) / 64)
