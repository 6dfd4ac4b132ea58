"""Cycle-level execution of driver programs.

Runs a micro-op stream in order against the latency model and an
accelerator state machine.  ALU/CTL ops cost their configured cycles;
memory ops cost the per-region access latency, with the post-branch penalty
charged to the first memory access after a taken control transfer.  Poll
ops expand dynamically into status-read iterations until the polled
condition holds, so wait counts are emergent rather than scripted.

The engines stream the actual payload bytes through the functional crypto
models, so a run's output is checkable against the pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import crypto
from .config import RegionKind, SocConfig, access_latency, region_class
from .drivers import DriverProgram, OpKind
from .errors import ModelViolationError, ProgramError
from .labels import OpcodeLabel, SemanticLabel
from .report import AttributionReport


@dataclass(frozen=True)
class TraceRecord:
    seq: int
    start_cycle: int
    duration: int
    opcode: OpcodeLabel
    semantic: SemanticLabel
    region: Optional[RegionKind] = None
    address: Optional[int] = None
    mnemonic: str = "addi"


@dataclass(frozen=True)
class SimResult:
    total_cycles: int
    instr_counts: dict
    cycle_counts: dict
    output: bytes
    payload_bytes: int
    workload: str
    placement: RegionKind
    trace: Optional[tuple[TraceRecord, ...]] = None

    @property
    def cycles_per_byte(self) -> float:
        return self.total_cycles / self.payload_bytes

    @property
    def total_instructions(self) -> int:
        return sum(self.instr_counts.values())


def attribution(result: SimResult) -> AttributionReport:
    """Fold a run's counters into the (opcode x semantic) report."""
    return AttributionReport.from_matrices(result.instr_counts, result.cycle_counts)


class _StreamEngine:
    """HMAC/SHA-256 and AES engine model.

    Words pushed into the input FIFO accumulate; a complete block is
    absorbed as soon as the engine is idle, which starts one
    ``compute_cycles_per_block`` computation and frees the FIFO slots.
    """

    def __init__(self, spec, program: DriverProgram, payload: bytes):
        self.spec = spec
        self.program = program
        self.payload = payload
        self.capacity_words = spec.input_fifo_capacity
        self.block_words = spec.block_size // spec.word_size
        self.busy_until = 0
        self.absorb_times: list[int] = []
        self.pushed_words = 0
        self._block_buf = bytearray()
        self._out_blocks: list[tuple[int, bytes]] = []  # (ready_time, data)
        self._finalized = False
        self._digest: Optional[bytes] = None

        workload = program.workload
        if workload == "aes256cbc":
            keyiv = crypto.AesKeyIv(program.key, program.iv)
            self._cipher = crypto.Aes256Cbc(keyiv, decrypt=program.direction == "decrypt")
            self._hash = None
        else:
            self._cipher = None
            self._hash = crypto.Sha256()
            self._hmac_key: Optional[bytes] = None
            if workload == "hmac":
                key = program.key or b""
                if len(key) > 64:
                    key = crypto.sha256(key)
                self._hmac_key = key.ljust(64, b"\x00")

    # -- driver-visible events -------------------------------------------

    def command(self, name: str, now: int) -> None:
        if name == "start" and self._hmac_key is not None:
            # HMAC mode: the engine compresses the inner-pad key block as
            # soon as it is started.
            self._hash.update(bytes(b ^ 0x36 for b in self._hmac_key))
            self.busy_until = max(self.busy_until, now) + self.spec.compute_cycles_per_block
        elif name == "process":
            self._finalize(now)

    def _absorbed_words(self, now: int) -> int:
        absorbed = 0
        for t in self.absorb_times:
            if t <= now:
                absorbed += self.block_words
        return absorbed

    def pending_words(self, now: int) -> int:
        return self.pushed_words - self._absorbed_words(now)

    def push_word(self, index: int, now: int) -> None:
        if self.pending_words(now) >= self.capacity_words:
            raise ModelViolationError(
                f"store to full {self.spec.name} FIFO at cycle {now}; "
                "the driver must poll for space first"
            )
        offset = 4 * index
        self._block_buf += self.payload[offset: offset + 4]
        self.pushed_words += 1
        if self.pushed_words % self.block_words == 0:
            start = max(now, self.busy_until)
            self.absorb_times.append(start)
            done = start + self.spec.compute_cycles_per_block
            self.busy_until = done
            block = bytes(self._block_buf)
            self._block_buf.clear()
            if self._cipher is not None:
                self._out_blocks.append((done, self._cipher.process_block(block)))
            else:
                self._hash.update(block)

    def read_output_word(self, index: int, now: int) -> bytes:
        block, word = divmod(index, 4)
        if block >= len(self._out_blocks):
            raise ModelViolationError("output FIFO read before the block was pushed")
        ready, data = self._out_blocks[block]
        if now < ready:
            raise ModelViolationError(
                f"output FIFO read at cycle {now}, block not ready before {ready}"
            )
        return data[4 * word: 4 * word + 4]

    def _finalize(self, now: int) -> None:
        if self._finalized or self._hash is None:
            return
        self._finalized = True
        if self._block_buf:  # trailing partial block, absorbed at finalize
            self._hash.update(bytes(self._block_buf))
            self._block_buf.clear()
        scheduled = self._hash.compressions
        inner = self._hash.digest()
        if self._hmac_key is not None:
            outer = crypto.Sha256()
            outer.update(bytes(b ^ 0x5C for b in self._hmac_key))
            outer.update(inner)
            self._digest = outer.digest()
            total = self._hash.compressions + outer.compressions
        else:
            self._digest = inner
            total = self._hash.compressions
        remaining = total - scheduled
        self.busy_until = max(self.busy_until, now) + remaining * self.spec.compute_cycles_per_block

    # -- poll conditions ---------------------------------------------------

    def sample(self, condition: str, now: int) -> bool:
        if condition == "space":
            return self.pending_words(now) < self.capacity_words
        if condition == "done":
            return now >= self.busy_until
        raise ProgramError(f"stream engine cannot wait for {condition!r}")

    def output(self) -> bytes:
        if self._cipher is not None:
            return b"".join(data for _t, data in self._out_blocks)
        if self._digest is None:
            raise ModelViolationError("digest read back without a process command")
        return self._digest


class _JobEngine:
    """Big-number co-processor: one job per run, costed from the job table."""

    def __init__(self, spec, program: DriverProgram, params, payload: bytes):
        self.spec = spec
        self.params = params
        self.busy_until = 0
        self.started = False
        op = "rsa_encrypt" if program.direction == "encrypt" else "rsa_decrypt"
        self.cost = spec.job_cost(op, params.key_bits)
        self.result = crypto.rsa_apply(params, payload)

    def command(self, name: str, now: int) -> None:
        if name == "job_start":
            self.started = True
            self.busy_until = max(self.busy_until, now) + self.cost

    def push_word(self, index: int, now: int) -> None:
        pass  # program/operand words land in private engine memories

    def read_output_word(self, index: int, now: int) -> bytes:
        if not self.started or now < self.busy_until:
            raise ModelViolationError("job result read before completion")
        return self.result[4 * index: 4 * index + 4]

    def sample(self, condition: str, now: int) -> bool:
        if condition == "job":
            return self.started and now >= self.busy_until
        raise ProgramError(f"job engine cannot wait for {condition!r}")

    def output(self) -> bytes:
        return self.result


# --- address synthesis (for trace records) ------------------------------

_PAYLOAD_OFFSET = 0x400
_RESULT_OFFSET = 0x10000
_SCRATCH_OFFSET = 0x200
_OUT_FIFO_OFFSET = 0x800
_DMEM_OFFSET = 0x4000


def _placement_region(config: SocConfig, placement: RegionKind) -> str:
    return "system_ram" if placement is RegionKind.SYSTEM_RAM else "rot_scratchpad"


def _resolve_address(config: SocConfig, program: DriverProgram, op) -> int:
    amap = config.address_map
    if op.loc == "payload":
        base = amap.region_named(_placement_region(config, program.placement)).start
        return base + _PAYLOAD_OFFSET + 4 * op.index
    if op.loc == "result":
        base = amap.region_named(_placement_region(config, program.placement)).start
        return base + _RESULT_OFFSET + 4 * op.index
    if op.loc == "scratch":
        base = amap.region_named("rot_scratchpad").start
        return base + _SCRATCH_OFFSET + 4 * (op.index % 64)
    if op.loc == "fifo":
        region = amap.region_named(f"{op.accel}_fifo")
        return region.start + 4 * (op.index % 16)
    if op.loc == "fifo_out":
        region = amap.region_named(f"{op.accel}_fifo")
        return region.start + _OUT_FIFO_OFFSET + 4 * (op.index % 4)
    if op.loc == "mmio":
        region = amap.region_named(f"{op.accel or program.accel}_mmio")
        return region.start + 4 * (op.index % 32)
    if op.loc == "imem":
        region = amap.region_named("otbn_mem")
        return region.start + 4 * (op.index % 1024)
    if op.loc == "dmem":
        region = amap.region_named("otbn_mem")
        return region.start + _DMEM_OFFSET + 4 * (op.index % 256)
    raise ProgramError(f"op has no address location: {op}")


class _Runner:
    def __init__(self, program: DriverProgram, config: SocConfig, engine, emit_trace: bool):
        self.program = program
        self.config = config
        self.engine = engine
        self.now = 0
        self.post_branch = False
        self.instr_counts: dict = {}
        self.cycle_counts: dict = {}
        self.trace: Optional[list[TraceRecord]] = [] if emit_trace else None

    def _record(self, opcode: OpcodeLabel, semantic: SemanticLabel, duration: int,
                region=None, address=None, mnemonic="addi") -> None:
        start = self.now
        self.now += duration
        key = (opcode, semantic)
        self.instr_counts[key] = self.instr_counts.get(key, 0) + 1
        self.cycle_counts[key] = self.cycle_counts.get(key, 0) + duration
        if self.trace is not None:
            self.trace.append(
                TraceRecord(
                    len(self.trace), start, duration, opcode, semantic,
                    region, address, mnemonic,
                )
            )

    def _memory(self, op, access: str) -> int:
        """Advance time across one memory access; returns its completion."""
        duration = access_latency(self.config.latency, op.region, access, self.post_branch)
        self.post_branch = False
        address = _resolve_address(self.config, self.program, op)
        mnemonic = "lw" if access == "read" else "sw"
        self._record(op.opcode_label, op.semantic, duration, op.region, address, mnemonic)
        return self.now

    def run(self) -> None:
        alu = self.config.alu_cycles
        ctl = self.config.ctl_cycles
        for op in self.program.ops:
            if op.kind is OpKind.ALU:
                self._record(OpcodeLabel.ALU, op.semantic, alu)
            elif op.kind is OpKind.CTL:
                self._record(OpcodeLabel.CTL, op.semantic, ctl, mnemonic="bne")
                if op.taken:
                    self.post_branch = True
            elif op.kind is OpKind.LOAD:
                done = self._memory(op, "read")
                if op.loc == "fifo_out":
                    self.engine.read_output_word(op.index, done)
                elif op.loc == "dmem":
                    self.engine.read_output_word(op.index, done)
            elif op.kind is OpKind.STORE:
                done = self._memory(op, "write")
                if op.loc == "fifo":
                    self.engine.push_word(op.index, done)
                if op.cmd:
                    self.engine.command(op.cmd, done)
            elif op.kind is OpKind.POLL:
                self._poll(op)

    def _poll(self, op) -> None:
        status_region = RegionKind.MMIO_STATUS
        address = self.config.address_map.region_named(f"{op.accel}_mmio").start
        alu = self.config.alu_cycles
        ctl = self.config.ctl_cycles
        while True:
            duration = access_latency(self.config.latency, status_region, "read", self.post_branch)
            self.post_branch = False
            self._record(
                OpcodeLabel.MEM_ROT, SemanticLabel.WAIT, duration,
                status_region, address, "lw",
            )
            ready = self.engine.sample(op.wait_for, self.now)
            self._record(OpcodeLabel.ALU, SemanticLabel.WAIT, alu)
            self._record(OpcodeLabel.CTL, SemanticLabel.WAIT, ctl, mnemonic="bne")
            if ready:
                return
            self.post_branch = True  # loop branch taken, spin again


def _select_engine(program: DriverProgram, config: SocConfig, params, payload: bytes):
    spec = config.accelerator(program.accel)
    if spec.is_job_engine:
        if params is None:
            raise ProgramError("big-number runs need RSA parameters")
        return _JobEngine(spec, program, params, payload)
    return _StreamEngine(spec, program, payload)


def run(
    program: DriverProgram,
    config: SocConfig,
    input_data: bytes,
    emit_trace: bool = False,
) -> SimResult:
    """Execute a hash or AES driver program cycle by cycle."""
    if program.accel == "otbn":
        raise ProgramError("big-number programs go through run_otbn")
    if len(input_data) != program.payload_bytes:
        raise ProgramError(
            f"input is {len(input_data)} bytes, program expects {program.payload_bytes}"
        )
    engine = _select_engine(program, config, None, input_data)
    runner = _Runner(program, config, engine, emit_trace)
    runner.run()
    return SimResult(
        total_cycles=runner.now,
        instr_counts=runner.instr_counts,
        cycle_counts=runner.cycle_counts,
        output=engine.output(),
        payload_bytes=program.payload_bytes,
        workload=program.workload,
        placement=program.placement,
        trace=tuple(runner.trace) if runner.trace is not None else None,
    )


def run_otbn(
    program: DriverProgram,
    config: SocConfig,
    params: crypto.RsaParams,
    input_data: bytes,
    emit_trace: bool = False,
) -> SimResult:
    """Execute a big-number job program cycle by cycle."""
    if program.accel != "otbn":
        raise ProgramError("run_otbn expects a big-number program")
    if len(input_data) != program.payload_bytes:
        raise ProgramError(
            f"input is {len(input_data)} bytes, program expects {program.payload_bytes}"
        )
    engine = _select_engine(program, config, params, input_data)
    runner = _Runner(program, config, engine, emit_trace)
    runner.run()
    return SimResult(
        total_cycles=runner.now,
        instr_counts=runner.instr_counts,
        cycle_counts=runner.cycle_counts,
        output=engine.output(),
        payload_bytes=program.payload_bytes,
        workload=program.workload,
        placement=program.placement,
        trace=tuple(runner.trace) if runner.trace is not None else None,
    )


def self_trace(result: SimResult) -> str:
    """Serialize a traced run in the external trace format."""
    from .trace import serialize_trace  # local import avoids a cycle

    if result.trace is None:
        raise ProgramError("run was executed without emit_trace")
    return serialize_trace(result.trace)
