"""Instruction labeling vocabulary.

Every micro-op (and every record of an analyzed trace) carries exactly one
opcode label and one semantic label.  Opcode labels say what the instruction
does; semantic labels say which driver phase it serves.
"""

from enum import Enum


class OpcodeLabel(Enum):
    ALU = "ALU"
    CTL = "CTL"
    MEM_ROT = "Memory-RoT"  # private scratchpad, accelerator FIFOs, MMIO
    MEM_RAM = "Memory-RAM"  # system main memory

    def __str__(self) -> str:
        return self.value


class SemanticLabel(Enum):
    CONFIG = "Config"
    DIGEST = "Digest"
    CIPHER = "Cipher"
    WAIT = "Wait"
    FINAL = "Final"
    JOB_LOAD = "JobLoad"
    JOB_START = "JobStart"
    JOB_WAIT = "JobWait"
    JOB_READBACK = "JobReadback"

    def __str__(self) -> str:
        return self.value


# Canonical row order for attribution reports.
SEMANTIC_ORDER = (
    SemanticLabel.CONFIG,
    SemanticLabel.DIGEST,
    SemanticLabel.CIPHER,
    SemanticLabel.WAIT,
    SemanticLabel.FINAL,
    SemanticLabel.JOB_LOAD,
    SemanticLabel.JOB_START,
    SemanticLabel.JOB_WAIT,
    SemanticLabel.JOB_READBACK,
)

OPCODE_ORDER = (
    OpcodeLabel.ALU,
    OpcodeLabel.CTL,
    OpcodeLabel.MEM_ROT,
    OpcodeLabel.MEM_RAM,
)
