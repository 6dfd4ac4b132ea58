"""Exception hierarchy shared by the whole package."""


class SecAccError(Exception):
    """Base class for all package errors."""


class ConfigError(SecAccError):
    """Invalid SoC configuration document or field."""


class ProgramError(SecAccError):
    """Invalid driver-program request (bad payload size, unknown workload)."""


class TraceFormatError(SecAccError):
    """Malformed trace or annotation document."""


class AnnotationError(SecAccError):
    """Trace records cannot be labeled (unknown mnemonic, uncovered pc)."""


class ModelViolationError(SecAccError):
    """The simulated driver broke a hardware protocol the model enforces,
    or an analytics result is physically impossible (e.g. utilization > 1)."""
