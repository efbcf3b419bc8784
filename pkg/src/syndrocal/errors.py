"""Exception types raised across the package."""


class SyndrocalError(Exception):
    """Base class for all package errors."""


class DimensionError(SyndrocalError, ValueError):
    """Operands live on incompatible spaces (qubit counts, bit widths)."""


class DistributionError(SyndrocalError, ValueError):
    """A value tagged as a probability distribution is not one."""


class UndefinedFactorError(SyndrocalError, ArithmeticError):
    """A calibration ratio is undefined because its denominator vanishes."""


class SupportCapExceeded(SyndrocalError, MemoryError):
    """The sparse forward engine outgrew its configured support cap."""


class OracleSizeError(SyndrocalError, ValueError):
    """The density-matrix oracle was asked to simulate too many qubits."""


class ParseError(SyndrocalError, ValueError):
    """Malformed text input (Pauli strings, circuit dumps, code files)."""
