class DimensionError(ValueError):
    """Input has the wrong shape or dimension."""


class NotHermitianError(ValueError):
    """A Hermitian matrix was required."""


class InvalidStateError(ValueError):
    """Input is not a physical density matrix."""


class StratumConsistencyError(RuntimeError):
    """Gram rank and eigenvalue multiplicities disagree on the orbit type."""


class MatrixFormatError(ValueError):
    """Malformed matrix document. ``line``/``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
