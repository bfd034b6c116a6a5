"""Exception types shared across the package."""


class RisaldError(Exception):
    """Base class for every package-specific failure."""


class DimensionMismatch(RisaldError):
    """An array argument has the wrong shape or length."""


class SingularMatrix(RisaldError):
    """A linear solve hit a pivot below the singularity floor."""


class NotPositiveDefinite(RisaldError):
    """A Cholesky-style factorization produced a non-positive pivot."""


class InvalidScene(RisaldError):
    """A scene description violates a structural invariant."""


class DegenerateScene(RisaldError):
    """A physically degenerate geometry made the interaction system unsolvable."""


class InvalidSchedule(RisaldError):
    """Noise-schedule parameters outside their legal ranges."""


class NonFiniteLoss(RisaldError):
    """Training produced a NaN/inf loss; carries a state dump for debugging."""


class CheckpointError(RisaldError):
    """Base class for denoiser checkpoint I/O failures."""


class BadMagic(CheckpointError):
    """Checkpoint file does not start with the expected magic string."""


class TruncatedFile(CheckpointError):
    """Checkpoint file ends before all declared weights were read."""


class DimMismatchOnLoad(CheckpointError):
    """Checkpoint dimensions are malformed or disagree with the caller's expectation."""


class ConfigError(RisaldError):
    """A config/scene file could not be parsed; carries path and line number."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:" if line is None else f"{path}:{line}: "
        super().__init__(f"{where}{message}")
