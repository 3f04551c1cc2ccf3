"""Exception and warning types shared across the package."""


class KloostermanError(Exception):
    """Base class for every error raised by this package."""


class NonInvertible(KloostermanError, ValueError):
    """A residue with no modular inverse was passed where one is required."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class IntervalTooLong(KloostermanError, ValueError):
    """Interval longer than the modulus: residues would collide, and the
    orthogonality identities no longer hold."""


class SizeOverflow(KloostermanError, ValueError):
    """Requested transform length exceeds the supported capacity."""


class DegenerateWindow(KloostermanError, ValueError):
    """Window transitions too wide: no room left for a plateau."""


class QuadratureNonConvergence(KloostermanError, RuntimeError):
    """Refinement stalled; the frequency is too high for the node budget."""


class InvalidR(KloostermanError, ValueError):
    """Bound-family parameter r outside its valid range (r >= 2)."""


class ConfigInvalid(KloostermanError, ValueError):
    """Sweep configuration failed validation."""


class OutputIoError(KloostermanError, OSError):
    """Writing or reading experiment output failed."""


class IntervalLengthWarning(UserWarning):
    """Interval length outside [1, c]; bound comparisons lose meaning."""
