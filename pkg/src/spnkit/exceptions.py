"""Exception hierarchy for spnkit.

Every error raised by the library derives from :class:`SpnkitError` so callers
can catch the whole family.  The leaf classes also derive from the closest
builtin (ValueError) so generic numpy/scipy-style handling keeps working.
"""


class SpnkitError(Exception):
    """Base class for all spnkit errors."""


class DomainError(SpnkitError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ConfigurationError(SpnkitError, ValueError):
    """A profile, capture plan or config object is internally inconsistent."""


class ShapeError(SpnkitError, ValueError):
    """Array dimensions do not satisfy an operation's requirements."""


class DegenerateInputError(SpnkitError, ValueError):
    """Input has no usable signal energy (zero variance or zero norm)."""


class DegenerateFingerprintError(DegenerateInputError):
    """A fingerprint channel normalizes to zero and cannot be produced."""


class ProtocolError(SpnkitError, ValueError):
    """Two fingerprints were processed incompatibly and cannot be compared."""
