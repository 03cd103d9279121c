"""Exception hierarchy shared by all modules."""


class ApproxDctError(Exception):
    """Base class for every error raised by this package."""


class CatalogError(ApproxDctError, KeyError):
    """Unknown transform name."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParameterError(ApproxDctError, ValueError):
    """Unsupported transform parameter."""


class OrthogonalityError(ApproxDctError, ValueError):
    """T.T^T is not diagonal, so no diagonal scaling can orthonormalize T."""


class DomainError(ApproxDctError, ValueError):
    """Non-finite or otherwise out-of-domain numeric input."""


class DegenerateError(ApproxDctError, ArithmeticError):
    """A quantity required to be positive was not (e.g. a coefficient variance)."""


class DimensionError(ApproxDctError, ValueError):
    """Image or block dimensions are incompatible with the operation."""


class RetentionError(ApproxDctError, ValueError):
    """Retention count outside 1..64."""


class CorpusError(ApproxDctError, ValueError):
    """Empty corpus or unreadable manifest."""


class WordLengthError(ApproxDctError, ValueError):
    """Word length outside the supported set."""


class InexactShiftError(ApproxDctError, ArithmeticError):
    """An odd value was halved in an integer datapath."""

    def __init__(self, stage, lane, value):
        super().__init__(f"inexact right shift of odd value {value} at stage {stage}, lane {lane}")
        self.stage = stage
        self.lane = lane
        self.value = value


class PGMError(ApproxDctError, ValueError):
    """Base class for PGM parse errors."""


class PGMHeaderError(PGMError):
    """Malformed or non-P5 header."""


class PGMDepthError(PGMError):
    """maxval other than 255."""


class PGMTruncatedError(PGMError):
    """Payload shorter than width*height bytes."""
