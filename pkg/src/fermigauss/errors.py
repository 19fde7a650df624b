"""Exception hierarchy for fermigauss.

All library errors derive from :class:`FermiGaussError` so callers can
catch everything numeric with one handler.  Input/validation problems
raised while parsing external data derive from :class:`ValidationError`.
"""


class FermiGaussError(Exception):
    """Base class for all fermigauss errors."""


class NotAntisymmetricError(FermiGaussError):
    """A matrix required to satisfy ``A.T == -A`` does not."""


class OddDimensionError(FermiGaussError):
    """A Pfaffian was requested for an odd-dimensional matrix."""


class NotGeneralizedAntisymmetricError(FermiGaussError):
    """A 2M x 2M matrix does not satisfy ``sigma == -X sigma.T X``."""


class SingularMatrixError(FermiGaussError):
    """A matrix inverse was requested but the matrix is (near) singular."""


class SingularCovarianceError(FermiGaussError):
    """The covariance of a Gaussian operator is not invertible."""


class ModeCountError(FermiGaussError):
    """Mode count outside the supported range 1..6."""


class ModeMismatchError(FermiGaussError):
    """Two objects defined for different mode counts were combined."""


class DimensionMismatchError(FermiGaussError):
    """Dense operators with incompatible dimensions were combined."""


class IndexOutOfRangeError(FermiGaussError):
    """An extended (0..2M-1) or mode (0..M-1) index is out of range."""


class NotPhysicalError(FermiGaussError):
    """Gaussian parameters fail the physical-state conditions."""


class NotThermalError(FermiGaussError):
    """An operation restricted to m = m+ = 0 received anomalous blocks."""


class StepTooLargeError(FermiGaussError):
    """Finite-difference derivative disagrees with the analytic field."""


class BranchAmbiguityError(FermiGaussError):
    """The moment generating function hit a zero of its normalisation."""


class NotDiagonalError(FermiGaussError):
    """A density matrix required to be diagonal has off-diagonal weight."""


class SuperselectionError(FermiGaussError):
    """A density matrix has coherences between sectors of odd number difference."""


class NotPositiveError(FermiGaussError):
    """A density matrix is not positive semidefinite (or not trace one)."""


class TotalNumberMismatchError(FermiGaussError):
    """Occupation vectors of a thermal limit family have unequal totals."""


class OddNumberDifferenceError(FermiGaussError):
    """Occupation vectors differ by an odd total number of fermions."""


class ValidationError(FermiGaussError):
    """Invalid external input (CLI / JSON)."""


class ParseError(ValidationError):
    """Malformed JSON input."""
