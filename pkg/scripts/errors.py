"""
Exception hierarchy shared by every pipeline stage.

Each class carries the exit code the command line uses when the error escapes
to the top level.
"""


class GenusKitError(Exception):
    """Base class for all errors raised by the genus expansion toolkit."""

    exit_code = 1


class UsageError(GenusKitError):
    """Contradictory or out-of-range options."""

    exit_code = 3


class PotentialFormatError(GenusKitError):
    """Malformed potential file or rational string."""

    exit_code = 4


class ExactAlgebraError(GenusKitError):
    """Division by zero, non-invertible series or mismatched truncation caps."""

    exit_code = 5


class TruncationError(ExactAlgebraError):
    """A requested order lies beyond the truncation cap of a series."""


class DegeneratePotentialError(GenusKitError):
    """W' (or the deformed D) vanishes identically."""

    exit_code = 6


class RootNotFoundError(GenusKitError):
    """The hodograph equation has no admissible positive root."""

    exit_code = 7


class NonUniqueRootError(GenusKitError):
    """Several positive roots exist and none is certified as the one-cut root."""

    exit_code = 7

    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = list(roots)


class InternalConsistencyError(GenusKitError):
    """A derivation that must be exact left a nonzero residual."""

    exit_code = 10


class CertificateMismatch(GenusKitError):
    """A total-derivative certificate failed; carries the residual."""

    exit_code = 11

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class UnsupportedOrderError(GenusKitError):
    """Requested genus or order is outside what is implemented."""

    exit_code = 12


class DivergentMonomialError(GenusKitError):
    """A t-monomial with exponent m <= 2 reached the t-integration."""

    exit_code = 13


class KappaIntegrityError(GenusKitError):
    """A counting number came out negative or non-integral."""

    exit_code = 14


class PhaseRegionError(GenusKitError):
    """Parameters lie outside the supported phase regions."""

    exit_code = 15


class UncertifiedPhaseError(PhaseRegionError):
    """Inside a supported region, but the one-cut criterion does not apply there."""


class OneCutAnsatzError(GenusKitError):
    """h changes sign on the candidate support."""

    exit_code = 16


class NonExactIntegrandError(GenusKitError):
    """A differential polynomial that should be a total x-derivative is not."""

    exit_code = 17


class BandOverflowError(GenusKitError):
    """A banded matrix-element request needs recurrence data beyond n_max."""

    exit_code = 18


class PrecisionExhaustedError(GenusKitError):
    """Quadrature or orthogonality lost the requested precision."""

    exit_code = 19
