"""Exception hierarchy shared by every bsq module."""


class BSQError(Exception):
    """Base class for all errors raised by bsq."""


class DomainError(BSQError, ValueError):
    """Potential evaluated outside its domain of definition."""


class NoWellError(BSQError):
    """The potential has no local minimum to quantize about."""


class InvalidEnergyError(BSQError, ValueError):
    """Energy outside the window where two turning points exist."""


class UnboundLevelError(BSQError):
    """Requested quantum number lies above the highest bound level."""


class NotAvailableError(BSQError):
    """No closed form exists for this potential kind."""


class NotApplicableError(BSQError):
    """Operation is meaningless for this potential, e.g. threshold of an unbounded spectrum."""


class AccuracyError(BSQError):
    """A numerical procedure failed to reach its requested tolerance."""


class VariantMismatchError(BSQError, ValueError):
    """Series variant does not match the well (e.g. sextic variant with a cubic term)."""


class MarginalCaseError(BSQError):
    """The marginal exponent k = 2 of the Lennard-Jones family."""


class FitError(BSQError):
    """Interpolation coefficients could not be determined."""


class ResolutionError(AccuracyError):
    """Oracle grid too coarse: levels moved under grid refinement."""


class GridError(BSQError, ValueError):
    """Grid settings violate their invariants."""


class ShapeError(BSQError, ValueError):
    """Two spectra cannot be compared level by level."""


class ExpressionSyntaxError(BSQError, ValueError):
    """Malformed potential expression; ``offset`` is the byte offset of the fault."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnknownIdentifierError(ExpressionSyntaxError):
    pass


class ConfigError(BSQError, ValueError):
    """Invalid job configuration."""
