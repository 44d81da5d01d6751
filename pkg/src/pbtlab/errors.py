"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Subsystem dimensions do not match the operand shape."""


class NotHermitianError(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class InvalidStateError(ValueError):
    """Base class for density-matrix invariant violations."""


class StateHermiticityError(InvalidStateError, NotHermitianError):
    pass


class StateTraceError(InvalidStateError):
    pass


class StateNegativityError(InvalidStateError):
    pass


class CPTPError(ValueError):
    """Channel fails complete positivity or trace preservation."""


class SimplexError(ValueError):
    """Probability weights are negative or do not sum to one."""


class SpinError(ValueError):
    """Invalid angular-momentum quantum numbers."""
