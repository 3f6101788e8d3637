"""Exception types shared across the package."""


class DegenerateInputError(ValueError):
    """Input hit a measure-zero degenerate configuration (resample and retry)."""


class NumericalFailureError(RuntimeError):
    """An iterative numerical routine failed to converge."""


class SymmetryViolationError(RuntimeError):
    """A structural symmetry that should hold to roundoff was violated (solver bug)."""


class IllConditionedMeasureError(RuntimeError):
    """Discrete spectral data too ill-conditioned for the three-term recurrence."""


class AccuracyError(RuntimeError):
    """Quadrature did not reach the requested tolerance; best estimate attached."""

    def __init__(self, message, best_estimate, error_estimate):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class DegeneracyWarning(UserWarning):
    """A root sits inside the tolerance band between classification classes."""
