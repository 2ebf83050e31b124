"""Exception types shared across the toolkit."""


class HarmcrossError(Exception):
    """Base class for all toolkit errors."""


class AmbiguousPointError(HarmcrossError):
    """A query point sits within tolerance of two boundary pieces or a slit tip."""


class InvalidSetError(HarmcrossError):
    """A boundary set is structurally unusable for the requested operation."""


class DegenerateBoundarySetError(InvalidSetError):
    """The boundary set has zero total length where positive length is required."""


class PointOnBoundaryError(HarmcrossError):
    """An evaluation point lies on (or outside) the boundary of the domain."""


class NoConvergenceError(HarmcrossError):
    """The linear solver failed to reach the requested residual."""


class GridTooCoarseError(HarmcrossError):
    """The grid spacing does not resolve a slit or a boundary clearance."""


class StepBudgetExceededError(HarmcrossError):
    """Random walks ran out of steps even after the retry cap."""


class NotNestedError(HarmcrossError):
    """A family of boundary sets violates the required containment order."""


class IndeterminateMembershipError(HarmcrossError):
    """The membership margin is smaller than the statistical error budget.

    Carries ``margin`` and ``stderr`` so callers can decide how to refine.
    """

    def __init__(self, margin, stderr):
        super().__init__(
            f"margin {margin:+.3e} within 3*stderr ({3.0 * stderr:.3e}); refine the engines"
        )
        self.margin = margin
        self.stderr = stderr


class NoClearanceError(HarmcrossError):
    """Outward clearance is too small for the requested offset scale."""


class TypeMismatchError(HarmcrossError):
    """An arc has the wrong boundary kind for the requested construction."""


class NotStronglyPseudoconvexError(HarmcrossError):
    """The defining function fails the positive-curvature check."""


class NoWitnessError(HarmcrossError):
    """No separating boundary witness exists within the tested range.

    ``diagnostics`` maps each tested index to the reason it failed.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ConfigError(HarmcrossError):
    """A run configuration does not validate."""
