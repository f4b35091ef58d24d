"""Exception types raised across the package."""


class LuryeError(Exception):
    """Base class for all errors raised by :mod:`lurye`."""


class PoleOnBoundary(LuryeError, ZeroDivisionError):
    """Frequency response requested at a pole of the plant."""


class DomainError(LuryeError, ValueError):
    """Input outside the domain where an operation is defined (e.g. unstable plant)."""


class InvalidEnvelope(LuryeError, ValueError):
    """Envelope functions violate monotonicity or sector ordering."""


class SlopeExceedsK(LuryeError, ValueError):
    """Loop-transformation gain does not dominate the envelope slopes."""


class OffsetExceedsSaturation(LuryeError, ValueError):
    """Steady-state offset reaches the saturation level."""


class InvalidMultiplier(LuryeError, ValueError):
    """Multiplier coefficients violate the class invariants."""


class Infeasible(LuryeError):
    """No feasible point (or no multiplier with a positive margin) exists.

    Attributes
    ----------
    margin : float or None
        Best margin the search attained, when known.
    """

    def __init__(self, message="problem is infeasible", margin=None):
        super().__init__(message)
        self.margin = margin


class Unbounded(LuryeError):
    """Linear program objective is unbounded."""


class NoMultiplierFound(Infeasible):
    """Bisection could not certify even the smallest ratio."""


class AlgebraicLoop(LuryeError, ValueError):
    """Plant has direct feedthrough so the loop is not explicitly computable."""
