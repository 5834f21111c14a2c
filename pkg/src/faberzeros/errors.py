"""Exception taxonomy. Value-type errors double as ValueError, iteration
failures as RuntimeError, so callers can catch either level."""


class FaberError(Exception):
    """Base class for everything raised by this package on purpose."""


class ParameterError(FaberError, ValueError):
    """Airfoil parameters outside the admissible range (R>1, R*cos(theta)>1)."""


class PoleError(FaberError, ValueError):
    """Evaluation at the pole of the exterior map."""


class DomainError(FaberError, ValueError):
    """Point outside the domain of the requested map (e.g. inside the airfoil)."""


class SingularityError(FaberError, ValueError):
    """Evaluation at the square-root singularity z = c."""


class BranchError(FaberError, ValueError):
    """Branch selection failed (no candidate met its modulus constraint)."""


class CaseError(FaberError, ValueError):
    """Operation not defined for this parameter case (e.g. loop when subcritical)."""


class ConvergenceError(FaberError, RuntimeError):
    """Iteration cap hit before tolerance. May carry a partial result."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class ResolutionError(FaberError, RuntimeError):
    """Grid doubling hit its cap before the quantity stabilized."""


class DeficitError(FaberError, RuntimeError):
    """Fewer zeros located than the degree demands."""

    def __init__(self, msg, missing=0):
        super().__init__(msg)
        self.missing = missing


class MismatchError(FaberError, RuntimeError):
    """Two independently computed zero sets disagree."""

    def __init__(self, msg, unmatched=()):
        super().__init__(msg)
        self.unmatched = list(unmatched)
