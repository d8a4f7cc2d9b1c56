"""Exception hierarchy for the dncone package.

Numerical failures (iteration budgets exhausted, singular shifts) are kept
distinct from contract violations (bad inputs) so the CLI can map them to
separate exit codes.
"""


class DnConeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(DnConeError, ValueError):
    """Input outside the domain an operation is defined on."""


class SymmetryError(DomainError):
    """Matrix input is asymmetric beyond the admissible tolerance."""


class ParseError(DnConeError, ValueError):
    """Malformed serialized document."""


class OrderUnsupported(DomainError):
    """Matrix order outside the range an operation supports."""


class DerivativeUnavailable(DnConeError):
    """An operation needed derivatives the scalar function cannot supply."""


class IllConditioned(DnConeError):
    """Nearly coincident nodes would force a catastrophic division."""


class NonConvergence(DnConeError):
    """Eigensolver failed to reduce the off-diagonal norm within budget."""


class SingularShift(DnConeError):
    """A shifted solve (A + t*I)^{-1} hit a nonpositive shifted eigenvalue."""


class ProjectionStall(DnConeError):
    """Alternating projection failed to converge within the iteration cap."""


class SamplerStall(DnConeError):
    """Rejection sampler exhausted its draw budget without an accept."""


class QuadratureStall(DnConeError):
    """Adaptive quadrature exceeded the panel budget before reaching tolerance."""


class ConditionViolation(DnConeError):
    """A scalar function failed the positivity/limit conditions required of it."""


class InconsistentBracket(DnConeError):
    """A violation was confirmed above a survival point; tolerances are suspect."""


class BracketStall(DnConeError):
    """Bisection could not make progress: the search failed to witness a
    violation that the derivative scan reports must exist."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
