"""Exception types shared across the package."""


class JRError(Exception):
    """Base class; carries a short machine-readable code."""

    code = "error"


class InvalidContext(JRError):
    code = "invalid_context"


class ZeroArgument(JRError):
    code = "zero_argument"


class SingularBasis(JRError):
    code = "singular_basis"


class DegenerateForm(JRError):
    code = "degenerate_form"


class NotNested(JRError):
    code = "not_nested"


class NotRegular(JRError):
    code = "not_regular"


class DegenerateGram(JRError):
    code = "degenerate_gram"


class SingularDenominator(JRError):
    code = "singular_denominator"


class OutsideOpenLocus(JRError):
    code = "outside_open_locus"


class NonSplitSpace(JRError):
    code = "nonsplit_space"


class NotIntegral(JRError):
    code = "not_integral"


class PreconditionFailed(JRError):
    code = "precondition_failed"


class PhaseOutsideRing(JRError):
    code = "phase_outside_ring"


class ToleranceNotMet(JRError):
    code = "tolerance_not_met"


class ReduciblePolynomial(JRError):
    code = "reducible_polynomial"


class SingularTraceForm(JRError):
    code = "singular_trace_form"


class MultipleDerivativePlaces(JRError):
    code = "multiple_derivative_places"
