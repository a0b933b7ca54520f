"""Exception types raised across the package."""


class TorusQuotError(Exception):
    """Base class for analysis errors."""


class DimensionError(TorusQuotError, ValueError):
    pass


class ZeroVectorError(TorusQuotError, ValueError):
    pass


class Mismatch(TorusQuotError):
    """A series is not represented by the requested denominator."""

    def __init__(self, degree, message=None):
        self.degree = degree
        super().__init__(message or f"inconsistent fit at degree {degree}")


class BudgetError(TorusQuotError):
    pass


class NotFullRank(TorusQuotError):
    pass


class NotSimplicial(TorusQuotError):
    pass


class DegeneratePolytope(TorusQuotError):
    pass


class NotDim2Form(TorusQuotError):
    pass


class GcdViolation(TorusQuotError):
    pass


class IdentityFailure(TorusQuotError):
    """A bracket identity failed; carries the nonzero difference."""

    def __init__(self, name, difference=None):
        self.name = name
        self.difference = difference
        super().__init__(f"bracket identity {name} failed: {difference}")


class ClosureBudget(TorusQuotError):
    pass


class InvalidParams(TorusQuotError, ValueError):
    pass


class PhiAmbiguous(TorusQuotError):
    pass


class IntegralityFailure(TorusQuotError):
    pass


class UnsupportedMatrix(TorusQuotError):
    pass


class OracleDisagreement(TorusQuotError, AssertionError):
    """Two independent computations of the same quantity disagree."""
