"""Exceptions and warnings raised by contact_cwc."""


class CWCError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateNormalForce(CWCError, ValueError):
    """The normal force is too small for an operation that divides by it."""


class ZeroFriction(CWCError, ValueError):
    """The operation needs a strictly positive friction coefficient."""


class PointOutsidePatch(CWCError, ValueError):
    """An application point lies outside the contact rectangle."""


class Infeasible(CWCError):
    """No corner forces inside the friction pyramids realize the wrench."""


class NumericalFailure(CWCError, ArithmeticError):
    """The LP kernel or a polytope routine could not reach a reliable answer."""


class ExpressionSwell(UserWarning):
    """Fourier-Motzkin elimination produced more rows than the configured cap."""
