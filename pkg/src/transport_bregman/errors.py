"""Exception types raised by the divergence routines."""


class DomainError(ValueError):
    """An argument lies outside the open domain of a potential."""


class NoDualPointError(ValueError):
    """A dual coordinate is outside the range of the potential's derivative."""


class DegenerateQuantileError(ValueError):
    """A quantile derivative is zero, infinite or otherwise unusable."""


class QuadratureError(ArithmeticError):
    """A quadrature integrand produced a non-finite value."""


class SupportError(ValueError):
    """One density vanishes where the other carries mass."""
