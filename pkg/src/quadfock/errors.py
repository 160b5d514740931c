"""Exception types shared across the library."""


class QuadFockError(Exception):
    """Base class for all library errors."""


class DomainError(QuadFockError):
    """Input lies outside the admissible region of a formula."""


class NonInjectiveError(QuadFockError):
    """A piecewise-affine map is not injective where injectivity is required."""


class NotHermitianError(QuadFockError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class UnconvergedError(QuadFockError):
    """A truncated series did not reach the requested tail bound."""
