"""Exception types raised by triqubit."""


class TriqubitError(Exception):
    """Base class for all library errors."""


class ZeroState(TriqubitError, ValueError):
    """All amplitudes vanish, so the state cannot be normalized."""


class NonUnitary(TriqubitError, ValueError):
    """A matrix passed as a local unitary fails the unitarity check."""


class NonConvergence(TriqubitError, RuntimeError):
    """The closest-product-state search did not converge."""


class ResidualTooLarge(TriqubitError, RuntimeError):
    """Coefficients that should vanish in the symmetric form do not."""


class NotGhzClass(TriqubitError, ValueError):
    """The two-term decomposition needs a nonzero three-tangle."""


class NotReal(TriqubitError, ValueError):
    """No product basis makes the state real."""


class GhzFormRequired(TriqubitError, ValueError):
    """The real-basis construction needed a two-term form that does not exist."""


class NotType4d(TriqubitError, ValueError):
    """The state does not belong to type 4d."""


class RangeViolation(TriqubitError, ValueError):
    """Invariant values lie outside their admissible ranges."""


class DegenerateDenominator(TriqubitError, ValueError):
    """Parameter recovery divides by J1 + J4 = 0."""


class ClassMismatch(TriqubitError, RuntimeError):
    """A minimal decomposition needs more terms than the class allows."""


class StateFormatError(TriqubitError, ValueError):
    """A state file does not match the JSON schema."""
