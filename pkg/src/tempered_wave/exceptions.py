"""Exception types raised by :mod:`tempered_wave`."""


class DomainError(ValueError):
    """A parameter lies outside the range the discretization supports."""


class UnsupportedFeatureError(NotImplementedError):
    """The request is well-formed but outside what the scheme covers."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (indicates an assembly bug)."""
