"""Exception hierarchy shared by all spinlogic modules."""


class SpinLogicError(Exception):
    """Base class for all spinlogic errors."""


class ValidationError(SpinLogicError):
    """Malformed input: dimension mismatch, unknown spin/net, bad clamp value."""


class LandscapeCapError(SpinLogicError):
    """Exhaustive enumeration refused: too many free spins."""


class InfeasibleError(SpinLogicError):
    """The requested basis cannot represent the gate with a positive gap."""


class UnboundedError(SpinLogicError):
    """The synthesis program is unbounded; a coefficient bound is required."""
