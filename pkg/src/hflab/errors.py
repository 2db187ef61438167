"""Exception hierarchy shared by all hflab modules."""


class HFLabError(Exception):
    """Base class for all errors raised by hflab."""


class ConfigError(HFLabError):
    """Invalid construction parameter or run configuration."""


class DomainError(HFLabError):
    """Function evaluated outside its mathematical domain (e.g. T at 0)."""


class UnsupportedOrderError(HFLabError):
    """Derivative order beyond what the weight family supports."""


class ScaleOverflowError(HFLabError):
    """Value left the representable range even after rescaling."""


class ConvergenceError(HFLabError):
    """An iterative solver failed to converge; carries the last residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PrecisionError(HFLabError):
    """Requested accuracy unreachable at the configured precision."""


class QuadratureError(HFLabError):
    """Adaptive quadrature failed to stabilize."""


class GateRejection(HFLabError):
    """Input rejected by a theorem-hypothesis gate (not a numerical failure)."""


class AcceptanceFailure(HFLabError):
    """A run-level acceptance check (e.g. monotone decrease) failed."""
