"""Exception types."""


class GeometryError(ValueError):
    """Edge lengths that do not describe a realizable Euclidean block."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


class FlowStopped(RuntimeError):
    """Raised internally when the integrator must halt before the end time."""

    def __init__(self, reason, t=None):
        super().__init__(reason if t is None else f"{reason} at t={t:.6g}")
        self.reason = reason
        self.t = t
