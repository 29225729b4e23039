"""Exception types shared by the solvers."""

from __future__ import annotations


class SolverError(RuntimeError):
    """A time step could not be completed.

    ``layer`` is the index of the layer being computed when the failure
    happened (``None`` when unknown).
    """

    def __init__(self, message: str, layer: int | None = None):
        if layer is not None:
            message = f"layer {layer}: {message}"
        super().__init__(message)
        self.layer = layer


class ConvergenceError(SolverError):
    """Fixed-point iteration did not reach the requested tolerance."""

    def __init__(self, message: str, layer: int | None = None, diagnostics=None):
        super().__init__(message, layer)
        self.diagnostics = diagnostics


class DepthError(SolverError):
    """Nonpositive or non-finite depth encountered."""


class CrossingError(SolverError):
    """Lagrangian particles crossed (non-monotone positions)."""


class PivotError(SolverError):
    """Zero pivot in the tridiagonal elimination."""


class ConfigError(ValueError):
    """Invalid scenario configuration."""
