"""Uniform space-time meshes, grid fields and shift/difference operators.

Conventions follow the usual hat/check notation: for a node ``(n, m)``
``f`` is ``f[n, m]``, ``f_hat`` is ``f[n + 1, m]``, ``f_check`` is
``f[n - 1, m]`` and ``f_plus``/``f_minus`` shift the spatial index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np


@dataclass(frozen=True)
class SpaceTimeMesh:
    """Uniform orthogonal mesh ``x_k = x0 + k*h``, ``t_l = t0 + l*tau``.

    ``M`` is the number of spatial nodes and ``N`` the number of time steps,
    so there are ``N + 1`` time layers.  For Lagrangian runs the spatial
    coordinate is the mass coordinate ``s`` and ``h`` is the mass step.
    """

    x0: float
    h: float
    M: int
    t0: float
    tau: float
    N: int

    def __post_init__(self) -> None:
        if not (self.h > 0 and np.isfinite(self.h)):
            raise ValueError(f"space step must be positive, got {self.h}")
        if not (self.tau > 0 and np.isfinite(self.tau)):
            raise ValueError(f"time step must be positive, got {self.tau}")
        if self.M < 3:
            raise ValueError(f"mesh needs at least 3 nodes, got {self.M}")
        if self.N < 1:
            raise ValueError(f"mesh needs at least one time step, got {self.N}")

    @property
    def x(self) -> np.ndarray:
        # multiplication, not accumulation: keeps x_{k+1} - x_k == h as exact as possible
        return self.x0 + np.arange(self.M) * self.h

    @property
    def t(self) -> np.ndarray:
        return self.t0 + np.arange(self.N + 1) * self.tau

    def node(self, k: int) -> float:
        return self.x0 + k * self.h

    def time(self, layer: int) -> float:
        return self.t0 + layer * self.tau


@dataclass(frozen=True)
class GridField:
    """Samples of one quantity on a single time layer.

    ``valid`` marks nodes where the value is defined; operators that reach
    outside the grid leave those nodes invalid (NaN) instead of wrapping.
    """

    values: np.ndarray
    layer: int = 0
    valid: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1:
            raise ValueError("grid field must be one-dimensional")
        if self.valid is None:
            object.__setattr__(self, "valid", np.ones(vals.shape, dtype=bool))
        if not np.all(np.isfinite(vals[self.valid])):
            raise ValueError("grid field has non-finite entries on valid nodes")

    def __len__(self) -> int:
        return self.values.size


def _as_values(f) -> np.ndarray:
    return f.values if isinstance(f, GridField) else np.asarray(f, dtype=float)


def diff_forward_t(f, f_hat, tau: float) -> GridField:
    """``D_{+tau}``: ``(f_hat - f) / tau`` node by node."""
    a, b = _as_values(f), _as_values(f_hat)
    if a.shape != b.shape:
        raise ValueError(f"layer length mismatch: {a.shape} vs {b.shape}")
    if not tau > 0:
        raise ValueError("tau must be positive")
    layer = f.layer if isinstance(f, GridField) else 0
    return GridField((b - a) / tau, layer=layer)


def diff_forward_x(f, h: float, periodic: bool = False) -> GridField:
    """``D_{+h}``: ``(f_{m+1} - f_m) / h``; the last node is invalid unless periodic."""
    v = _as_values(f)
    if v.size < 2:
        raise ValueError("field needs at least two nodes")
    layer = f.layer if isinstance(f, GridField) else 0
    if periodic:
        return GridField((np.roll(v, -1) - v) / h, layer=layer)
    out = np.full(v.shape, np.nan)
    out[:-1] = (v[1:] - v[:-1]) / h
    valid = np.ones(v.shape, dtype=bool)
    valid[-1] = False
    return GridField(out, layer=layer, valid=valid)


def diff_backward_x(f, h: float, periodic: bool = False) -> GridField:
    """``D_{-h}``: ``(f_m - f_{m-1}) / h``; the first node is invalid unless periodic."""
    v = _as_values(f)
    if v.size < 2:
        raise ValueError("field needs at least two nodes")
    layer = f.layer if isinstance(f, GridField) else 0
    if periodic:
        return GridField((v - np.roll(v, 1)) / h, layer=layer)
    out = np.full(v.shape, np.nan)
    out[1:] = (v[1:] - v[:-1]) / h
    valid = np.ones(v.shape, dtype=bool)
    valid[0] = False
    return GridField(out, layer=layer, valid=valid)


class StencilWindow:
    """Read access to grid data around a node ``(n, m)``.

    ``fields`` maps a family name (``"u"``, ``"eta"``, ``"x"``, ...) to a 2-D
    array indexed ``[layer, node]``; one-dimensional arrays (bottom samples)
    are indexed by node only.  Reads outside the grid raise ``IndexError``
    unless ``periodic`` is set, in which case the spatial index wraps.
    """

    def __init__(self, fields: Mapping[str, np.ndarray], n: int, m: int,
                 h: float, tau: float, t0: float = 0.0, periodic: bool = False):
        self.fields = fields
        self.n = n
        self.m = m
        self.h = h
        self.tau = tau
        self.t0 = t0
        self.periodic = periodic

    def value(self, family: str, dn: int = 0, dm: int = 0) -> float:
        arr = self.fields[family]
        m = self.m + dm
        if arr.ndim == 1:
            if dn:
                raise IndexError(f"{family!r} has no time layers")
            width = arr.shape[0]
        else:
            width = arr.shape[1]
            n = self.n + dn
            if not 0 <= n < arr.shape[0]:
                raise IndexError(f"layer {n} outside 0..{arr.shape[0] - 1}")
        if self.periodic:
            m %= width
        elif not 0 <= m < width:
            raise IndexError(f"node {m} outside 0..{width - 1}")
        return float(arr[m] if arr.ndim == 1 else arr[self.n + dn, m])

    def shift(self, dn: int = 0, dm: int = 0) -> "StencilWindow":
        return StencilWindow(self.fields, self.n + dn, self.m + dm, self.h,
                             self.tau, self.t0, self.periodic)

    @property
    def t(self) -> float:
        return self.t0 + self.n * self.tau

    # Named accessors for the 9-point stencil.  ``v`` is the family name.
    def center(self, v: str) -> float:
        return self.value(v)

    def plus(self, v: str) -> float:
        return self.value(v, 0, 1)

    def minus(self, v: str) -> float:
        return self.value(v, 0, -1)

    def hat(self, v: str, dm: int = 0) -> float:
        return self.value(v, 1, dm)

    def check(self, v: str, dm: int = 0) -> float:
        return self.value(v, -1, dm)
