"""Mass coordinate construction and the two-layer hydrodynamic view.

The mass coordinate satisfies ``ds = rho dx`` at the initial time, so equal
steps in ``s`` carry equal fluid mass and ``rho = 1/x_s``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import CrossingError, DepthError
from .lagrangian import LagrangianScheme


@dataclass(frozen=True, eq=False)
class MassMap:
    """Monotone tabulation ``(s_k, x_k)`` with linear interpolation both ways."""

    s: np.ndarray
    x: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.s, dtype=float)
        x = np.asarray(self.x, dtype=float)
        if s.ndim != 1 or s.shape != x.shape or s.size < 2:
            raise ValueError("s and x must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(s) <= 0) or np.any(np.diff(x) <= 0):
            raise ValueError("mass map must be strictly increasing")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "x", x)

    @property
    def total_mass(self) -> float:
        return float(self.s[-1] - self.s[0])

    def s_of_x(self, x):
        return np.interp(x, self.x, self.s)

    def x_of_s(self, s):
        return np.interp(s, self.s, self.x)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["s", "x"])
            for a, b in zip(self.s, self.x):
                w.writerow([repr(float(a)), repr(float(b))])


def build_mass_coordinate(rho0: Callable | np.ndarray, L: float, h: float) -> MassMap:
    """Cumulative trapezoid integral of ``rho0`` over ``[0, L]`` with step ``h``.

    ``rho0`` is a vectorised callable or an array of samples on the grid.
    """
    n = int(round(L / h))
    if n < 1 or abs(n * h - L) > 1e-9 * L:
        raise ValueError("L must be a positive multiple of h")
    x = np.arange(n + 1) * h
    rho = np.asarray(rho0(x) if callable(rho0) else rho0, dtype=float)
    if rho.shape != x.shape:
        raise ValueError(f"expected {x.size} depth samples, got {rho.size}")
    if np.any(~np.isfinite(rho)) or np.any(rho <= 0):
        raise DepthError("initial depth must be positive")
    s = np.concatenate(([0.0], np.cumsum(0.5 * h * (rho[1:] + rho[:-1]))))
    return MassMap(s, x)


def solve_alpha_cauchy(rho: Callable[[float], float], S: float, hs: float,
                       x0: float = 0.0) -> np.ndarray:
    """Positions ``alpha(k hs)``, k = 0..floor(S/hs), from ``alpha' = 1/rho(alpha)``.

    Classical fourth-order Runge-Kutta with step ``hs``.
    """
    if not (hs > 0 and S > 0):
        raise ValueError("S and hs must be positive")
    K = int(np.floor(S / hs * (1 + 1e-12)))

    def f(a: float) -> float:
        r = float(rho(a))
        if not (np.isfinite(r) and r > 0):
            raise DepthError(f"depth {r:.3g} at x = {a:.6g}")
        return 1.0 / r

    out = np.empty(K + 1)
    a = float(x0)
    out[0] = a
    for k in range(K):
        k1 = f(a)
        k2 = f(a + 0.5 * hs * k1)
        k3 = f(a + 0.5 * hs * k2)
        k4 = f(a + hs * k3)
        a += hs * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        out[k + 1] = a
    return out


def q_flux(rho, rho_prev, p):
    """Pressure flux ``Q`` from ``1/Q = 4/(rho rho_check) - (2/sqrt p)(1/rho + 1/rho_check) + 1/p``."""
    rho, rho_prev, p = (np.asarray(v, dtype=float) for v in (rho, rho_prev, p))
    if np.any(rho <= 0) or np.any(rho_prev <= 0) or np.any(p <= 0):
        raise ValueError("rho, rho_prev and p must be positive")
    sp = np.sqrt(p)
    t1 = 4.0 / (rho * rho_prev)
    t2 = (2.0 / sp) * (1.0 / rho + 1.0 / rho_prev)
    t3 = 1.0 / p
    inv = t1 - t2 + t3
    if np.any(np.abs(inv) <= 1e-14 * (t1 + t2 + t3)):
        raise ZeroDivisionError("degenerate state: 1/Q vanishes")
    out = 1.0 / inv
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class HydroState:
    """Two-layer variables at layer n.

    ``u`` lives on nodes, ``rho``, ``p`` and ``Q`` on cells (m, m+1).
    ``rho = 2/(x_s + x_hat_s)`` and ``p = 1/x_s^2``, so that
    ``x_check_s + x_s = 2/rho_check`` and ``1/sqrt(p) = x_s``.
    """

    n: int
    x: np.ndarray
    u: np.ndarray
    rho: np.ndarray
    p: np.ndarray
    Q: np.ndarray | None


def hydro_view(traj: np.ndarray, hs: float, tau: float) -> list[HydroState]:
    """Two-layer view of a trajectory ``traj[n, m]``.

    Layers 0..N-1 get ``u`` and ``rho``; ``Q`` needs the previous layer and
    is ``None`` on layer 0.
    """
    traj = np.asarray(traj, dtype=float)
    d = np.diff(traj, axis=1)
    if np.any(d <= 0):
        n, m = np.unravel_index(int(np.argmin(d)), d.shape)
        raise CrossingError(f"particles cross at node {m}", layer=int(n))
    xs = d / hs
    views = []
    rho_prev = None
    for n in range(traj.shape[0] - 1):
        u = (traj[n + 1] - traj[n]) / tau
        rho = 2.0 / (xs[n] + xs[n + 1])
        p = 1.0 / xs[n] ** 2
        Q = None if rho_prev is None else q_flux(rho, rho_prev, p)
        views.append(HydroState(n, traj[n], u, rho, p, Q))
        rho_prev = rho
    return views


def hydro_residuals(views: list[HydroState], hs: float, tau: float,
                    scheme: LagrangianScheme) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the two-layer mass and momentum equations.

    Returns arrays of shape ``(len(views) - 1, K - 1)`` for layers 1.. and
    interior nodes:

        mass:     D_{-t}(1/rho) - D_{-s}((u^+ + u_check^+)/2)
        momentum: D_{-t}(u) + kappa D_{-s}(Q) + source(x) - viscosity
    """
    mass, mom = [], []
    for prev, cur in zip(views[:-1], views[1:]):
        # mass on cells m = 0..K-1, reported for cells ending at interior nodes
        vol = ((1.0 / cur.rho) - (1.0 / prev.rho)) / tau
        us = cur.u + prev.u
        flux = (us[1:] - us[:-1]) / (2.0 * hs)
        mass.append((vol - flux)[1:])
        acc = (cur.u - prev.u)[1:-1] / tau
        r = acc + scheme.kappa * (cur.Q[1:] - cur.Q[:-1]) / hs + scheme.source(cur.x[1:-1])
        if scheme.nu:
            du = cur.x - prev.x
            r = r - scheme.nu * (np.diff(du) / (tau * np.diff(cur.x)))[1:]
        mom.append(r)
    return np.array(mass), np.array(mom)


def hydro_multiplier_law(views: list[HydroState], hs: float, tau: float,
                         scheme: LagrangianScheme, f: Callable, t0: float = 0.0) -> np.ndarray:
    """``D_{-t}(y (f(t_hat) - f(t))/tau - f(t) u) - kappa D_{-s}(f(t) Q)``, ``y = x - c``.

    For the multipliers returned by ``extra_multipliers`` this vanishes on
    solutions.  Shape ``(len(views) - 1, K - 1)`` for layers 1.. .
    """
    q = scheme.quadratic
    c = 0.0 if q is None else q[1]
    out = []
    for prev, cur in zip(views[:-1], views[1:]):
        t, tp = t0 + cur.n * tau, t0 + prev.n * tau
        dens = (cur.x - c) * (f(t + tau) - f(t)) / tau - f(t) * cur.u
        dens_p = (prev.x - c) * (f(tp + tau) - f(tp)) / tau - f(tp) * prev.u
        lhs = (dens - dens_p)[1:-1] / tau - scheme.kappa * f(t) * (cur.Q[1:] - cur.Q[:-1]) / hs
        out.append(lhs)
    return np.array(out)


def sigmoid_dam(eta_left: float, eta_right: float, L: float, steepness: float):
    """Smooth step from ``eta_left`` to ``eta_right`` centred at ``L/2``."""
    def eta(xi):
        xi = np.asarray(xi, dtype=float)
        z = np.clip(steepness * (0.5 * L - xi), -700.0, 700.0)
        return eta_left + (eta_right - eta_left) / (1.0 + np.exp(z))
    return eta


__all__ = [
    "MassMap", "build_mass_coordinate", "solve_alpha_cauchy", "q_flux", "HydroState",
    "hydro_view", "hydro_residuals", "hydro_multiplier_law", "sigmoid_dam",
]
