"""Node-wise and global conservation diagnostics."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .direct_method import energy_law
from .euler_scheme import EulerState, SchemeFamily, block_from_window, layer_F1, layer_F2
from .grid import StencilWindow
from .lagrangian import LagrangianScheme, extra_multipliers
from .mass_coordinates import hydro_multiplier_law, hydro_residuals, hydro_view


# ---------------------------------------------------------------------------
# Eulerian

def _layer_block(prev: EulerState, cur: EulerState):
    """Column pairs for every cell of a layer pair, shaped ``(2, M-1)``."""
    def pair(a):
        return np.stack([a[:-1], a[1:]])
    return (pair(prev.u), pair(cur.u), pair(prev.eta), pair(cur.eta), pair(prev.H))


def euler_layer_residuals(fam: SchemeFamily, prev: EulerState, cur: EulerState) -> dict[str, np.ndarray]:
    """Energy, mass and momentum residuals on all cells between two layers.

    The energy law is that of the family member with the same ``(w11, z12)``;
    for the control scheme this is the law it fails to satisfy.
    """
    h, tau = prev.h, prev.tau
    block = _layer_block(prev, cur)
    return {
        "energy": energy_law(fam, block, h, tau),
        "mass": layer_F1(fam, prev.u, cur.u, prev.eta, cur.eta, prev.H, h, tau),
        "momentum": layer_F2(fam, prev.u, cur.u, prev.eta, cur.eta, prev.H, h, tau),
    }


def local_energy_residual_euler(window: StencilWindow, fam: SchemeFamily) -> float:
    return float(energy_law(fam, block_from_window(window), window.h, window.tau))


def local_mass_residual_euler(window: StencilWindow, fam: SchemeFamily) -> float:
    u, uh, e, eh, H = block_from_window(window)
    return float(layer_F1(fam, u, uh, e, eh, H, window.h, window.tau)[0])


def local_momentum_residual_euler(window: StencilWindow, fam: SchemeFamily) -> float:
    u, uh, e, eh, H = block_from_window(window)
    return float(layer_F2(fam, u, uh, e, eh, H, window.h, window.tau)[0])


def total_energy(state: EulerState) -> float:
    """``(h/2) sum_m (rho u^2 + eta^2)`` with ``rho = eta + H``."""
    return 0.5 * state.h * float(np.sum(state.rho * state.u**2 + state.eta**2))


def total_variation(values) -> float:
    """``sum |v_{m+1} - v_m|``."""
    return float(np.sum(np.abs(np.diff(np.asarray(values, dtype=float)))))


def relative_energy_change(series) -> np.ndarray:
    H = np.asarray(series, dtype=float)
    if H.size == 0 or H[0] == 0:
        raise ValueError("relative change needs a nonzero initial energy")
    return np.abs(H - H[0]) / abs(H[0])


# ---------------------------------------------------------------------------
# Lagrangian

def _potential(scheme: LagrangianScheme, a, b):
    q = scheme.quadratic
    if q is None:
        return None
    curv, c, slope = q
    ya, yb = a - c, b - c
    return scheme.sigma * scheme.a * (curv * ya * yb + slope * (ya + yb))


def lagr_energy_density(traj: np.ndarray, hs: float, tau: float,
                        scheme: LagrangianScheme) -> np.ndarray | None:
    """Energy density on layers 0..N-1, nodes 0..K-1; ``None`` without a law."""
    X = np.asarray(traj, dtype=float)
    pot = _potential(scheme, X[:-1, :-1], X[1:, :-1])
    if pot is None:
        return None
    xt = (X[1:, :-1] - X[:-1, :-1]) / tau
    inv_xs = hs / np.diff(X, axis=1)
    return xt * xt + scheme.kappa * (inv_xs[:-1] + inv_xs[1:]) + pot


def lagr_energy_flux(traj: np.ndarray, hs: float, tau: float, scheme: LagrangianScheme) -> np.ndarray:
    """``kappa g_m mu_{m+1}`` on layers 1..N-1, cells 0..K-1."""
    X = np.asarray(traj, dtype=float)
    d = np.diff(X, axis=1)
    g = hs * hs / (d[2:] * d[:-2])
    mu = (X[2:] - X[:-2]) / tau
    return scheme.kappa * g * mu[:, 1:]


def lagr_total_energy(traj: np.ndarray, hs: float, tau: float,
                      scheme: LagrangianScheme) -> np.ndarray | None:
    """Discrete energy ``hs * sum_m density_m`` per layer, wall node included."""
    dens = lagr_energy_density(traj, hs, tau, scheme)
    return None if dens is None else hs * dens.sum(axis=1)


def lagr_mass_residual(traj: np.ndarray, hs: float, tau: float) -> np.ndarray:
    """``D_{-t}(x_hat_s) - D_{-s}(x_t^+)`` on layers 1..N-1, interior nodes.

    Differences are formed before division so both sides see the same
    rounding.
    """
    X = np.asarray(traj, dtype=float)
    d = np.diff(X, axis=1)           # x_{m+1} - x_m
    dt = np.diff(X, axis=0)          # x^{n+1} - x^n
    left = d[2:] - d[1:-1]           # layer n+1 minus layer n, cell m
    right = dt[1:, 1:] - dt[1:, :-1]
    return (left - right)[:, 1:] / (tau * hs)


def lagr_laws(traj: np.ndarray, hs: float, tau: float, scheme: LagrangianScheme,
              t0: float = 0.0, hydro: bool = True) -> dict[str, np.ndarray]:
    """Every applicable discrete law on layers 1..N-1 and interior nodes 1..K-1.

    ``traj`` holds layers 0..N.  Values are signed residuals.
    """
    X = np.asarray(traj, dtype=float)
    if X.ndim != 2 or X.shape[0] < 3 or X.shape[1] < 3:
        raise ValueError("trajectory needs at least 3 layers and 3 particles")
    if np.any(np.diff(X, axis=1) <= 0):
        raise ValueError("trajectory has crossing particles")
    out: dict[str, np.ndarray] = {"mass": lagr_mass_residual(X, hs, tau)}

    dens = lagr_energy_density(X, hs, tau, scheme)
    if dens is not None:
        flux = lagr_energy_flux(X, hs, tau, scheme)
        out["energy"] = (np.diff(dens, axis=0)[:, 1:] / tau
                         + np.diff(flux, axis=1) / hs)

    d = np.diff(X, axis=1)
    g = hs * hs / (d[2:] * d[:-2])   # layers 1..N-1
    if scheme.kind in ("flat", "linear"):
        xt = np.diff(X, axis=0) / tau
        src = scheme.source(X[1:-1, 1:-1])
        out["momentum"] = (np.diff(xt, axis=0)[:, 1:-1] / tau
                           + scheme.kappa * np.diff(g, axis=1) / hs + src)

    q = scheme.quadratic
    c = 0.0 if q is None else q[1]
    t = t0 + np.arange(X.shape[0]) * tau
    for name, f in extra_multipliers(scheme, tau):
        fv = np.array([f(ti) for ti in t])
        y = X - c
        xt = np.diff(X, axis=0) / tau
        dens_f = (y[:-1] * (np.diff(fv) / tau)[:, None] - fv[:-1, None] * xt)
        out[name] = (np.diff(dens_f, axis=0)[:, 1:-1] / tau
                     - fv[1:-1, None] * scheme.kappa * np.diff(g, axis=1) / hs)

    if hydro:
        views = hydro_view(X, hs, tau)
        hm, hp = hydro_residuals(views, hs, tau, scheme)
        out["hydro_mass"] = hm
        out["hydro_momentum"] = hp
        for name, f in extra_multipliers(scheme, tau):
            out[f"hydro_{name}"] = hydro_multiplier_law(views, hs, tau, scheme, f, t0)
    return out


# ---------------------------------------------------------------------------
# Report

@dataclass
class ConservationReport:
    """Per-law node residual magnitudes ``|delta eps|`` plus the energy series."""

    residuals: dict[str, list[tuple[int, np.ndarray]]] = field(default_factory=dict)
    energy: list[float] = field(default_factory=list)

    def add(self, law: str, layer: int, values) -> None:
        self.residuals.setdefault(law, []).append((int(layer), np.abs(np.asarray(values, float))))

    def add_array(self, law: str, first_layer: int, values: np.ndarray) -> None:
        for i, row in enumerate(np.asarray(values)):
            self.add(law, first_layer + i, row)

    @property
    def laws(self) -> list[str]:
        return list(self.residuals)

    @property
    def e_R(self) -> np.ndarray:
        return relative_energy_change(self.energy) if self.energy else np.array([])

    def max_by_layer(self, law: str) -> np.ndarray:
        return np.array([float(np.max(v, initial=0.0)) for _, v in self.residuals[law]])

    def layers(self, law: str) -> np.ndarray:
        return np.array([n for n, _ in self.residuals[law]], dtype=int)

    def max(self, law: str) -> float:
        return float(np.max(self.max_by_layer(law), initial=0.0))

    def summary(self) -> dict:
        out = {}
        for law, rows in self.residuals.items():
            out[law] = {
                "max": max((float(np.max(v, initial=0.0)) for _, v in rows), default=0.0),
                "mean": float(np.mean(np.concatenate([v for _, v in rows]))) if rows else 0.0,
                "layers": len(rows),
            }
        if self.energy:
            out["energy_drift"] = {"max_e_R": float(np.max(self.e_R)), "final_e_R": float(self.e_R[-1])}
        return out

    def write_conservation_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["layer", "law", "max", "mean"])
            for law, rows in self.residuals.items():
                for n, v in rows:
                    w.writerow([n, law, _fmt(np.max(v, initial=0.0)), _fmt(np.mean(v) if v.size else 0.0)])

    def write_node_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["layer", "law", "m", "abs_residual"])
            for law, rows in self.residuals.items():
                for n, v in rows:
                    for m, r in enumerate(v):
                        w.writerow([n, law, m, _fmt(r)])

    def write_energy_csv(self, path: str | Path) -> None:
        eR = self.e_R
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["layer", "H", "e_R"])
            for n, (H, e) in enumerate(zip(self.energy, eR)):
                w.writerow([n, _fmt(H), _fmt(e)])

    def write_summary_json(self, path: str | Path, extra: dict | None = None) -> None:
        data = {"laws": self.summary()}
        if extra:
            data.update(extra)
        with open(path, "w", newline="\n") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fmt(v) -> str:
    return repr(float(v))


def lagr_conservation_suite(traj: np.ndarray, hs: float, tau: float,
                            scheme: LagrangianScheme, t0: float = 0.0) -> ConservationReport:
    """Report with every applicable Lagrangian law and the total energy series."""
    rep = ConservationReport()
    for law, vals in lagr_laws(traj, hs, tau, scheme, t0).items():
        rep.add_array(law, 1, vals)
    E = lagr_total_energy(traj, hs, tau, scheme)
    if E is not None:
        rep.energy = [float(e) for e in E]
    return rep


__all__ = [
    "euler_layer_residuals", "local_energy_residual_euler", "local_mass_residual_euler",
    "local_momentum_residual_euler", "total_energy", "total_variation", "relative_energy_change",
    "lagr_energy_density", "lagr_energy_flux", "lagr_total_energy", "lagr_mass_residual",
    "lagr_laws", "ConservationReport", "lagr_conservation_suite",
]
