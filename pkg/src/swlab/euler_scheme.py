"""Two-parameter family of conservative Eulerian schemes and its time stepper.

The family approximates

    eta_t + ((eta + H) u)_x = 0,    u_t + u u_x + eta_x = 0

on the four-point block (n, n+1) x (m, m+1).  Mass and momentum-form
equations are written as

    F1 = D_{+t}(p1 eta + (1 - p1) eta_+) + D_{+h}( sum_kp w_kp (eta^{n+k} + H) u^{n+p} )
    F2 = D_{+t}(q1 u + (1 - q1) u_+)
         + D_{+h}( (z11 u^2 + z12 u u_hat + z22 u_hat^2)/2 + q2 eta + (1 - q2) eta_hat )

and the free parameters ``(w11, z12)`` fix every other coefficient so that
a discrete energy law exists.  ``(0, 0)`` and ``(1/2, 1)`` are the two named
members; the control scheme keeps the ``(1/2, 1)`` mass flux but weights the
surface heights in the momentum flux as ``(eta_hat + 3 eta)/4``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DepthError
from .grid import StencilWindow


@dataclass(frozen=True, eq=False)
class SchemeFamily:
    """Full coefficient set of one family member.

    Index conventions: ``B[k, l]`` multiplies ``eta^{n+k}_{m+l}``,
    ``w[k, p]`` multiplies ``(eta^{n+k}_m + H_m) u^{n+p}_m``,
    ``a[k, l, p, q]`` multiplies ``u^{n+k}_{m+l} u^{n+p}_{m+q}`` and
    ``b[k, l, p, q]`` multiplies ``(eta^{n+k}_{m+l} + H_m) u^{n+p}_{m+q}``.
    """

    w11: float
    z12: float
    B22: float
    b2111: float
    p1: float
    q1: float
    q2: float
    z11: float
    z22: float
    B: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    naive: bool = False

    @property
    def conservative(self) -> bool:
        return not self.naive

    @property
    def name(self) -> str:
        if self.naive:
            return "scm_naive"
        if self.w11 == 0 and self.z12 == 0:
            return "scm_arb"
        if self.w11 == 0.5 and self.z12 == 1:
            return "scm_sym"
        return f"family({self.w11:g},{self.z12:g})"

    @property
    def z(self) -> tuple[float, float, float]:
        return self.z11, self.z12, self.z22

    def constraint_sums(self) -> dict[str, float]:
        """Sums that must all equal one for a consistent approximation."""
        return {
            "a": float(self.a.sum()),
            "b": float(self.b.sum()),
            "B": float(self.B.sum()),
            "z": self.z11 + self.z12 + self.z22,
        }


def family_coefficients(w11: float, z12: float, *, B22: float = 0.5) -> SchemeFamily:
    """Coefficient set for the free parameters ``(w11, z12)``.

    ``B22`` is fixed at 1/2 by the coefficient sums; it is exposed only so
    tests can inject a corrupted value and watch the energy identity fail.
    The remaining free ``a`` coefficients are set to zero.
    """
    w11 = float(w11)
    z12 = float(z12)
    b2111 = 0.5 - w11
    B = np.zeros((2, 2))
    B[0, 1] = B22
    B[1, 1] = B22
    w = np.array([
        [w11, w11 - 0.5 * z12],
        [b2111 / (2.0 * B22), (B22 * z12 + b2111) / (2.0 * B22)],
    ])
    a = np.zeros((2, 2, 2, 2))
    a[0, 1, 0, 1] = 2.0 * b2111
    a[0, 1, 1, 1] = 2.0 * B22 * z12
    a[1, 1, 1, 1] = 4.0 * B22 * w11 - 2.0 * B22 * z12
    b = np.zeros((2, 2, 2, 2))
    b[0, 0, 0, 0] = 2.0 * B22 * w11
    b[0, 0, 1, 0] = 2.0 * B22 * w11 - B22 * z12
    b[1, 0, 0, 0] = b2111
    b[1, 0, 1, 0] = B22 * z12 + b2111
    return SchemeFamily(
        w11=w11, z12=z12, B22=float(B22), b2111=b2111,
        p1=0.0, q1=1.0, q2=0.5,
        z11=b2111 / B22, z22=2.0 * w11 - z12,
        B=B, w=w, a=a, b=b,
    )


SCM_ARB = family_coefficients(0.0, 0.0)
SCM_SYM = family_coefficients(0.5, 1.0)
# Non-conservative control: sym mass flux, momentum flux (u u_hat + eta_hat/2 + 3 eta/2)/2.
SCM_NAIVE = replace(SCM_SYM, q2=0.75, naive=True)


def scheme_by_name(name: str) -> SchemeFamily:
    table = {"scm_arb": SCM_ARB, "scm_sym": SCM_SYM, "scm_naive": SCM_NAIVE}
    try:
        return table[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; expected one of {sorted(table)}") from None


# ---------------------------------------------------------------------------
# Fluxes and residuals on whole layers (cells m = 0..M-2)

def mass_flux(fam: SchemeFamily, u, uh, e, eh, H):
    """Column flux under ``D_{+h}`` in F1."""
    w = fam.w
    return (e + H) * (w[0, 0] * u + w[0, 1] * uh) + (eh + H) * (w[1, 0] * u + w[1, 1] * uh)


def momentum_flux(fam: SchemeFamily, u, uh, e, eh):
    """Column flux under ``D_{+h}`` in F2."""
    return (0.5 * (fam.z11 * u * u + fam.z12 * u * uh + fam.z22 * uh * uh)
            + fam.q2 * e + (1.0 - fam.q2) * eh)


def layer_F1(fam: SchemeFamily, u, uh, e, eh, H, h: float, tau: float) -> np.ndarray:
    """F1 on every cell of a layer pair (length M-1)."""
    u, uh, e, eh, H = map(np.asarray, (u, uh, e, eh, H))
    de = eh - e
    dt = (fam.p1 * de[:-1] + (1.0 - fam.p1) * de[1:]) / tau
    phi = mass_flux(fam, u, uh, e, eh, H)
    return dt + (phi[1:] - phi[:-1]) / h


def layer_F2(fam: SchemeFamily, u, uh, e, eh, H, h: float, tau: float) -> np.ndarray:
    """F2 on every cell of a layer pair (length M-1)."""
    u, uh, e, eh = map(np.asarray, (u, uh, e, eh))
    du = uh - u
    dt = (fam.q1 * du[:-1] + (1.0 - fam.q1) * du[1:]) / tau
    psi = momentum_flux(fam, u, uh, e, eh)
    return dt + (psi[1:] - psi[:-1]) / h


def block_from_window(window: StencilWindow):
    """Unpack the 2x2 block of a window into ``(u, uh, e, eh, H)`` column pairs."""
    v = window.value
    u = np.array([v("u", 0, 0), v("u", 0, 1)])
    uh = np.array([v("u", 1, 0), v("u", 1, 1)])
    e = np.array([v("eta", 0, 0), v("eta", 0, 1)])
    eh = np.array([v("eta", 1, 0), v("eta", 1, 1)])
    H = np.array([v("H", 0, 0), v("H", 0, 1)])
    return u, uh, e, eh, H


def residual_F1(window: StencilWindow, fam: SchemeFamily) -> float:
    u, uh, e, eh, H = block_from_window(window)
    return float(layer_F1(fam, u, uh, e, eh, H, window.h, window.tau)[0])


def residual_F2(window: StencilWindow, fam: SchemeFamily) -> float:
    u, uh, e, eh, H = block_from_window(window)
    return float(layer_F2(fam, u, uh, e, eh, H, window.h, window.tau)[0])


# ---------------------------------------------------------------------------
# State and stepping

@dataclass(frozen=True, eq=False)
class EulerState:
    """One time layer: velocity ``u``, surface ``eta`` and bottom samples ``H``."""

    n: int
    u: np.ndarray
    eta: np.ndarray
    H: np.ndarray
    h: float
    tau: float

    def __post_init__(self) -> None:
        for name in ("u", "eta", "H"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.u.ndim == 1 and self.u.shape == self.eta.shape == self.H.shape):
            raise ValueError("u, eta and H must be 1-D arrays of equal length")
        if self.u.size < 3:
            raise ValueError("need at least 3 nodes")
        if not (self.h > 0 and self.tau > 0):
            raise ValueError("h and tau must be positive")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.eta))):
            raise DepthError("non-finite values in state", layer=self.n)
        rho = self.eta + self.H
        if np.any(rho <= 0):
            m = int(np.argmin(rho))
            raise DepthError(f"nonpositive depth {rho[m]:.3g} at node {m}", layer=self.n)

    @property
    def a(self) -> float:
        return self.tau / (2.0 * self.h)

    @property
    def rho(self) -> np.ndarray:
        return self.eta + self.H

    @property
    def size(self) -> int:
        return self.u.size


@dataclass(frozen=True)
class StepDiagnostics:
    iterations: int
    delta: float
    converged: bool


@dataclass(frozen=True)
class BoundaryData:
    """Prescribed ``eta`` at the left end and ``u`` at the right end of layer n+1."""

    eta_left: float
    u_right: float


def apply_viscosity(eta, u, nu: float, tau: float, h: float,
                    first: int = 3, keep_last_u: bool = True):
    """Linear artificial viscosity on nodes ``m >= first``.

    ``eta_m -= nu tau D_{-h}(eta)_m`` and ``u_m -= nu tau D_{-h}(eta u)_m``,
    both differences taken from the unmodified input.  The last velocity is
    a boundary value and is left alone unless ``keep_last_u`` is false.
    """
    eta = np.array(eta, dtype=float)
    u = np.array(u, dtype=float)
    if nu < 0:
        raise ValueError("viscosity must be nonnegative")
    if nu == 0:
        return eta, u
    c = nu * tau / h
    eu = eta * u
    d_eta = eta[first:] - eta[first - 1:-1]
    d_eu = eu[first:] - eu[first - 1:-1]
    eta[first:] -= c * d_eta
    stop = u.size - 1 if keep_last_u else u.size
    u[first:stop] -= c * d_eu[: stop - first]
    return eta, u


def step_conservative(state: EulerState, fam: SchemeFamily, bc: BoundaryData | None = None,
                      eps: float = 1e-6, max_iter: int = 200, nu: float = 0.0,
                      viscosity_mode: str = "layer", raise_on_failure: bool = True,
                      divergence_window: int = 10):
    """Advance one layer with the Gauss-Seidel fixed-point process.

    The iterate is seeded with layer n.  Each sweep runs over m = 1..M-1,
    updating ``eta_m`` and then ``u_{m-1}``; ``eta_0`` and ``u_{M-1}`` take the
    boundary values.  Iteration stops once the largest change of a sweep is
    below ``eps``.  ``viscosity_mode`` is ``"layer"`` (once, after
    convergence) or ``"iteration"`` (after every sweep).
    """
    if not eps >= 0:
        raise ValueError("eps must be nonnegative")
    if viscosity_mode not in ("layer", "iteration"):
        raise ValueError(f"unknown viscosity mode {viscosity_mode!r}")
    u0 = np.ascontiguousarray(state.u, dtype=float)
    e0 = np.ascontiguousarray(state.eta, dtype=float)
    H = np.ascontiguousarray(state.H, dtype=float)
    u = u0.copy()
    e = e0.copy()
    if bc is not None:
        e[0] = bc.eta_left
        u[-1] = bc.u_right
    w = np.ascontiguousarray(fam.w.ravel())
    r = state.tau / state.h
    layer = state.n + 1

    delta = np.inf
    growth = 0
    it = 0
    converged = False
    while it < max_iter:
        prev = delta
        per_iter = nu > 0 and viscosity_mode == "iteration"
        if per_iter:
            e_old, u_old = e.copy(), u.copy()
        delta = _kernels.gs_sweep(u0, e0, H, u, e, w, fam.z11, fam.z12, fam.z22, fam.q2, r)
        it += 1
        if per_iter:
            e_v, u_v = apply_viscosity(e, u, nu, state.tau, state.h)
            e[:] = e_v
            u[:] = u_v
            delta = max(float(np.max(np.abs(e - e_old))), float(np.max(np.abs(u - u_old))))
        if not np.isfinite(delta):
            raise DepthError("non-finite values during sweep", layer=layer)
        if delta < eps:
            converged = True
            break
        growth = growth + 1 if delta > prev else 0
        if growth >= divergence_window:
            break
    diag = StepDiagnostics(iterations=it, delta=float(delta), converged=converged)
    if not converged and raise_on_failure:
        raise ConvergenceError(
            f"fixed point not reached after {it} iterations (delta={delta:.3e})",
            layer=layer, diagnostics=diag)
    if nu > 0 and viscosity_mode == "layer":
        e, u = apply_viscosity(e, u, nu, state.tau, state.h)
    return EulerState(layer, u, e, H, state.h, state.tau), diag


def step_naive(state: EulerState, bc: BoundaryData | None = None, eps: float = 1e-6,
               max_iter: int = 200, **kwargs):
    """Same process with the non-conservative control scheme."""
    return step_conservative(state, SCM_NAIVE, bc, eps, max_iter, **kwargs)


def smooth_dam_profile(x, eta_left: float, eta_right: float, center: float,
                       width_nodes: int = 8) -> np.ndarray:
    """Step from ``eta_left`` to ``eta_right`` at ``center`` with a cosine ramp.

    The ramp occupies ``width_nodes`` nodes around the node nearest to
    ``center``; ``width_nodes = 0`` gives a sharp step at that node.
    """
    x = np.asarray(x, dtype=float)
    if width_nodes < 0:
        raise ValueError("width_nodes must be nonnegative")
    if not x[0] <= center <= x[-1]:
        raise ValueError(f"center {center} outside [{x[0]}, {x[-1]}]")
    h = x[1] - x[0]
    c = int(round((center - x[0]) / h))
    start = c - width_nodes // 2
    idx = np.arange(x.size)
    out = np.where(idx < start, float(eta_left), float(eta_right))
    j = idx - start + 1
    ramp = (j >= 1) & (j <= width_nodes)
    frac = 0.5 * (1.0 - np.cos(np.pi * j[ramp] / (width_nodes + 1)))
    out[ramp] = eta_left + (eta_right - eta_left) * frac
    return out


def march(state: EulerState, fam: SchemeFamily, steps: int, **kwargs):
    """Yield ``(state, diagnostics)`` for ``steps`` consecutive layers."""
    for _ in range(steps):
        state, diag = step_conservative(state, fam, **kwargs)
        yield state, diag


__all__ = [
    "SchemeFamily", "family_coefficients", "SCM_ARB", "SCM_SYM", "SCM_NAIVE",
    "scheme_by_name", "mass_flux", "momentum_flux", "layer_F1", "layer_F2",
    "residual_F1", "residual_F2", "EulerState", "StepDiagnostics", "BoundaryData",
    "apply_viscosity", "step_conservative", "step_naive", "smooth_dam_profile", "march",
]
