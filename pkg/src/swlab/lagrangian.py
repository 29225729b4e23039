"""Three-layer schemes for particle positions ``x(t, s)`` in mass coordinates.

All variants share the residual

    x_{t t-check} + kappa D_{-s}( 1 / (x_hat_s x_check_s) )
        + sigma a H'(x) - nu x_check_{ts} / x_s

on a uniform ``(s, t)`` mesh, where ``x_s`` is the forward difference in s
and ``x_{t t-check} = (x_hat - 2x + x_check)/tau^2``.  The variants differ in
``kappa`` (1 or 1/2), the bottom, and the source factor ``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import _kernels
from .bottoms import BottomProfile, Flat, Linear, ParabolicSigned, ShiftedParabola
from .errors import ConvergenceError, CrossingError, PivotError
from .euler_scheme import StepDiagnostics


# ---------------------------------------------------------------------------
# Scalar factors

def _check_tau_beta(tau: float, beta: float) -> None:
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if not beta > 0:
        raise ValueError("beta must be positive")


def phi_cosh(tau: float, beta: float = 1.0) -> float:
    """``2 (cosh(sqrt(beta) tau) - 1) / (beta tau^2)``; equals 1 at ``tau = 0``.

    Evaluated as ``(sinh(z/2) / (z/2))^2`` to avoid cancellation.
    """
    _check_tau_beta(tau, beta)
    y = 0.5 * math.sqrt(beta) * tau
    if y == 0.0:
        return 1.0
    r = math.sinh(y) / y
    return r * r


def phi_cos(tau: float, beta: float = 1.0) -> float:
    """``2 (cos(sqrt(beta) tau) - 1) / (beta tau^2)``; equals -1 at ``tau = 0``."""
    _check_tau_beta(tau, beta)
    z = math.sqrt(beta) * tau
    if z >= math.pi:
        raise ValueError("sqrt(beta) * tau must be below pi")
    y = 0.5 * z
    if y == 0.0:
        return -1.0
    r = math.sin(y) / y
    return -r * r


def tau1(tau: float) -> float:
    """``2 (e^tau - 1) / (e^tau + 1)``, written as ``2 tanh(tau/2)``."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    return 2.0 * math.tanh(0.5 * tau)


def tau2(tau: float) -> float:
    """``2 sin(tau) / (1 + cos(tau))``, written as ``2 tan(tau/2)``."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if tau >= math.pi:
        raise ValueError("tau2 is defined for tau < pi")
    return 2.0 * math.tan(0.5 * tau)


@dataclass(frozen=True)
class EquivalenceScale:
    """Constants mapping the unit parabola scheme onto ``d1 [(2/L)^2 (x-L/2)^2 - 1]``."""

    d1: float
    L: float
    beta1: float
    eps1: float
    eps2: float
    eps3: float
    eps4: float

    def a1(self, tau: float) -> float:
        return phi_cosh(tau, self.beta1)


def equivalence_scale(d1: float, L: float) -> EquivalenceScale:
    if not (d1 > 0 and L > 0):
        raise ValueError("d1 and L must be positive")
    return EquivalenceScale(
        d1=d1, L=L,
        beta1=8.0 * d1 / L**2,
        eps1=2.0 ** (1.0 / 3.0) * L**2 / (8.0 * d1),
        eps2=16.0 * math.sqrt(2.0) * d1**1.5 / L**3,
        eps3=math.sqrt(8.0 * d1) / L,
        eps4=-(2.0 ** (5.0 / 6.0)) * math.sqrt(d1),
    )


def linear_bottom_transform(x_tilde, t_tilde, s_tilde, C1: float, tau: float):
    """Map a flat-bottom grid solution to the bottom ``H = C1 x + C2``.

    ``x = x_tilde + (C1/2) t t_hat`` with ``t_hat = t + tau``; ``t`` and ``s``
    are unchanged.  Arrays broadcast, so ``t_tilde`` may be a column of layer
    times against an ``(N, M)`` array of positions.
    """
    t = np.asarray(t_tilde, dtype=float)
    x = np.asarray(x_tilde, dtype=float) + 0.5 * C1 * t * (t + tau)
    return x, t_tilde, s_tilde


# ---------------------------------------------------------------------------
# Scheme description

@dataclass(frozen=True)
class LagrangianScheme:
    """One member of the three-layer family.

    ``kind`` is informational (``flat``, ``linear``, ``parabolic+``,
    ``parabolic-`` or ``modified``); the residual depends only on the
    numeric fields.
    """

    kind: str
    kappa: float
    bottom: BottomProfile = field(default_factory=Flat)
    a: float = 1.0
    sigma: float = 1.0
    nu: float = 0.0

    def source(self, x):
        return self.sigma * self.a * self.bottom.H_prime(x)

    @property
    def quadratic(self):
        return self.bottom.quadratic_form()

    @property
    def lam(self) -> float:
        """Coefficient of ``(x - c)`` in the source for quadratic bottoms."""
        q = self.quadratic
        return 0.0 if q is None else self.sigma * self.a * q[0]

    @property
    def extra_law_kind(self) -> str | None:
        """``"exp"`` for repelling quadratic sources, ``"trig"`` for restoring ones."""
        lam = self.lam
        if lam < 0:
            return "exp"
        if lam > 0:
            return "trig"
        return None

    def with_viscosity(self, nu: float) -> "LagrangianScheme":
        if nu < 0:
            raise ValueError("viscosity must be nonnegative")
        return replace(self, nu=float(nu))


def flat_scheme(kappa: float = 1.0) -> LagrangianScheme:
    return LagrangianScheme("flat", kappa, Flat(), 0.0)


def linear_scheme(C1: float, kappa: float = 1.0) -> LagrangianScheme:
    """Residual ``... - C1``."""
    return LagrangianScheme("linear", kappa, Linear(C1), 1.0, sigma=-1.0)


def sq_lagr_scheme(tau: float, beta: float = 1.0, c: float = 0.0) -> LagrangianScheme:
    """Residual ``... - phi_cosh(tau, beta) beta (x - c)`` (exponential laws)."""
    return LagrangianScheme("parabolic+", 1.0, ParabolicSigned(beta, c, 1),
                            phi_cosh(tau, beta), sigma=-1.0)


def sq_lagr2_scheme(tau: float, beta: float = 1.0, c: float = 0.0) -> LagrangianScheme:
    """Residual ``... - phi_cos(tau, beta) beta (x - c)`` (trigonometric laws)."""
    return LagrangianScheme("parabolic-", 1.0, ParabolicSigned(beta, c, -1),
                            phi_cos(tau, beta), sigma=1.0)


def modified_parabolic_scheme(d1: float, L: float, tau: float, nu: float = 0.0) -> LagrangianScheme:
    """Half-coefficient scheme over ``d1 [(2/L)^2 (x - L/2)^2 - 1]`` with ``a1 = phi_cosh(tau, 8 d1/L^2)``."""
    sc = equivalence_scale(d1, L)
    return LagrangianScheme("modified", 0.5, ShiftedParabola(d1, L), sc.a1(tau), 1.0, float(nu))


# ---------------------------------------------------------------------------
# Residuals

def pressure_term(x_prev, x_next, hs: float) -> np.ndarray:
    """``g_m = 1/(x_hat_s x_check_s)`` on cells m = 0..K-1."""
    return hs * hs / (np.diff(x_next) * np.diff(x_prev))


def viscosity_term(x_prev, x, tau: float) -> np.ndarray:
    """``x_check_{ts} / x_s`` on nodes 0..K-1 (forward differences)."""
    d = x - x_prev
    return np.diff(d) / (tau * np.diff(x))


def residual_layers(x_prev, x, x_next, hs: float, tau: float,
                    scheme: LagrangianScheme) -> np.ndarray:
    """Scheme residual on interior nodes m = 1..K-1 of layer n."""
    x_prev, x, x_next = (np.asarray(v, dtype=float) for v in (x_prev, x, x_next))
    dxp, dxn = np.diff(x_prev), np.diff(x_next)
    if np.any(dxp == 0) or np.any(dxn == 0):
        raise CrossingError("coincident particles in residual window")
    g = hs * hs / (dxn * dxp)
    acc = (x_next[1:-1] - 2.0 * x[1:-1] + x_prev[1:-1]) / tau**2
    res = acc + scheme.kappa * (g[1:] - g[:-1]) / hs + scheme.source(x[1:-1])
    if scheme.nu:
        res = res - scheme.nu * viscosity_term(x_prev, x, tau)[1:]
    return res


def residual_three_layer(window, scheme: LagrangianScheme) -> float:
    """Residual at the centre of a window over layers n-1..n+1 and nodes m-1..m+1."""
    v = window.value
    rows = [[v("x", dn, dm) for dm in (-1, 0, 1)] for dn in (-1, 0, 1)]
    return float(residual_layers(rows[0], rows[1], rows[2], window.h, window.tau, scheme)[0])


def thomas_solve(lower, diag, upper, rhs) -> np.ndarray:
    """Tridiagonal solve; ``lower[0]`` and ``upper[-1]`` are ignored."""
    lower, diag, upper, rhs = (np.ascontiguousarray(v, dtype=float)
                               for v in (lower, diag, upper, rhs))
    n = diag.size
    if not (lower.size == upper.size == rhs.size == n) or n == 0:
        raise ValueError("inconsistent tridiagonal array lengths")
    out = np.empty(n)
    bad = _kernels.thomas(lower, diag, upper, rhs, out)
    if bad >= 0:
        raise PivotError(f"zero pivot in row {bad}")
    return out


# ---------------------------------------------------------------------------
# State and stepping

@dataclass(frozen=True, eq=False)
class LagrangianState:
    """Positions on layers n-1 and n; ``n`` is the index of ``x_curr``."""

    x_prev: np.ndarray
    x_curr: np.ndarray
    hs: float
    tau: float
    scheme: LagrangianScheme
    n: int = 1

    def __post_init__(self) -> None:
        for name in ("x_prev", "x_curr"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.x_prev.shape != self.x_curr.shape or self.x_curr.ndim != 1:
            raise ValueError("both layers must be 1-D arrays of equal length")
        if self.x_curr.size < 3:
            raise ValueError("need at least 3 particles")
        if not (self.hs > 0 and self.tau > 0):
            raise ValueError("hs and tau must be positive")
        for lay, arr in ((self.n - 1, self.x_prev), (self.n, self.x_curr)):
            if not np.all(np.isfinite(arr)):
                raise CrossingError("non-finite particle positions", layer=lay)
            d = np.diff(arr)
            if np.any(d <= 0):
                raise CrossingError(f"particles cross at node {int(np.argmin(d))}", layer=lay)

    @property
    def velocity(self) -> np.ndarray:
        """Backward difference ``(x - x_check)/tau`` at layer n."""
        return (self.x_curr - self.x_prev) / self.tau


def step_tridiagonal(state: LagrangianState, eps: float = 1e-12, max_iter: int = 50,
                     raise_on_failure: bool = True):
    """Advance one layer by the linearised tridiagonal iteration.

    End particles stay fixed.  Iterate 0 is layer n; each iteration freezes
    the products ``(x^(j)_m - x^(j)_{m-1})(x^(j)_{m+1} - x^(j)_m)`` of the
    pressure denominators and solves the resulting linear system for the
    new layer.  Stops when the largest position change is below ``eps``.
    """
    sch = state.scheme
    hs, tau = state.hs, state.tau
    xp, x = state.x_prev, state.x_curr
    layer = state.n + 1
    dxp = np.diff(xp)
    al = dxp[:-1]  # x_check_m - x_check_{m-1}, interior m
    bl = dxp[1:]   # x_check_{m+1} - x_check_m
    rhs = 2.0 * x[1:-1] - xp[1:-1] - tau * tau * sch.source(x[1:-1])
    if sch.nu:
        rhs = rhs + tau * tau * sch.nu * viscosity_term(xp, x, tau)[1:]
    xj = x.copy()
    delta = np.inf
    it = 0
    converged = False
    k2 = sch.kappa * hs * tau * tau
    while it < max_iter:
        dj = np.diff(xj)
        c = k2 / (dj[:-1] * al * dj[1:] * bl)
        lower = -c * al
        upper = -c * bl
        diag = 1.0 + c * (al + bl)
        r = rhs.copy()
        r[0] -= lower[0] * x[0]
        r[-1] -= upper[-1] * x[-1]
        try:
            sol = thomas_solve(lower, diag, upper, r)
        except PivotError as exc:
            raise PivotError(str(exc), layer=layer) from None
        delta = float(np.max(np.abs(sol - xj[1:-1])))
        xj[1:-1] = sol
        it += 1
        if not np.isfinite(delta):
            raise CrossingError("non-finite iterate", layer=layer)
        if delta < eps:
            converged = True
            break
    diag_out = StepDiagnostics(iterations=it, delta=delta, converged=converged)
    if not converged and raise_on_failure:
        raise ConvergenceError(
            f"tridiagonal iteration not converged after {it} iterations (delta={delta:.3e})",
            layer=layer, diagnostics=diag_out)
    d = np.diff(xj)
    if np.any(d <= 0):
        raise CrossingError(f"particles cross at node {int(np.argmin(d))}", layer=layer)
    new = LagrangianState(x, xj, hs, tau, sch, state.n + 1)
    return new, diag_out


def apply_lagr_viscosity(residual, x_prev, x, tau: float, nu: float):
    """Subtract ``nu x_check_{ts}/x_s`` from interior residual values."""
    if nu < 0:
        raise ValueError("viscosity must be nonnegative")
    residual = np.asarray(residual, dtype=float)
    if nu == 0:
        return residual.copy()
    return residual - nu * viscosity_term(np.asarray(x_prev, float), np.asarray(x, float), tau)[1:]


def static_equilibrium(x0, hs: float, scheme: LagrangianScheme, tol: float = 1e-13,
                       max_iter: int = 50) -> np.ndarray:
    """Positions with the same end particles at which the static residual vanishes.

    Newton iteration on ``kappa D_{-s}(1/x_s^2) + source(x) = 0`` with a
    tridiagonal Jacobian, started from ``x0``.  Bottoms must be quadratic or
    lower (the Jacobian uses the constant source slope).
    """
    q = scheme.quadratic
    if q is None:
        raise ValueError("static equilibrium needs a polynomial bottom of degree <= 2")
    dsrc = scheme.sigma * scheme.a * q[0]
    x = np.array(x0, dtype=float)
    k = scheme.kappa
    for _ in range(max_iter):
        d = np.diff(x)
        g = hs * hs / (d * d)
        res = k * (g[1:] - g[:-1]) / hs + scheme.source(x[1:-1])
        dg = 2.0 * k * hs / d**3  # d g_m / d x_m, scaled by kappa/hs
        lower = -dg[:-1]
        upper = -dg[1:]
        diag = dg[:-1] + dg[1:] + dsrc
        step = thomas_solve(lower, diag, upper, -res)
        x[1:-1] += step
        if np.any(np.diff(x) <= 0):
            raise CrossingError("equilibrium iteration produced crossing particles")
        if np.max(np.abs(step)) < tol * max(1.0, float(np.max(np.abs(x)))):
            return x
    raise ConvergenceError("static equilibrium iteration did not converge")


def extra_multipliers(scheme: LagrangianScheme, tau: float) -> list[tuple[str, Callable]]:
    """Time multipliers ``f`` giving the two extra laws of a quadratic-bottom scheme.

    The laws hold exactly when ``(f(t+tau) - 2 f(t) + f(t-tau))/tau^2 = -lam f(t)``
    with ``lam = sigma a curvature``.  The frequency is chosen to satisfy that
    relation exactly: exponentials ``e^{+-kt}`` when ``lam < 0`` and
    ``sin kt``, ``cos kt`` when ``lam > 0``.  Empty for other bottoms.
    """
    lam = scheme.lam
    kind = scheme.extra_law_kind
    if kind is None:
        return []
    arg = 1.0 - 0.5 * lam * tau * tau
    if kind == "exp":
        k = math.acosh(arg) / tau
        return [("exp_plus", lambda t: math.exp(k * t)),
                ("exp_minus", lambda t: math.exp(-k * t))]
    if abs(arg) >= 1.0:
        raise ValueError("time step too large for a trigonometric multiplier")
    k = math.acos(arg) / tau
    return [("sin", lambda t: math.sin(k * t)), ("cos", lambda t: math.cos(k * t))]


def run_lagrangian(state: LagrangianState, steps: int, eps: float = 1e-12,
                   max_iter: int = 50) -> np.ndarray:
    """Trajectory array of shape ``(steps + 2, K + 1)`` starting with both initial layers."""
    out = np.empty((steps + 2, state.x_curr.size))
    out[0] = state.x_prev
    out[1] = state.x_curr
    for i in range(steps):
        state, _ = step_tridiagonal(state, eps, max_iter)
        out[i + 2] = state.x_curr
    return out


__all__ = [
    "phi_cosh", "phi_cos", "tau1", "tau2", "EquivalenceScale", "equivalence_scale",
    "linear_bottom_transform", "LagrangianScheme", "flat_scheme", "linear_scheme",
    "sq_lagr_scheme", "sq_lagr2_scheme", "modified_parabolic_scheme", "pressure_term",
    "viscosity_term", "residual_layers", "residual_three_layer", "thomas_solve",
    "LagrangianState", "step_tridiagonal", "apply_lagr_viscosity", "static_equilibrium",
    "extra_multipliers",
    "run_lagrangian",
]
