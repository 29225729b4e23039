"""Numeric checks of the multiplier construction for the Eulerian family.

Everything here works on the 2x2 block ``(n, n+1) x (m, m+1)``.  The block
is passed either as a :class:`~swlab.grid.StencilWindow` or as column pairs
``(u, uh, e, eh, H)``, each a length-2 array (or an array of shape
``(2, K)`` to evaluate ``K`` blocks at once).
"""

from __future__ import annotations

from typing import Callable, Mapping

import numpy as np

from .euler_scheme import SCM_SYM, SchemeFamily, block_from_window, family_coefficients
from .grid import StencilWindow


def _cols(block):
    u, uh, e, eh, H = (np.asarray(v, dtype=float) for v in block)
    return u, uh, e, eh, H


def multipliers(fam: SchemeFamily, block):
    """``(M1, M2)`` from the coefficient arrays of ``fam``."""
    u, uh, e, eh, H = _cols(block)
    U = (u, uh)
    E = (e, eh)
    M1 = 0.0
    for k in range(2):
        for l in range(2):
            if fam.B[k, l]:
                M1 = M1 + fam.B[k, l] * E[k][l]
    M2 = 0.0
    for k, l, p, q in np.ndindex(2, 2, 2, 2):
        if fam.a[k, l, p, q]:
            M1 = M1 + 0.5 * fam.a[k, l, p, q] * U[k][l] * U[p][q]
        if fam.b[k, l, p, q]:
            M2 = M2 + fam.b[k, l, p, q] * (E[k][l] + H[0]) * U[p][q]
    return M1, M2


def eval_M1(window: StencilWindow, w11: float, z12: float) -> float:
    return float(multipliers(family_coefficients(w11, z12), block_from_window(window))[0])


def eval_M2(window: StencilWindow, w11: float, z12: float) -> float:
    return float(multipliers(family_coefficients(w11, z12), block_from_window(window))[1])


def block_F(fam: SchemeFamily, block, h: float, tau: float):
    """``(F1, F2)`` on the block(s)."""
    u, uh, e, eh, H = _cols(block)
    phi = (e + H) * (fam.w[0, 0] * u + fam.w[0, 1] * uh) + (eh + H) * (fam.w[1, 0] * u + fam.w[1, 1] * uh)
    psi = 0.5 * (fam.z11 * u * u + fam.z12 * u * uh + fam.z22 * uh * uh) + fam.q2 * e + (1 - fam.q2) * eh
    de, du = eh - e, uh - u
    F1 = (fam.p1 * de[0] + (1 - fam.p1) * de[1]) / tau + (phi[1] - phi[0]) / h
    F2 = (fam.q1 * du[0] + (1 - fam.q1) * du[1]) / tau + (psi[1] - psi[0]) / h
    return F1, F2


# ---------------------------------------------------------------------------
# Energy law in divergence form

def energy_density(w11: float, u, e, H, h: float, tau: float):
    """Density (before the overall factor 1/2) on one layer of a block.

    ``u, e, H`` are column pairs (m, m+1) of a single time layer.
    """
    return (e[1] ** 2 + (e[0] + H[0]) * u[0] ** 2
            + w11 * tau * (H[1] * u[1] ** 3 - H[0] * u[0] ** 3) / h)


def energy_flux(w11: float, z12: float, u, uh, e, eh, H, h: float, tau: float):
    """Column flux (before the overall factor 1/2) for one column of a block."""
    et = (eh - e) / tau
    ut = (uh - u) / tau
    surf = eh * eh + (2 * u * u - uh * uh) * eh - (u * u + e) * e
    th1 = tau * u * uh * ut * H - surf * (u + uh) + 2 * h * tau * (u + uh) * et * ut
    th2 = 0.5 * uh * ((u * u - uh * uh) * H + surf) - h * tau * uh * et * ut
    quad = (u + uh) ** 2 * w11 * w11 - (u + uh) * uh * w11 * z12 + 0.25 * uh * uh * z12 * z12
    return ((eh + H) * (u + uh) / 2 * (u * u + e + eh) + h * et * u * u
            - 2 * tau * tau * quad * et * ut + th1 * w11 + th2 * z12)


def energy_law_terms(w11: float, z12: float, block, h: float, tau: float):
    """``(time part, space part)`` of the energy law; their sum is the law value."""
    u, uh, e, eh, H = _cols(block)
    d0 = energy_density(w11, u, e, H, h, tau)
    d1 = energy_density(w11, uh, eh, H, h, tau)
    f0 = energy_flux(w11, z12, u[0], uh[0], e[0], eh[0], H[0], h, tau)
    f1 = energy_flux(w11, z12, u[1], uh[1], e[1], eh[1], H[1], h, tau)
    return 0.5 * (d1 - d0) / tau, 0.5 * (f1 - f0) / h, (d0, d1, f0, f1)


def energy_law(fam: SchemeFamily, block, h: float, tau: float):
    """``D_{+t}(density) + D_{+h}(flux)`` of the family's energy law."""
    t, s, _ = energy_law_terms(fam.w11, fam.z12, block, h, tau)
    return t + s


def energy_identity_residual(window_or_block, w11: float, z12: float, *,
                             fam: SchemeFamily | None = None, h: float | None = None,
                             tau: float | None = None):
    """``M1 F1 + M2 F2 - [D_{+t}(density) + D_{+h}(flux)]`` and its scale.

    The scale is the sum of absolute values of the individual terms on both
    sides, so ``|residual| / scale`` is a relative error.  ``fam`` overrides
    the coefficient set (used to inject corrupted coefficients).
    """
    if isinstance(window_or_block, StencilWindow):
        block = block_from_window(window_or_block)
        h, tau = window_or_block.h, window_or_block.tau
    else:
        block = window_or_block
    fam = fam if fam is not None else family_coefficients(w11, z12)
    M1, M2 = multipliers(fam, block)
    F1, F2 = block_F(fam, block, h, tau)
    t, s, (d0, d1, f0, f1) = energy_law_terms(w11, z12, block, h, tau)
    res = M1 * F1 + M2 * F2 - (t + s)
    u, uh, e, eh, H = _cols(block)
    sF1 = (np.abs(eh[1]) + np.abs(e[1])) / tau + (np.abs(e) + np.abs(eh) + 2 * np.abs(H)).sum(0) * (np.abs(u) + np.abs(uh)).sum(0) / h
    sF2 = (np.abs(uh[0]) + np.abs(u[0])) / tau + ((np.abs(u) + np.abs(uh)).sum(0) ** 2 + np.abs(e).sum(0) + np.abs(eh).sum(0)) / h
    scale = (np.abs(M1) * sF1 + np.abs(M2) * sF2
             + 0.5 * (np.abs(d0) + np.abs(d1)) / tau + 0.5 * (np.abs(f0) + np.abs(f1)) / h)
    return res, scale


def naive_defect(block, h: float, tau: float):
    """``-(tau/8)(uh eh + u e + (uh + u) H) eta_{tx}`` on the left column."""
    u, uh, e, eh, H = _cols(block)
    etx = ((eh[1] - e[1]) - (eh[0] - e[0])) / (tau * h)
    return -(tau / 8.0) * (uh[0] * eh[0] + u[0] * e[0] + (uh[0] + u[0]) * H[0]) * etx


def naive_identity_residual(block, h: float, tau: float, naive: SchemeFamily):
    """``M1 F1 + M2 F2_naive - law_sym - naive_defect``; zero identically."""
    M1, M2 = multipliers(SCM_SYM, block)
    F1, F2 = block_F(naive, block, h, tau)
    return M1 * F1 + M2 * F2 - energy_law(SCM_SYM, block, h, tau) - naive_defect(block, h, tau)


def random_block(rng: np.random.Generator, size=None, low: float = 0.5, high: float = 2.0):
    """Random column pairs with values in ``[low, high]``."""
    shape = (2,) if size is None else (2, size)
    return tuple(rng.uniform(low, high, shape) for _ in range(5))


# ---------------------------------------------------------------------------
# Discrete variational Euler operator

def variational_euler_apply(expr: Callable[[StencilWindow], float],
                            fields: Mapping[str, np.ndarray], node: tuple[int, int],
                            wrt: str, h: float, tau: float, t0: float = 0.0,
                            reach: int = 2) -> float:
    """Sum over shifted windows of the partial derivative of ``expr`` in one grid value.

    The derivative with respect to ``fields[wrt][n, m]`` is taken by
    central differences with step ``1e-6 max(1, |v|)``.  Windows centred at
    ``(n + k, m + l)`` for ``|k|, |l| <= reach`` are summed; every such
    window must be evaluable.
    """
    n, m = node
    base = {k: np.array(v, dtype=float) for k, v in fields.items()}
    if wrt not in base:
        raise KeyError(f"no field {wrt!r}")
    v = base[wrt][n, m]
    d = 1e-6 * max(1.0, abs(v))
    plus = {k: a.copy() for k, a in base.items()}
    minus = {k: a.copy() for k, a in base.items()}
    plus[wrt][n, m] = v + d
    minus[wrt][n, m] = v - d
    denom = plus[wrt][n, m] - minus[wrt][n, m]
    total = 0.0
    for k in range(-reach, reach + 1):
        for l in range(-reach, reach + 1):
            try:
                wp = StencilWindow(plus, n + k, m + l, h, tau, t0)
                wm = StencilWindow(minus, n + k, m + l, h, tau, t0)
                fp = expr(wp)
                fm = expr(wm)
            except IndexError as exc:
                raise ValueError(f"node {node} too close to the boundary: {exc}") from None
            if not (np.isfinite(fp) and np.isfinite(fm)):
                raise ValueError(f"non-finite expression value near node {node}")
            total += (fp - fm) / denom
    return total


def random_divergence_expr(rng: np.random.Generator, families=("u", "eta"),
                           n_terms: int = 4, degree: int = 3) -> Callable[[StencilWindow], float]:
    """Random ``D_{+t}(A) + D_{+h}(B)`` with polynomial ``A``, ``B`` in nearby grid values.

    Each monomial uses values at layer and node offsets in ``{-1, 0}``.
    """
    def poly():
        terms = []
        for _ in range(n_terms):
            c = rng.uniform(-1, 1)
            k = int(rng.integers(1, degree + 1))
            factors = [(str(rng.choice(families)), int(rng.integers(-1, 1)), int(rng.integers(-1, 1)))
                       for _ in range(k)]
            terms.append((c, factors))
        return terms

    A, B = poly(), poly()

    def ev(terms, w: StencilWindow, dn: int, dm: int) -> float:
        out = 0.0
        for c, factors in terms:
            p = c
            for fam, a, b in factors:
                p *= w.value(fam, a + dn, b + dm)
            out += p
        return out

    def expr(w: StencilWindow) -> float:
        return ((ev(A, w, 1, 0) - ev(A, w, 0, 0)) / w.tau
                + (ev(B, w, 0, 1) - ev(B, w, 0, 0)) / w.h)

    return expr


def lagrangian_phi_expr(phi: float, sign: float = 1.0) -> Callable[[StencilWindow], float]:
    """``e^{sign t} F_phi`` with ``F_phi = x_{t t-check} + D_{-s}(1/(x_hat_s x_check_s)) - phi x``."""
    def expr(w: StencilWindow) -> float:
        x = lambda dn, dm: w.value("x", dn, dm)
        acc = (x(1, 0) - 2 * x(0, 0) + x(-1, 0)) / w.tau**2
        g0 = w.h**2 / ((x(1, 1) - x(1, 0)) * (x(-1, 1) - x(-1, 0)))
        gm = w.h**2 / ((x(1, 0) - x(1, -1)) * (x(-1, 0) - x(-1, -1)))
        return np.exp(sign * w.t) * (acc + (g0 - gm) / w.h - phi * x(0, 0))
    return expr


def determine_phi(tau: float, rng: np.random.Generator | None = None, hs: float = 0.5,
                  size: tuple[int, int] = (9, 9), sign: float = 1.0) -> float:
    """Solve ``E_x(e^{+-t} F_phi) = 0`` for ``phi`` at a random grid node.

    The operator output is affine in ``phi``, so two evaluations fix it.
    """
    rng = rng or np.random.default_rng(0)
    N, M = size
    x = np.arange(M) * hs + rng.uniform(-0.05, 0.05, (N, M)) * hs
    fields = {"x": x}
    node = (N // 2, M // 2)
    v0 = variational_euler_apply(lagrangian_phi_expr(0.0, sign), fields, node, "x", hs, tau)
    v1 = variational_euler_apply(lagrangian_phi_expr(1.0, sign), fields, node, "x", hs, tau)
    return -v0 / (v1 - v0)


# ---------------------------------------------------------------------------

def telescope_check(density: np.ndarray, flux: np.ndarray, tau: float, h: float,
                    periodic: bool = True) -> float:
    """Largest defect of ``sum_m [D_{+t} density + D_{+h} flux] = D_{+t} sum_m density``.

    ``density`` has shape ``(N + 1, M)`` and ``flux`` shape ``(N, M)``.  In
    periodic mode the flux sum telescopes to zero; otherwise the boundary
    flux ``(flux[-1] - flux[0])/h`` is accounted for and the sum runs over
    cells ``0..M-2``.
    """
    density = np.asarray(density, dtype=float)
    flux = np.asarray(flux, dtype=float)
    if density.shape[0] != flux.shape[0] + 1 or density.shape[1] != flux.shape[1]:
        raise ValueError("density must have one more layer than flux and equal width")
    dt = np.diff(density, axis=0) / tau
    if periodic:
        local = dt + (np.roll(flux, -1, axis=1) - flux) / h
        glob = np.diff(density.sum(axis=1)) / tau
        return float(np.max(np.abs(local.sum(axis=1) - glob), initial=0.0))
    local = dt[:, :-1] + np.diff(flux, axis=1) / h
    glob = np.diff(density[:, :-1].sum(axis=1)) / tau + (flux[:, -1] - flux[:, 0]) / h
    return float(np.max(np.abs(local.sum(axis=1) - glob), initial=0.0))


__all__ = [
    "multipliers", "eval_M1", "eval_M2", "block_F", "energy_density", "energy_flux",
    "energy_law_terms", "energy_law", "energy_identity_residual", "naive_defect",
    "naive_identity_residual", "random_block", "variational_euler_apply",
    "random_divergence_expr", "lagrangian_phi_expr", "determine_phi", "telescope_check",
]
