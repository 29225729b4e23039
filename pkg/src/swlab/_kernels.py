"""Sequential inner loops (Gauss-Seidel sweep, Thomas elimination).

Compiled with numba when available; the plain Python versions are used
otherwise and give identical results.
"""

from __future__ import annotations

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def gs_sweep(u0, e0, H, u, e, w, z11, z12, z22, q2, r):
    """One in-place sweep of the fixed-point process for the Eulerian family.

    ``u0, e0`` hold layer n, ``u, e`` the current iterate of layer n+1
    (updated in place).  ``w`` is the flattened 2x2 mass-flux weight
    matrix ``(w11, w12, w21, w22)`` and ``r = tau/h``.  For m = 1..M-1
    the surface height at m is updated first, then the velocity at m-1,
    both using the freshest available values.  Returns the largest change.
    """
    w11, w12, w21, w22 = w[0], w[1], w[2], w[3]
    n = u0.shape[0]
    delta = 0.0
    for m in range(1, n):
        k = m - 1
        phi_l = ((e0[k] + H[k]) * (w11 * u0[k] + w12 * u[k])
                 + (e[k] + H[k]) * (w21 * u0[k] + w22 * u[k]))
        phi_r = ((e0[m] + H[m]) * (w11 * u0[m] + w12 * u[m])
                 + (e[m] + H[m]) * (w21 * u0[m] + w22 * u[m]))
        e_new = e0[m] - r * (phi_r - phi_l)
        d = abs(e_new - e[m])
        if d > delta or d != d:
            delta = d
        e[m] = e_new
        psi_r = (0.5 * (z11 * u0[m] * u0[m] + z12 * u0[m] * u[m] + z22 * u[m] * u[m])
                 + q2 * e0[m] + (1.0 - q2) * e[m])
        psi_l = (0.5 * (z11 * u0[k] * u0[k] + z12 * u0[k] * u[k] + z22 * u[k] * u[k])
                 + q2 * e0[k] + (1.0 - q2) * e[k])
        u_new = u0[k] - r * (psi_r - psi_l)
        d = abs(u_new - u[k])
        if d > delta or d != d:
            delta = d
        u[k] = u_new
    return delta


@njit(cache=True)
def thomas(lower, diag, upper, rhs, out):
    """Solve a tridiagonal system; returns the index of a zero pivot or -1.

    ``lower[0]`` and ``upper[-1]`` are ignored.
    """
    n = diag.shape[0]
    cp = np.empty(n)
    dp = np.empty(n)
    piv = diag[0]
    if piv == 0.0:
        return 0
    cp[0] = upper[0] / piv if n > 1 else 0.0
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - lower[i] * cp[i - 1]
        if piv == 0.0 or piv != piv:
            return i
        cp[i] = upper[i] / piv if i < n - 1 else 0.0
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / piv
    out[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        out[i] = dp[i] - cp[i] * out[i + 1]
    return -1
