import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swlab.bottoms import Flat
from swlab.errors import CrossingError, PivotError
from swlab.grid import StencilWindow
from swlab.lagrangian import (
    LagrangianScheme, LagrangianState, apply_lagr_viscosity, equivalence_scale,
    extra_multipliers, flat_scheme, linear_bottom_transform, linear_scheme,
    modified_parabolic_scheme, phi_cos, phi_cosh, residual_layers, residual_three_layer,
    run_lagrangian, sq_lagr2_scheme, sq_lagr_scheme, static_equilibrium, step_tridiagonal,
    tau1, tau2, thomas_solve, viscosity_term,
)


# -- scalar factors ---------------------------------------------------------

def test_phi_cosh_values():
    assert phi_cosh(0.0) == 1.0
    assert phi_cosh(0.1, 1.0) == pytest.approx(2 * (math.cosh(0.1) - 1) / 0.01, rel=1e-12)
    assert phi_cosh(0.1, 1.0) == pytest.approx(1.00083361, abs=1e-8)
    beta, tau = 8 * 10 / 100**2, 0.00125
    assert abs(phi_cosh(tau, beta) - (1 + beta * tau**2 / 12)) <= 1e-15


def test_phi_cos_values():
    assert phi_cos(0.0) == -1.0
    assert phi_cos(0.1, 1.0) == pytest.approx(2 * (math.cos(0.1) - 1) / 0.01, rel=1e-12)
    assert phi_cos(0.1, 1.0) == pytest.approx(-0.99916653, abs=1e-6)
    with pytest.raises(ValueError):
        phi_cos(4.0, 1.0)


def test_series_orders():
    taus = np.logspace(-3, -1, 9)
    e_cos = [abs(phi_cos(t) - (-1 + t * t / 12)) for t in taus]
    e_tan = [abs(tau2(t) - t) for t in taus]
    for err, order in ((e_cos, 3.9), (e_tan, 2.9)):
        slope = np.polyfit(np.log(taus[3:]), np.log(err[3:]), 1)[0]
        assert slope >= order


def test_tau_factors():
    assert tau1(0.0) == 0.0 and tau2(0.0) == 0.0
    assert tau1(1.0) == pytest.approx(2 * (math.e - 1) / (math.e + 1), rel=1e-15)
    assert tau1(1.0) == pytest.approx(0.92423431, abs=1e-8)
    assert tau2(1.0) == pytest.approx(2 * math.sin(1) / (1 + math.cos(1)), rel=1e-15)
    assert tau2(1.0) == pytest.approx(1.09260497, abs=1e-8)
    with pytest.raises(ValueError):
        tau1(-0.1)


def test_equivalence_scale():
    sc = equivalence_scale(10.0, 100.0)
    assert sc.beta1 == pytest.approx(0.008, rel=1e-15)
    assert sc.eps3 == pytest.approx(math.sqrt(80) / 100, rel=1e-15)
    assert sc.eps3 == pytest.approx(0.0894427, abs=1e-7)
    assert sc.a1(0.0) == 1.0
    assert sc.a1(1e-6) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        equivalence_scale(0.0, 100.0)


# -- Thomas ------------------------------------------------------------------

def test_thomas_small_cases():
    np.testing.assert_array_equal(thomas_solve(np.zeros(4), np.ones(4), np.zeros(4), [1, 2, 3, 4]),
                                  [1, 2, 3, 4])
    x = thomas_solve([0, -1, -1], [2, 2, 2], [-1, -1, 0], [1, 0, 1])
    np.testing.assert_allclose(x, [1, 1, 1], rtol=1e-15)


def _dense(lower, diag, upper):
    n = diag.size
    A = np.diag(diag)
    A[np.arange(1, n), np.arange(n - 1)] = lower[1:]
    A[np.arange(n - 1), np.arange(1, n)] = upper[:-1]
    return A


@settings(max_examples=100)
@given(st.integers(1, 50), st.integers(0, 2**31))
def test_thomas_against_dense_solver(n, seed):
    rng = np.random.default_rng(seed)
    lower, upper = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
    diag = np.abs(lower) + np.abs(upper) + rng.uniform(0.5, 2, n)
    rhs = rng.normal(size=n)
    x = thomas_solve(lower, diag, upper, rhs)
    ref = np.linalg.solve(_dense(lower, diag, upper), rhs)
    assert np.max(np.abs(x - ref)) <= 1e-10 * max(1.0, np.max(np.abs(ref)))


def test_thomas_zero_pivot():
    with pytest.raises(PivotError):
        thomas_solve([0, 1], [0, 1], [1, 0], [1, 1])
    with pytest.raises(ValueError):
        thomas_solve([0], [1, 1], [0, 0], [1, 1])


# -- residuals ---------------------------------------------------------------

def test_static_flat_column():
    hs, rho0 = 0.1, 2.0
    x = 1.0 + np.arange(6) * hs / rho0
    X = np.vstack([x, x, x])
    w = StencilWindow({"x": X}, 1, 2, hs, 0.01)
    # spacing rounding only: |res| ~ eps * 1/x_s^2 / hs
    assert abs(residual_three_layer(w, flat_scheme())) <= 1e-12


def test_linear_free_fall():
    hs, tau, C1 = 0.1, 0.01, 2.0
    t = np.arange(3)[:, None] * tau + 0.5
    X = 1.0 + np.arange(5) * hs + 0.5 * C1 * t * t
    res = residual_layers(X[0], X[1], X[2], hs, tau, linear_scheme(C1))
    assert np.max(np.abs(res)) <= 1e-10


def test_residual_rejects_coincident_particles():
    x = np.array([0.0, 1.0, 1.0, 2.0])
    with pytest.raises(CrossingError):
        residual_layers(x, x, x, 0.1, 0.01, flat_scheme())


# -- stepping ------------------------------------------------------------------

def _wavy(K=40, hs=0.1, amp=0.02):
    s = np.arange(K + 1) * hs
    return s + amp * np.sin(2 * np.pi * s / s[-1]) * hs


def test_state_validation():
    x = _wavy()
    with pytest.raises(CrossingError):
        LagrangianState(x, x[::-1].copy(), 0.1, 0.01, flat_scheme())
    with pytest.raises(ValueError):
        LagrangianState(x, x, 0.1, 0.0, flat_scheme())


def test_stationary_column_stays():
    x = 2.0 + np.arange(30) * 0.05
    st0 = LagrangianState(x, x, 0.1, 0.01, flat_scheme())
    st1, diag = step_tridiagonal(st0)
    assert diag.converged
    assert np.max(np.abs(st1.x_curr - x)) <= 1e-12


def test_step_solves_scheme():
    x0 = _wavy()
    sch = flat_scheme()
    st0 = LagrangianState(x0, x0, 0.1, 0.01, sch)
    st1, diag = step_tridiagonal(st0, eps=1e-13)
    assert diag.converged and diag.iterations < 20
    res = residual_layers(x0, x0, st1.x_curr, 0.1, 0.01, sch)
    assert np.max(np.abs(res)) <= 1e-7
    assert st1.x_curr[0] == x0[0] and st1.x_curr[-1] == x0[-1]


def test_equilibrium_is_stationary():
    from swlab.experiments import PRESETS, lagrangian_initial_positions
    from swlab.bottoms import Sinusoidal
    cfg = PRESETS["lagrangian-stationary"]
    sch = cfg.lagrangian_scheme()
    xe = lagrangian_initial_positions(cfg, sch)
    res = residual_layers(xe, xe, xe, cfg.h, cfg.tau, sch)
    assert np.max(np.abs(res)) <= 1e-8
    st1, _ = step_tridiagonal(LagrangianState(xe, xe, cfg.h, cfg.tau, sch))
    assert np.max(np.abs(st1.x_curr - xe)) <= 1e-11
    with pytest.raises(ValueError):
        static_equilibrium(xe, cfg.h, LagrangianScheme("other", 1.0, Sinusoidal(1.0, 100.0)))


# -- extra laws ----------------------------------------------------------------

@pytest.mark.parametrize("scheme,kind", [
    (sq_lagr_scheme(0.01, 0.5, 1.0), "exp"),
    (sq_lagr2_scheme(0.01, 0.5, 1.0), "trig"),
    (modified_parabolic_scheme(10.0, 100.0, 0.01), "trig"),
])
def test_multipliers_solve_discrete_oscillator(scheme, kind):
    tau = 0.01
    assert scheme.extra_law_kind == kind
    fs = extra_multipliers(scheme, tau)
    assert len(fs) == 2
    for _, f in fs:
        for t in (0.0, 0.37, 1.2):
            lhs = (f(t + tau) - 2 * f(t) + f(t - tau)) / tau**2
            assert lhs == pytest.approx(-scheme.lam * f(t), rel=1e-6, abs=1e-9)


def test_no_extra_laws_for_flat():
    assert extra_multipliers(flat_scheme(), 0.01) == []
    assert flat_scheme().extra_law_kind is None


def test_discrete_exponential_consistency():
    for tau in (0.1, 0.03, 0.001):
        for t in (0.0, 0.5, 2.0):
            d = (math.exp(t + tau) - math.exp(t)) / tau
            assert abs(d - math.exp(t)) <= math.exp(t) * tau


# -- transformation and viscosity -----------------------------------------------

def test_linear_bottom_transform_maps_flat_to_linear_solutions():
    hs, tau, C1 = 0.1, 0.01, 2.0
    x0 = 3.0 + _wavy(30)
    flat = run_lagrangian(LagrangianState(x0, x0, hs, tau, flat_scheme()), 20, eps=1e-13)
    t = np.arange(flat.shape[0])[:, None] * tau
    lin, _, _ = linear_bottom_transform(flat, t, None, C1, tau)
    x, _, _ = linear_bottom_transform(flat, t, None, 0.0, tau)
    assert np.array_equal(x, flat)
    for n in range(1, flat.shape[0] - 1):
        r_flat = residual_layers(flat[n - 1], flat[n], flat[n + 1], hs, tau, flat_scheme())
        r_lin = residual_layers(lin[n - 1], lin[n], lin[n + 1], hs, tau, linear_scheme(C1))
        assert np.max(np.abs(r_lin - r_flat)) <= 1e-9


def test_viscosity_term():
    x = _wavy()
    assert np.max(np.abs(viscosity_term(x - 0.3, x, 0.01))) <= 1e-12
    r = np.arange(39.0)
    assert np.array_equal(apply_lagr_viscosity(r, x, x, 0.01, 0.0), r)
    xp = x - 0.01 * np.sin(x)
    expected = r - 0.25 * (np.diff(x - xp) / (0.01 * np.diff(x)))[1:]
    np.testing.assert_allclose(apply_lagr_viscosity(r, xp, x, 0.01, 0.25), expected, rtol=1e-14)
    with pytest.raises(ValueError):
        apply_lagr_viscosity(r, x, x, 0.01, -1.0)
    with pytest.raises(ValueError):
        flat_scheme().with_viscosity(-0.1)


def test_run_shape():
    x0 = _wavy()
    tr = run_lagrangian(LagrangianState(x0, x0, 0.1, 0.01, flat_scheme()), 5)
    assert tr.shape == (7, x0.size)
    assert np.all(np.diff(tr, axis=1) > 0)
