import csv
import json

import numpy as np
import pytest

from swlab.euler_scheme import SCM_ARB, SCM_SYM, EulerState, smooth_dam_profile, step_conservative
from swlab.grid import StencilWindow
from swlab.lagrangian import LagrangianState, flat_scheme, run_lagrangian, sq_lagr_scheme
from swlab.monitors import (
    ConservationReport, euler_layer_residuals, lagr_conservation_suite, lagr_laws,
    lagr_mass_residual, lagr_total_energy, local_energy_residual_euler,
    local_mass_residual_euler, local_momentum_residual_euler, relative_energy_change,
    total_energy, total_variation,
)


def _lake(M=1001, h=0.1, eta=5.0):
    return EulerState(0, np.zeros(M), np.full(M, eta), np.zeros(M), h, 0.01)


def test_total_energy_lake():
    assert total_energy(_lake()) == pytest.approx(1251.25, rel=1e-14)
    st = _lake(M=7, h=0.5, eta=2.0)
    assert total_energy(st) == pytest.approx(0.25 * 7 * 4.0, rel=1e-15)


def test_total_energy_moving():
    st = EulerState(0, np.array([1.0, 2.0, 0.0]), np.array([1.0, 0.0, 2.0]),
                    np.array([1.0, 2.0, 1.0]), 0.2, 0.01)
    # rho = (2, 2, 3)
    assert total_energy(st) == pytest.approx(0.1 * (2 + 8 + 0 + 1 + 0 + 4), rel=1e-15)


def test_relative_energy_change():
    assert np.all(relative_energy_change([3.0, 3.0, 3.0]) == 0)
    np.testing.assert_allclose(relative_energy_change([1.0, 1.1]), [0.0, 0.1], rtol=1e-14)
    with pytest.raises(ValueError):
        relative_energy_change([0.0, 1.0])
    with pytest.raises(ValueError):
        relative_energy_change([])


def test_total_variation():
    assert total_variation([1, 3, 2, 2]) == 3.0
    assert total_variation([5.0]) == 0.0


def test_lake_euler_residuals_vanish():
    st = EulerState(0, np.zeros(6), np.full(6, 2.0), np.zeros(6), 0.1, 0.01)
    nxt, _ = step_conservative(st, SCM_SYM)
    for law, r in euler_layer_residuals(SCM_SYM, st, nxt).items():
        assert np.max(np.abs(r)) <= 1e-13, law
    X = {k: np.vstack([getattr(st, k), getattr(nxt, k)]) for k in ("u", "eta", "H")}
    w = StencilWindow(X, 0, 2, 0.1, 0.01)
    for fn in (local_energy_residual_euler, local_mass_residual_euler, local_momentum_residual_euler):
        assert abs(fn(w, SCM_SYM)) <= 1e-13


def test_dam_layer_residuals_and_negative_control():
    h, tau, eps = 0.1, 0.01, 1e-10
    x = np.arange(201) * h
    st = EulerState(0, np.zeros(x.size), smooth_dam_profile(x, 2.0, 1.0, 10.0, 0.5),
                    np.ones(x.size), h, tau)
    nxt, _ = step_conservative(st, SCM_ARB, eps=eps)
    r = euler_layer_residuals(SCM_ARB, st, nxt)
    assert max(np.max(np.abs(v)) for v in r.values()) <= 1e-7
    rng = np.random.default_rng(5)
    bad = EulerState(1, nxt.u + rng.normal(0, 0.1, x.size), nxt.eta, nxt.H, h, tau)
    r_bad = euler_layer_residuals(SCM_ARB, st, bad)
    assert all(np.max(np.abs(v)) > 1e-3 for v in r_bad.values())


def test_static_column_all_laws_zero():
    x = 1.0 + np.arange(12) * 0.05
    X = np.vstack([x] * 5)
    laws = lagr_laws(X, 0.1, 0.01, flat_scheme())
    assert {"mass", "energy", "momentum", "hydro_mass", "hydro_momentum"} <= set(laws)
    for law, r in laws.items():
        assert r.shape == (3, 10), law
        assert np.max(np.abs(r)) <= 1e-9, law


def test_lagrangian_laws_on_solver_output():
    hs, tau = 0.1, 0.01
    sch = sq_lagr_scheme(0.01, 2.0, 1.0)
    x0 = np.arange(41) * hs + 0.002 * np.sin(np.arange(41))
    traj = run_lagrangian(LagrangianState(x0, x0, hs, tau, sch), 30, eps=1e-13)
    laws = lagr_laws(traj, hs, tau, sch)
    assert set(laws) == {"mass", "energy", "exp_plus", "exp_minus", "hydro_mass",
                         "hydro_momentum", "hydro_exp_plus", "hydro_exp_minus"}
    for law, r in laws.items():
        assert np.max(np.abs(r)) <= 1e-6, law
    E = lagr_total_energy(traj, hs, tau, sch)
    assert np.max(np.abs(E - E[0])) <= 1e-10 * abs(E[0])


def test_lagrangian_mass_law_is_identity():
    rng = np.random.default_rng(2)
    X = np.cumsum(rng.uniform(0.5, 1.5, (6, 9)), axis=1)
    assert np.max(np.abs(lagr_mass_residual(X, 0.1, 0.01))) <= 1e-9


def test_invalid_trajectory():
    with pytest.raises(ValueError):
        lagr_laws(np.zeros((2, 5)), 0.1, 0.01, flat_scheme())
    with pytest.raises(ValueError):
        lagr_laws(np.array([[0.0, 2.0, 1.0]] * 3), 0.1, 0.01, flat_scheme())


def test_report_outputs(tmp_path):
    rep = ConservationReport()
    rep.add("mass", 1, [1e-3, -2e-3])
    rep.add("mass", 2, [0.0, 0.0])
    rep.add_array("energy", 1, np.array([[1.0], [-0.5]]))
    rep.energy = [2.0, 2.0, 2.2]
    assert rep.laws == ["mass", "energy"]
    assert rep.max("mass") == 2e-3
    np.testing.assert_array_equal(rep.max_by_layer("energy"), [1.0, 0.5])
    np.testing.assert_array_equal(rep.layers("energy"), [1, 2])
    s = rep.summary()
    assert s["mass"]["layers"] == 2 and s["mass"]["mean"] == pytest.approx(7.5e-4)
    assert s["energy_drift"]["final_e_R"] == pytest.approx(0.1)

    rep.write_conservation_csv(tmp_path / "c.csv")
    rep.write_node_csv(tmp_path / "n.csv")
    rep.write_energy_csv(tmp_path / "e.csv")
    rep.write_summary_json(tmp_path / "s.json", {"scenario": "x"})
    rows = list(csv.reader(open(tmp_path / "c.csv")))
    assert rows[0] == ["layer", "law", "max", "mean"] and len(rows) == 5
    nodes = list(csv.reader(open(tmp_path / "n.csv")))
    assert len(nodes) == 1 + 4 + 2 and nodes[2] == ["1", "mass", "1", "0.002"]
    e = list(csv.reader(open(tmp_path / "e.csv")))
    assert e[-1][0] == "2" and float(e[-1][2]) == pytest.approx(0.1)
    data = json.load(open(tmp_path / "s.json"))
    assert data["scenario"] == "x" and data["laws"]["energy"]["max"] == 1.0
    assert b"\r" not in (tmp_path / "c.csv").read_bytes()


def test_suite_on_flat_run():
    hs, tau = 0.1, 0.01
    x0 = np.arange(31) * hs + 0.003 * np.cos(np.arange(31))
    traj = run_lagrangian(LagrangianState(x0, x0, hs, tau, flat_scheme()), 20, eps=1e-13)
    rep = lagr_conservation_suite(traj, hs, tau, flat_scheme())
    assert len(rep.energy) == traj.shape[0] - 1
    assert float(np.max(rep.e_R)) <= 1e-12
    assert rep.max("energy") <= 1e-6 and rep.max("momentum") <= 1e-6
