import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from swlab.grid import (
    GridField, SpaceTimeMesh, StencilWindow, diff_backward_x, diff_forward_t, diff_forward_x,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_mesh_nodes_are_multiplied_not_accumulated():
    mesh = SpaceTimeMesh(0.0, 0.1, 1001, 0.0, 0.01, 500)
    assert mesh.x[1000] == 1000 * 0.1
    assert mesh.node(537) == 537 * 0.1
    assert mesh.t.size == 501
    assert mesh.time(250) == 250 * 0.01


@pytest.mark.parametrize("kw", [dict(h=0.0), dict(tau=-1.0), dict(M=2), dict(N=0)])
def test_mesh_rejects_bad_parameters(kw):
    base = dict(x0=0.0, h=0.1, M=10, t0=0.0, tau=0.01, N=5)
    base.update(kw)
    with pytest.raises(ValueError):
        SpaceTimeMesh(**base)


def test_grid_field_rejects_nonfinite_valid_entries():
    with pytest.raises(ValueError):
        GridField(np.array([1.0, np.nan]))


def test_forward_t_constant_and_linear():
    f = np.full(7, 3.0)
    assert np.all(diff_forward_t(f, f, 0.01).values == 0)
    tau = 0.01
    t = np.array([0.3, 0.3 + tau])
    out = diff_forward_t(np.full(5, t[0]), np.full(5, t[1]), tau).values
    np.testing.assert_allclose(out, 1.0, rtol=1e-12)


@given(arrays(float, 12, elements=finite), arrays(float, 12, elements=finite))
def test_forward_t_matches_pointwise_oracle(a, b):
    tau = 0.037
    out = diff_forward_t(a, b, tau).values
    expected = np.array([(b[i] - a[i]) / tau for i in range(a.size)])
    assert np.array_equal(out, expected)


def test_space_differences_on_constant_and_linear():
    h = 0.25
    x = np.arange(9) * h
    fwd = diff_forward_x(x, h)
    bwd = diff_backward_x(x, h)
    np.testing.assert_allclose(fwd.values[:-1], 1.0, rtol=1e-14)
    np.testing.assert_allclose(bwd.values[1:], 1.0, rtol=1e-14)
    assert not fwd.valid[-1] and not bwd.valid[0]
    assert np.all(diff_forward_x(np.full(9, 2.0), h).values[:-1] == 0)


@settings(max_examples=50)
@given(arrays(float, 15, elements=finite))
def test_second_difference_identity(f):
    h = 0.3
    dm = diff_backward_x(f, h).values[1:]
    dpm = diff_forward_x(dm, h).values[:-1]
    direct = (f[2:] - 2 * f[1:-1] + f[:-2]) / h**2
    np.testing.assert_allclose(dpm, direct, rtol=1e-9, atol=1e-9 * np.max(np.abs(f), initial=1) / h**2)


def test_periodic_differences_wrap():
    f = np.array([0.0, 1.0, 4.0])
    np.testing.assert_array_equal(diff_forward_x(f, 1.0, periodic=True).values, [1.0, 3.0, -4.0])
    np.testing.assert_array_equal(diff_backward_x(f, 1.0, periodic=True).values, [-4.0, 1.0, 3.0])


def test_window_accessors_follow_hat_check_convention():
    u = np.arange(20.0).reshape(4, 5)
    H = np.arange(5.0) * 10
    w = StencilWindow({"u": u, "H": H}, 1, 2, 0.1, 0.01)
    assert w.center("u") == u[1, 2]
    assert w.hat("u") == u[2, 2] and w.check("u") == u[0, 2]
    assert w.plus("u") == u[1, 3] and w.minus("u") == u[1, 1]
    assert w.hat("u", 1) == u[2, 3]
    assert w.value("H", 0, 1) == 30.0
    assert w.t == pytest.approx(0.01)


def test_window_out_of_range_raises_unless_periodic():
    u = np.zeros((3, 4))
    w = StencilWindow({"u": u, "H": np.zeros(4)}, 0, 3, 0.1, 0.01)
    with pytest.raises(IndexError):
        w.plus("u")
    with pytest.raises(IndexError):
        w.check("u")
    with pytest.raises(IndexError):
        w.value("H", 1, 0)
    wp = StencilWindow({"u": np.arange(12.0).reshape(3, 4)}, 0, 3, 0.1, 0.01, periodic=True)
    assert wp.plus("u") == 0.0
