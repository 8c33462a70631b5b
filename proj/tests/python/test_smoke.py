import cmath
import math

import numpy as np
import pytest

import loopgamma as lg


def test_paths_start_at_zero_and_pin():
    free = lg.sample_path(64, seed=3)
    bridge = lg.sample_path(64, seed=3, kind="bridge", X=0.7)
    assert free.shape == (65,)
    assert free[0] == 0.0 and bridge[0] == 0.0
    assert bridge[-1] == pytest.approx(0.7, abs=1e-14)
    assert np.array_equal(free, lg.sample_path(64, seed=3))


def test_bridge_mass_is_heat_kernel():
    assert lg.bridge_mass(0.0, 1.0) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    assert lg.heat_kernel(0.3, 2 * math.pi, 1.0) == pytest.approx(lg.bridge_mass(0.3, 1.0), rel=1e-15)


def test_cameron_martin_exact():
    u = lg.grid_nodes(128)
    x = lg.sample_path(128, seed=9)
    assert abs(lg.translation_residual(x, 0.3 * np.sin(u) + 0.1 * u)) < 1e-12


def test_moment_oracle_against_monte_carlo():
    u = lg.grid_nodes(64)
    eta = 0.1 * np.cos(u) + 0.05j
    exact = lg.gaussian_moment(list(eta), kind="bridge", X=0.2)
    est = lg.expect_exp_inner(list(eta), n=20000, seed=4, kind="bridge", X=0.2)
    assert abs(est.mean - exact) <= 3 * est.stderr + 1e-12


def test_translation_check_passes():
    u = lg.grid_nodes(64)
    r = lg.check_translation_point_char(64, 16, 0.7, list(0.3 * np.sin(u)), n=20000, seed=2)
    assert r.passed
    assert r.as_dict()["check"] == r.check


def test_cocycle_sin_cos():
    u = lg.grid_nodes(512)
    assert lg.cocycle(list(np.sin(u)), list(np.cos(u)), 1.0) == pytest.approx(-math.pi, rel=1e-4)


def test_loop_gamma_trivial_and_domain():
    z = [0.0] * 65
    est = lg.hat_gamma(z, [0.0] * 65, n=100)
    assert est.mean == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    assert est.stderr == 0.0
    with pytest.raises(lg.DomainError):
        lg.hat_gamma(z, [-1.0] * 65)
    with pytest.raises(ValueError):
        lg.hat_gamma(z, [0.0] * 65, tilt="sometimes")


def test_special_functions():
    assert lg.gamma_classical(5) == pytest.approx(24, rel=1e-12)
    assert abs(lg.gamma_classical(1j)) == pytest.approx(math.sqrt(math.pi / math.sinh(math.pi)), rel=1e-12)
    assert lg.check_recurrence(1.0, 2.0, 1.5) < 1e-8
    assert lg.gamma_reg(1.0, 1.0, 0.7).imag == 0.0
    assert lg.laplace_kernel_value(1.0) == pytest.approx(lg.gamma_classical(1j) / (2 * math.pi), rel=1e-8)
    with pytest.raises(lg.DomainError):
        lg.laplace_kernel_value(0.0)
    with pytest.raises(lg.UsageError):
        lg.gamma_reg(0.0, 1.0, 1.0)
    r = lg.check_large_t_limit(1.0, 1.0, [1e2, 1e3, 1e4])
    assert r["monotone"] and r["rows"][-1][2] < 1e-2


def test_dual_route_and_fourier_wiener():
    r = lg.check_prop22(1.0, 1.0, -1.0, lambda s: cmath.exp(-s * s), [-1.0, 0.0, 1.0])
    assert r["passed"] and r["max_relative"] < 1e-4
    u = lg.grid_nodes(64)
    fw = lg.fourier_wiener_check(list(0.2 * np.sin(u) + 0.1j), list(-0.1 * np.cos(u) + 0.05), 1.0)
    assert fw["passed"]
