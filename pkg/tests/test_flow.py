import numpy as np
import pytest

from srflow import flow as F
from srflow import profiles
from srflow.errors import ConfigError
from srflow.lattice import LatticeState, build


def _ak_state(n=41, closure="reflective"):
    return build(profiles.angenent_knopf(A=0.1), n, 0.05, (-1.2, 1.2), closure=closure)


@pytest.mark.parametrize("kw", [{"mode": "quantum"}, {"integrator": "rk4"}, {"dt": 0},
                                {"stencil": "upwind"}, {"t_max": -1}])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        F.FlowConfig(**kw)


def test_governing_radius():
    assert F.governing_radius(np.full(5, 2.0)) == (2.0, 0, True)
    v, k, w = F.governing_radius(np.array([3, 2, 1, 2, 3.0]))
    assert (v, k, w) == (1.0, 2, True)
    v, k, w = F.governing_radius(np.array([1, 2, 3, 2, 1.0]))
    assert (v, k, w) == (3.0, 2, False)


def test_estimate_T_linear():
    t = np.linspace(0, 0.4, 50)
    assert F.estimate_T(t, np.sqrt(1 - 2 * t)) == pytest.approx(0.5)
    assert np.isnan(F.estimate_T(t, np.ones_like(t)))


def test_continuum_limit_on_cylinder():
    st = LatticeState(xi=0.05, rho=np.full(9, 2.0), a=np.full(8, 0.1), closure="reflective")
    adot, rdot = F.reduced_rhs(st, "continuum_limit")
    assert np.allclose(adot, 0) and np.allclose(rdot, -0.5)


def _smooth_waist(n):
    # zero slope at both ends, so the reflective mirror adds no kink
    x = np.linspace(-1.2, 1.2, n)
    rho = 0.8 - 0.3 * np.cos(np.pi * x / 1.2)
    return LatticeState(xi=0.05, rho=rho, a=np.diff(x), closure="reflective")


@pytest.mark.parametrize("n", [101, 201])
def test_zeroth_order_matches_continuum_limit(n):
    st = _smooth_waist(n)
    a1, r1 = F.reduced_rhs(st, "zeroth_order")
    a2, r2 = F.reduced_rhs(st, "continuum_limit")
    h = 2.4 / (n - 1)
    assert np.max(np.abs(r1 - r2)) < 20 * h ** 2
    assert np.max(np.abs(a1 - a2)) < 20 * h ** 2


def test_zeroth_order_requires_reflective():
    with pytest.raises(ConfigError):
        F.reduced_rhs(_ak_state(closure="none"), "zeroth_order")


def test_stencils_agree_on_uniform_grid_second_difference():
    st = _ak_state()
    _, d2c = F._difference_quotients(st, "centered")
    _, d2p = F._difference_quotients(st, "forward")
    assert np.allclose(d2c, d2p)


def test_jacobian_complex_step_against_fd():
    st = _ak_state(21)
    Ja = F.velocity_jacobian(st, "analytic")
    Jf = F.velocity_jacobian(st, "fd")
    row = np.max(np.abs(Ja), axis=1)
    assert np.max(np.max(np.abs(Ja - Jf), axis=1) / row) < 1e-6


def test_jacobian_is_banded():
    J = F.velocity_jacobian(_ak_state(21))
    i, j = np.nonzero(J)
    assert np.max(np.abs(i - j)) <= 2


def test_full_mode_system_solves():
    adot, rdot, info = F.assemble_velocity_system(_ak_state(21))
    assert np.isfinite(info["cond"]) and info["residual"] < 1e-10
    assert adot.size == 20 and rdot.size == 21


def test_full_mode_ill_conditioning_guard():
    with pytest.raises(F.FlowStopped):
        F.assemble_velocity_system(_ak_state(21), cond_max=1.0)


def test_cylinder_flow_exact():
    st = LatticeState(xi=0.05, rho=np.ones(20), a=np.full(19, 0.05), closure="reflective")
    tr = F.integrate(st, F.FlowConfig(t_max=0.4))
    assert np.allclose(tr.rho_min ** 2, 1 - 2 * tr.t, atol=1e-6)
    assert tr.reason == "max_time"


def test_euler_integrator_cylinder():
    st = LatticeState(xi=0.05, rho=np.ones(10), a=np.full(9, 0.05), closure="reflective")
    tr = F.integrate(st, F.FlowConfig(integrator="euler", dt=1e-4, t_max=0.1))
    assert tr.rho_min[-1] ** 2 == pytest.approx(0.8, abs=1e-4)


def test_min_rho_stop_and_summary():
    st = LatticeState(xi=0.05, rho=np.ones(10), a=np.full(9, 0.05), closure="reflective")
    tr = F.integrate(st, F.FlowConfig(min_rho_fraction=0.5))
    s = tr.summary()
    assert s["reason"] == "min_rho"
    assert s["T_est"] == pytest.approx(0.5, rel=1e-4)
    # stopped at half the radius: less than a decade of T - t
    assert s["waist_bound"]["passed"] is None


def test_waist_bound_cylinder_ratio_two():
    st = LatticeState(xi=0.05, rho=np.ones(10), a=np.full(9, 0.05), closure="reflective")
    tr = F.integrate(st, F.FlowConfig(min_rho_fraction=0.01))
    mon = F.monitor_waist_bound(tr)
    assert mon["passed"]
    assert mon["ratio_min"] == pytest.approx(2, abs=1e-3)


def test_no_waist_not_applicable():
    st = build(profiles.sphere(), 21, 0.05, (-1.0, 1.0), closure="none")
    tr = F.integrate(st, F.FlowConfig(t_max=0.01))
    assert F.monitor_waist_bound(tr)["applicable"] is False


def test_snapshots_and_csv(tmp_path):
    st = LatticeState(xi=0.05, rho=np.ones(10), a=np.full(9, 0.05), closure="reflective")
    tr = F.integrate(st, F.FlowConfig(integrator="euler", dt=1e-3, t_max=0.01, snapshot_every=5))
    assert len(tr.snapshots) >= 2
    tr.write_csv(tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[1].split(",") == list(F.TRAJECTORY_COLUMNS)


def test_full_mode_integrates_briefly():
    tr = F.integrate(_ak_state(21), F.FlowConfig(mode="full", t_max=1e-3))
    assert tr.t[-1] > 0
