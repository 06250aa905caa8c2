import numpy as np
import pytest

from srflow import continuum as C
from srflow import profiles
from srflow.flow import FlowConfig


def test_fd_weights_exact_on_polynomials():
    x = np.array([0.0, 0.3, 0.7, 1.2])
    w = C.fd_weights(0.3, x, 2)
    f = 2 + 3 * x - x ** 2 + 0.5 * x ** 3
    assert w[0] @ f == pytest.approx(2 + 0.9 - 0.09 + 0.5 * 0.027)
    assert w[1] @ f == pytest.approx(3 - 0.6 + 1.5 * 0.09)
    assert w[2] @ f == pytest.approx(-2 + 3 * 0.3)


def test_five_point_derivative_fourth_order():
    errs = []
    for n in (21, 41, 81):
        x = np.sort(np.linspace(0, 1, n) + 0.1 / n * np.sin(7 * np.arange(n)))
        d = C.d1_five_point(x, np.sin(x))
        errs.append(np.max(np.abs(d - np.cos(x[2:-2]))))
    assert np.log2(errs[1] / errs[2]) > 3.5


def test_sphere_rhs_is_shrinking_sphere():
    g = C.grid_from_profile(profiles.sphere(), 101, (-1.0, 1.0), closure="none")
    hd, rd = C.rf_rhs(g)
    assert np.allclose(rd, -2 * g.rho, atol=1e-3)
    assert np.allclose(hd, -2 * g.h, atol=1e-3)


def test_pole_closure_rate_near_pole():
    n = 200
    h = np.pi / n
    x = -np.pi / 2 + h / 2 + h * np.arange(n)
    g = C.ContinuumGrid(h=np.diff(x), rho=np.cos(x), closure="pole_regular", origin=x[0])
    ra, rs = C.ricci_diagnostic(g)
    # unit round S^3: both Ricci components equal 2
    assert np.max(np.abs(rs - 2)) < 1e-3
    assert np.max(np.abs(ra - 2)) < 1e-3


def test_cylinder_flow():
    g = C.ContinuumGrid(h=np.full(9, 0.1), rho=np.ones(10))
    tr = C.integrate_continuum(g, FlowConfig(t_max=0.3))
    assert np.allclose(tr.rho_min ** 2, 1 - 2 * tr.t, atol=1e-8)


def test_sphere_band_short_time():
    # open ends carry no boundary condition, so the band drifts from the
    # round solution near its ends; the centre follows R^2 = 1 - 4t closely
    g = C.grid_from_profile(profiles.sphere(), 41, (-1.0, 1.0), closure="none")
    tr = C.integrate_continuum(g, FlowConfig(t_max=0.1, snapshot_every=1))
    fin = tr.snapshots[-1]
    err = fin.rho / (g.rho * np.sqrt(1 - 4 * fin.t)) - 1
    assert abs(err[20]) < 5e-4
    assert np.max(np.abs(err)) < 1e-2


def test_grid_validation():
    with pytest.raises(ValueError):
        C.ContinuumGrid(h=np.ones(3), rho=np.ones(5))
    with pytest.raises(ValueError):
        C.ContinuumGrid(h=-np.ones(4), rho=np.ones(5))
    with pytest.raises(ValueError):
        C.ContinuumGrid(h=np.ones(4), rho=np.ones(5), closure="open")
