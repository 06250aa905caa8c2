import numpy as np
import pytest

from srflow import expansions as ex
from srflow import verification as V


def test_closed_forms_match_geometry(generic_state):
    cf = V.closed_form_values(generic_state)
    d = generic_state.dual
    for k in ("eps_s", "eps_a", "eps_ahat", "sigma", "a_star"):
        n = np.asarray(cf[k]).size
        sel = slice(1, -1) if n == generic_state.n else slice(None)
        assert np.allclose(np.real(cf[k][sel]), np.asarray(getattr(d, k))[sel], atol=1e-12), k


def test_alpha_closed_form_needs_equal_spacing(generic_state):
    # the closed form's lower half carries a_i; it matches where a_{i-1} = a_i
    cf = V.closed_form_values(generic_state)
    d = generic_state.dual
    assert np.real(cf["alpha"][3]) == pytest.approx(d.alpha[3])
    assert abs(np.real(cf["alpha"][1]) - d.alpha[1]) > 1e-3


def test_fraction_series_sum():
    for xi in (0.01, 0.1):
        assert 2 * ex.f_alpha_s_series(xi) + ex.f_alpha_sbar_series_corrected(xi) == pytest.approx(1)
    s = ex.f_sigma_s_series_corrected(1.0, 1.2, 0.5, 0.1)
    s1 = ex.f_sigma_s_next_series_corrected(1.0, 1.2, 0.5, 0.1)
    fa = ex.f_sigma_a_series(1.0, 1.2, 0.5, 0.1)
    assert s + s1 + 2 * fa == pytest.approx(1, abs=1e-12)


def test_continuum_limits_on_sphere_samples():
    h = 1e-3
    x = np.array([-h, 0.3 - 0 * h, h])
    rm, r, rp = np.cos(0.3 - h), np.cos(0.3), np.cos(0.3 + h)
    assert ex.alpha_continuum_limit(rm, r, rp, h) == pytest.approx(-2, abs=1e-5)
    assert ex.sigma_continuum_limit(rm, r, rp, h) == pytest.approx(-2, abs=2e-3)


def test_zeroth_alpha_cylinder():
    assert ex.zeroth_alpha_rhs(1.0, 1.0, 1.0, 0.3, 0.3) == pytest.approx(0)


def test_zeroth_sigma_corrected_cylinder():
    r = 1.5
    assert ex.zeroth_sigma_rhs_corrected(r, r, r, r, 0.2, 0.2, 0.2) == pytest.approx(-1 / r ** 2)
    # the printed form gives half the cylinder curvature
    assert ex.zeroth_sigma_rhs(r, r, r, r, 0.2, 0.2, 0.2) == pytest.approx(-0.5 / r ** 2)


def test_order_zero_returns_lead():
    args = (1.0, 1.1, 1.25, 0.9, 1.0)
    assert ex.eps_s_series(*args, 0.1, order=0) == pytest.approx(
        (1.0 * 0.1 + 0.9 * (-0.15)) / (np.sqrt(3) * 0.9) * 0.1)


def test_mp_inputs_keep_precision():
    import mpmath
    with mpmath.workdps(40):
        v = ex.f_alpha_s_series(mpmath.mpf("0.01"))
        assert isinstance(v, mpmath.mpf)
        exact = (1 - mpmath.mpf("0.0001") / 12 + mpmath.mpf("0.00000001") / 16) / 3
        assert abs(v - exact) < mpmath.mpf(10) ** -38
