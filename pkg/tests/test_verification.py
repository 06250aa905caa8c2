import mpmath
import numpy as np
import pytest

from srflow import profiles
from srflow import verification as V


def test_synthetic_order_detected():
    fit = V.measure_series_order(lambda x: x + 3 * x ** 4, lambda x: x, expected=4)
    assert fit.status == "ok"
    assert fit.headline == pytest.approx(4, abs=0.05)
    assert fit.passed


def test_wrong_order_fails():
    fit = V.measure_series_order(lambda x: x + x ** 2, lambda x: x, expected=4)
    assert fit.passed is False


def test_identical_forms_are_indistinguishable():
    f = lambda x: mpmath.sin(x) if isinstance(x, mpmath.mpf) else np.sin(x)
    fit = V.measure_series_order(f, f, precision="auto")
    assert fit.status == "indistinguishable"
    assert fit.passed is None


def test_order_needs_three_points():
    with pytest.raises(ValueError):
        V.measure_series_order(lambda x: x, lambda x: x, xi_list=(0.1, 0.05))


def test_classify_series_uses_repairs():
    res = [{"name": "p", "repairs": None, "passed": False},
           {"name": "p.corrected", "repairs": "p", "passed": True},
           {"name": "q", "repairs": None, "passed": False},
           {"name": "r", "repairs": None, "passed": True}]
    hard, findings = V.classify_series(res)
    assert hard == ["q"]
    assert findings == ["p"]


def test_registry_groups_and_repairs():
    reg = V.series_registry()
    names = {c.name for c in reg}
    assert {c.group for c in reg} == set(V.GROUPS)
    for c in reg:
        if c.repairs:
            assert c.repairs in names


def test_convergence_study_needs_three_resolutions():
    with pytest.raises(ValueError, match="3 resolutions"):
        V.convergence_study(profiles.angenent_knopf(), xi_list=(0.1, 0.05), N_list=(51, 101, 201))
    with pytest.raises(ValueError, match="3 resolutions"):
        V.convergence_study(profiles.angenent_knopf(), N_list=(51, 101))


def test_reduction_chains_first_order():
    ch = V.reduction_chains()
    for k in ("alpha_equal_spacing", "alpha_near_equal_rho", "sigma_equal_spacing",
              "sigma_near_equal_rho"):
        assert ch[k]["order"] == pytest.approx(1.0, abs=0.1)


def test_flat_subcase_zero_deficits():
    assert V.flat_subcase(1) < 1e-12


def test_crosscheck_on_random_state():
    st = V.random_states(1, seed=3)[0]
    res = V.crosscheck_deficits(st)
    for fam in ("eps_s", "eps_a", "eps_ahat", "sigma", "a_star"):
        assert res[fam]["agrees"], fam


def test_geometry_oracles_small():
    g = V.geometry_oracles(count=50, seed=2)
    assert g["dihedral_max_abs"] < 1e-12
    assert g["pythagorean_max_rel"] < 1e-13
    assert g["fraction_sum_max_abs"] < 1e-12
