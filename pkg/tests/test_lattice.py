import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srflow import lattice as L
from srflow import profiles
from srflow.errors import GeometryError
from srflow.io import read_csv


def test_ghost_layout_reflective():
    rho, a = np.arange(1.0, 7.0), np.arange(10.0, 15.0)
    r, g = L.extend_with_ghosts(rho, a, "reflective", depth=2)
    assert list(r[:2]) == [3.0, 2.0] and list(r[-2:]) == [5.0, 4.0]
    assert list(g[:2]) == [11.0, 10.0] and list(g[-2:]) == [14.0, 13.0]


def test_ghost_layout_pole():
    rho, a = np.arange(1.0, 7.0), np.arange(10.0, 15.0)
    r, g = L.extend_with_ghosts(rho, a, "pole_regular", depth=2)
    assert list(r[:2]) == [-2.0, -1.0] and list(r[-2:]) == [-6.0, -5.0]
    assert g[1] == 10.0 and g[-2] == 14.0


def test_ghost_none_is_nan():
    r, g = L.extend_with_ghosts(np.ones(5), np.ones(4), "none")
    assert np.isnan(r[:2]).all() and np.isnan(g[-2:]).all()


def test_flat_prism_has_zero_deficits():
    st_ = L.LatticeState(xi=0.2, rho=np.full(7, 1.3), a=np.linspace(0.5, 0.9, 6), closure="none",
                         cross_section="flat")
    d = st_.dual
    for k in ("eps_s", "eps_sbar", "eps_a", "eps_ahat", "rate_alpha", "rate_sigma"):
        assert np.nanmax(np.abs(np.asarray(getattr(d, k), float))) < 1e-12, k


def test_fraction_identities(generic_state):
    d = generic_state.dual
    fa = 2 * d.f_alpha_s + d.f_alpha_sbar
    fs = d.f_sigma_s + d.f_sigma_s_next + 2 * d.f_sigma_a
    assert np.allclose(fa[1:-1], 1, atol=1e-15)
    assert np.allclose(fs, 1, atol=1e-15)


def test_per_level_accessors(generic_state):
    a = L.deficit_angles(generic_state, 3)
    assert a["eps_s"] == generic_state.dual.eps_s[2]
    assert np.isnan(L.dual_edges(generic_state, generic_state.n)["sigma"])
    with pytest.raises(IndexError):
        L.dual_areas(generic_state, 0)


def test_curvature_is_deficit_over_area(generic_state):
    d = generic_state.dual
    assert np.allclose(d.K_s[1:-1], d.eps_s[1:-1] / d.s_star[1:-1])
    assert np.allclose(d.K_a, d.eps_a / d.a_star)


def test_sphere_static_rates_near_minus_two():
    st_ = L.build(profiles.sphere(), 201, 0.01, (-1.0, 1.0), closure="none")
    d = st_.dual
    assert np.nanmax(np.abs(d.rate_alpha[1:-1] + 2)) < 5e-3
    assert np.nanmax(np.abs(d.rate_sigma[1:-1] + 2)) < 5e-3


def test_cylinder_static_rates():
    st_ = L.build(profiles.cylinder(), 21, 0.01, (0.0, 1.0), closure="reflective")
    d = st_.dual
    assert np.max(np.abs(d.rate_alpha)) < 1e-12
    assert np.allclose(d.rate_sigma, -1, atol=1e-4)


def test_mirror_symmetry():
    x = np.linspace(-1, 1, 9)
    rho = 1 + 0.2 * np.cos(2 * x) + 0.1 * x
    st_ = L.LatticeState(xi=0.1, rho=rho, a=np.linspace(0.2, 0.3, 8), closure="reflective")
    m = st_.mirrored()
    assert np.allclose(m.dual.rate_alpha, st_.dual.rate_alpha[::-1], atol=1e-13)
    assert np.allclose(m.dual.rate_sigma, st_.dual.rate_sigma[::-1], atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 3.0))
def test_rates_scale_inverse_square(c):
    x = np.linspace(-1, 1, 7)
    rho = 1 + 0.1 * np.cos(3 * x)
    base = L.LatticeState(xi=0.1, rho=rho, a=np.full(6, 0.3), closure="reflective")
    big = L.LatticeState(xi=0.1, rho=c * rho, a=np.full(6, 0.3 * c), closure="reflective")
    assert np.allclose(big.dual.rate_alpha * c * c, base.dual.rate_alpha, rtol=1e-10, atol=1e-12)
    assert np.allclose(big.dual.rate_sigma * c * c, base.dual.rate_sigma, rtol=1e-10, atol=1e-12)


def test_dual_edge_lengths_match_full_evaluation(generic_state):
    s = generic_state
    al, sg = L.dual_edge_lengths(s.xi, s.rho, s.a, closure="none")
    assert np.allclose(al[1:-1], s.dual.alpha[1:-1])
    assert np.allclose(sg, s.dual.sigma)


def test_dual_edge_lengths_complex_step_safe(generic_state):
    s = generic_state
    rho = s.rho.astype(complex)
    rho[2] += 1e-30j
    al, _ = L.dual_edge_lengths(s.xi, rho, s.a, closure="none")
    assert np.all(np.isfinite(np.real(al[1:-1])))
    assert np.abs(np.imag(al[2])) > 0


def test_mp_state_matches_float(generic_state):
    m = generic_state.to_mp()
    assert float(m.dual.eps_a[2]) == pytest.approx(generic_state.dual.eps_a[2], rel=1e-12)


def test_invalid_states():
    with pytest.raises(GeometryError):
        L.LatticeState(xi=0.1, rho=np.array([1, 1, -1, 1, 1.0]), a=np.ones(4))
    with pytest.raises(ValueError):
        L.LatticeState(xi=0.1, rho=np.ones(5), a=np.ones(5))
    with pytest.raises(ValueError):
        L.LatticeState(xi=0.1, rho=np.ones(5), a=np.ones(4), closure="periodic")


def test_unrealizable_build_raises():
    # axial spacing much smaller than the radius jump
    p = profiles.sampled(np.linspace(0, 1, 10), np.r_[np.ones(5), 3 * np.ones(5)])
    with pytest.raises(GeometryError):
        L.build(p, 200, 0.3, (0.0, 1.0), closure="none")


def test_pole_to_pole_range():
    lo, hi = L.pole_to_pole_range(np.pi / 2, 10)
    assert hi - lo == pytest.approx(np.pi * 9 / 10)


def test_write_lattice_csv(tmp_path, generic_state):
    p = tmp_path / "lat.csv"
    L.write_lattice_csv(generic_state, p, header="# test")
    head, cols = read_csv(p)
    assert head == "# test"
    assert np.allclose(cols["rho"], generic_state.rho)
