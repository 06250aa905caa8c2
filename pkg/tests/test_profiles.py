import numpy as np
import pytest

from srflow import profiles


def test_ak_continuity_at_breakpoint():
    p = profiles.angenent_knopf(A=0.1)
    b = np.pi / 4
    left, right = p(np.array([b - 1e-12])), p(np.array([b + 1e-12]))
    assert left[0] == pytest.approx(right[0], abs=1e-10)
    assert p.B == pytest.approx(16 * 0.4 / np.pi ** 2)


def test_ak_is_even_with_waist():
    p = profiles.angenent_knopf(A=0.1)
    x = np.linspace(-1.2, 1.2, 11)
    assert np.allclose(p(x), p(-x))
    assert p(np.array([0.0]))[0] == pytest.approx(np.sqrt(0.1))


def test_sphere_rates_are_minus_two():
    p = profiles.sphere()
    ra, rs = p.continuum_rates(np.linspace(-1.2, 1.2, 7))
    assert np.allclose(ra, -2) and np.allclose(rs, -2)


def test_cylinder_rates():
    p = profiles.cylinder(R0=2.0)
    ra, rs = p.continuum_rates(np.array([0.0, 3.0]))
    assert np.allclose(ra, 0) and np.allclose(rs, -0.25)


def test_sampled_reproduces_smooth_profile():
    x = np.linspace(-1.3, 1.3, 80)
    p = profiles.sampled(x, np.cos(x))
    xs = np.linspace(-1, 1, 9)
    r, r1, r2 = p.derivatives(xs)
    assert np.allclose(r, np.cos(xs), atol=1e-6)
    assert np.allclose(r2, -np.cos(xs), atol=1e-3)


def test_config_roundtrip():
    for p in (profiles.sphere(2.0), profiles.angenent_knopf(A=0.2), profiles.cylinder()):
        q = profiles.RadialProfile.from_config(p.to_config())
        assert q.to_config() == p.to_config()


def test_domain_enforced():
    with pytest.raises(ValueError):
        profiles.sphere()(np.array([2.0]))


@pytest.mark.parametrize("factory,kw", [(profiles.sphere, {"R0": -1}),
                                        (profiles.angenent_knopf, {"A": 0.6}),
                                        (profiles.cylinder, {"R0": 0})])
def test_bad_parameters(factory, kw):
    with pytest.raises(ValueError):
        factory(**kw)


def test_unknown_kind():
    with pytest.raises(ValueError):
        profiles.RadialProfile.from_config({"kind": "torus"})
