import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srflow import frustum as F
from srflow.errors import GeometryError

NAMES = ("s", "sp", "sbar", "s_top", "sp_top", "sbar_top", "axial_O", "axial_X", "axial_Y")


def _block(a=1.0, s=0.8, sp=0.9, sb=0.7, k=0.85):
    return F.FrustumBlock.from_triangle(a, s, sp, sb, k)


def test_triangle_area_heron():
    assert F.triangle_area(3.0, 4.0, 5.0) == pytest.approx(6.0)


def test_tetra_dihedral_regular():
    # regular tetrahedron: arccos(1/3)
    assert F.tetra_dihedral(1, 1, 1, 1, 1, 1) == pytest.approx(np.arccos(1 / 3), abs=1e-15)


def test_vertices_reproduce_edges():
    b = _block()
    v = F.block_vertices(b)
    d = lambda p, q: np.linalg.norm(v[p] - v[q])
    assert d("O", "X") == pytest.approx(0.8)
    assert d("O", "Y") == pytest.approx(0.9)
    assert d("X", "Y") == pytest.approx(0.7)
    for p in "OXY":
        assert d(p, p + "1") == pytest.approx(1.0, abs=1e-14)
    assert d("O1", "X1") == pytest.approx(0.8 * 0.85)


def test_dihedrals_against_coordinates():
    b = _block()
    v = F.block_vertices(b)
    dih = F.block_dihedrals(b)
    # base edge OX: angle between base plane (normal +z, interior above) and face O X X1
    n_face = np.cross(v["X"] - v["O"], v["X1"] - v["O"])
    inside = v["Y"] - v["O"]
    n_face *= -np.sign(np.dot(n_face, inside))
    n_base = np.array([0, 0, -1.0])
    ang = np.pi - np.arccos(np.dot(n_face, n_base) / np.linalg.norm(n_face))
    assert dih.s == pytest.approx(ang, abs=1e-13)


def test_top_dihedrals_supplementary():
    d = F.block_dihedrals(_block())
    assert d.s + d.s_top == pytest.approx(np.pi)
    assert d.sbar + d.sbar_top == pytest.approx(np.pi)


def test_prism_dihedrals_right_angles():
    d = F.block_dihedrals(_block(k=1.0))
    for name in ("s", "sp", "sbar"):
        assert getattr(d, name) == pytest.approx(np.pi / 2)
    interior = d.axial_O + d.axial_X + d.axial_Y
    assert interior == pytest.approx(np.pi)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.4, 1.4), st.floats(0.4, 1.4), st.floats(0.4, 1.4),
       st.floats(0.5, 1.5))
def test_closed_form_matches_decomposition(a, s, sp, sb, k):
    if not (s + sp > 1.05 * sb and s + sb > 1.05 * sp and sp + sb > 1.05 * s):
        return
    try:
        b = F.FrustumBlock.from_triangle(a, s, sp, sb, k)
    except GeometryError:
        return
    d1, d2 = F.block_dihedrals(b), F.decomposition_dihedrals(b)
    for n in NAMES:
        assert abs(getattr(d1, n) - getattr(d2, n)) < 1e-11


def test_flipped_block_swaps_roles():
    b = _block()
    d, f = F.block_dihedrals(b), F.block_dihedrals(b.flipped())
    assert f.s == pytest.approx(d.s_top)
    assert f.axial_X == pytest.approx(d.axial_X)


def test_pythagorean_dual_segments():
    g = F.block_geometry(_block())
    m, s = g.arms, g.segments
    lhs = s.sigma_half ** 2
    assert lhs == pytest.approx(s.alpha_base ** 2 + m.s_alpha ** 2 - m.s_sigma ** 2, rel=1e-13)
    assert lhs == pytest.approx(s.alpha_top ** 2 + m.s_alpha_top ** 2 - m.s_top_sigma ** 2, rel=1e-13)


def test_kite_sum_is_block_volume_share():
    # summing edge * kite / 3 ... gives the block volume for a circumcentric split
    b = _block()
    g = F.block_geometry(b)
    kt, met = g.kites, g.metrics
    vol_prism_like = (met.h3 / 3) * (met.area_base + met.area_top + np.sqrt(met.area_base * met.area_top))
    total = (b.s_base * kt.s + b.sp_base * kt.sp + b.sbar_base * kt.sbar
             + b.s_top * kt.s_top + b.sp_top * kt.sp_top + b.sbar_top * kt.sbar_top
             + b.a * (kt.axial_O + kt.axial_X + kt.axial_Y)) / 3
    assert total == pytest.approx(vol_prism_like, rel=1e-12)


def test_mp_path_matches_float():
    mpmath.mp.dps = 40
    vals = [mpmath.mpf(x) for x in ("1.0", "0.8", "0.9", "0.7", "0.85")]
    bm = F.FrustumBlock.from_triangle(*[np.array([v], dtype=object) for v in vals])
    bf = _block()
    dm, df = F.block_dihedrals(bm), F.block_dihedrals(bf)
    assert float(dm.axial_O[0]) == pytest.approx(df.axial_O, abs=1e-15)
    mpmath.mp.dps = 15


@pytest.mark.parametrize("args", [
    (0.0, 0.8, 0.9, 0.7, 0.9),      # zero axial edge
    (1.0, 0.1, 0.1, 0.5, 0.9),      # triangle inequality
    (0.05, 0.8, 0.9, 0.7, 0.1),     # slant height not real
])
def test_invalid_blocks_raise(args):
    with pytest.raises(GeometryError):
        F.FrustumBlock.from_triangle(*args)


def test_non_similar_top_rejected():
    with pytest.raises(GeometryError):
        F.FrustumBlock(1.0, 0.8, 0.9, 0.7, 0.7, 0.8, 0.7)
