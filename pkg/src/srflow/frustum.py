"""Circumcentric geometry of a triangle-based frustum block.

A block has a base triangle O X Y with edges ``s = OX``, ``sp = OY`` and
``sbar = XY``, a similar top triangle O' X' Y' parallel to it and scaled by a
common ratio ``k``, and three equal axial edges ``a``.  Every quantity below is
a closed-form function of these nine lengths.

All functions broadcast over numpy arrays, so a whole layer of a lattice can be
evaluated at once.  Object arrays of ``mpmath.mpf`` are accepted as well and
evaluated in extended precision.

Vertex names used for the axial edges:

* ``O`` -- between ``s`` and ``sp`` (opposite ``sbar``)
* ``X`` -- between ``s`` and ``sbar`` (opposite ``sp``)
* ``Y`` -- between ``sp`` and ``sbar`` (opposite ``s``)
"""

from dataclasses import dataclass, fields

import numpy as np

from . import _num
from .errors import GeometryError

__all__ = [
    "FrustumBlock",
    "BlockMetrics",
    "BlockDihedrals",
    "MomentArms",
    "DualSegments",
    "KiteAreas",
    "BlockDerived",
    "triangle_area",
    "tetra_dihedral",
    "block_metrics",
    "block_dihedrals",
    "moment_arms",
    "dual_segments",
    "kite_areas",
    "block_geometry",
    "block_vertices",
    "decomposition_dihedrals",
]

SIMILARITY_RTOL = 1e-12


def _raise_where(bad, msg):
    bad = np.asarray(bad, dtype=bool)
    if np.any(bad):
        idx = np.argwhere(bad)
        where = "" if bad.ndim == 0 else f" at index {tuple(int(v) for v in idx[0])}"
        raise GeometryError(f"{msg}{where}")


def triangle_area(e1, e2, e3):
    """Area of a Euclidean triangle from its edge lengths.

    Uses Kahan's ordering of Heron's formula, which stays accurate for
    needle-like triangles.  A degenerate (collinear) triangle has area zero;
    lengths that violate the triangle inequality raise :class:`GeometryError`.
    """
    e1, e2, e3 = np.broadcast_arrays(_num.asarray(e1), _num.asarray(e2), _num.asarray(e3))
    if np.iscomplexobj(e1) or np.iscomplexobj(e2) or np.iscomplexobj(e3):
        # complex-step path: plain Heron, validated on the real parts
        triangle_area(e1.real, e2.real, e3.real)
        p, q, r = e1 * e1, e2 * e2, e3 * e3
        return _num.sqrt(2 * (p * q + q * r + r * p) - (p * p + q * q + r * r)) / 4
    _raise_where((e1 <= 0) | (e2 <= 0) | (e3 <= 0), "triangle edges must be positive")
    srt = np.sort(np.stack([e1, e2, e3]), axis=0)
    c, b, a = srt[0], srt[1], srt[2]
    q = c - (a - b)
    _raise_where(q < 0, "triangle inequality violated")
    prod = (a + (b + c)) * q * (c + (a - b)) * (a + (b - c))
    return _num.sqrt(prod) / 4


def tetra_dihedral(l_ab, l_ax, l_ay, l_bx, l_by, l_xy):
    """Dihedral angle along edge ab of the tetrahedron abxy.

    The cosine follows the determinant formula in the six edge lengths; the
    sine comes from the volume, ``sin = 3 V l_ab / (2 A_abx A_aby)``, and the
    angle is taken with ``atan2`` so it is accurate near 0 and pi.  A flat
    (zero volume) configuration returns 0 or pi.
    """
    l_ab, l_ax, l_ay, l_bx, l_by, l_xy = np.broadcast_arrays(
        *(_num.asarray(v) for v in (l_ab, l_ax, l_ay, l_bx, l_by, l_xy)))
    A1 = triangle_area(l_ab, l_ax, l_bx)
    A2 = triangle_area(l_ab, l_ay, l_by)
    _raise_where((A1 == 0) | (A2 == 0), "degenerate face adjacent to the dihedral edge")

    ab2, ax2, ay2, bx2, by2, xy2 = (v * v for v in (l_ab, l_ax, l_ay, l_bx, l_by, l_xy))
    m11 = ax2 + ay2 - xy2
    m12 = ay2 + bx2 - ab2 - xy2
    m21 = by2 + ax2 - ab2 - xy2
    m22 = bx2 + by2 - xy2
    det_m = m11 * m22 - m12 * m21

    # Gram matrix of b, x, y relative to a: 36 V^2 = det G.
    gbb = ab2
    gxx = ax2
    gyy = ay2
    gbx = (ab2 + ax2 - bx2) / 2
    gby = (ab2 + ay2 - by2) / 2
    gxy = (ax2 + ay2 - xy2) / 2
    det_g = (gbb * (gxx * gyy - gxy * gxy) - gbx * (gbx * gyy - gxy * gby)
             + gby * (gbx * gxy - gxx * gby))
    scale = (gbb * gxx * gyy)
    _raise_where(det_g < -1e-12 * scale, "edge lengths do not embed as a tetrahedron")
    det_g = np.where(det_g < 0, 0 * det_g, det_g)
    vol = _num.sqrt(det_g) / 6
    return _num.atan2(24 * vol * l_ab, det_m)


@dataclass(frozen=True, eq=False)
class FrustumBlock:
    """The nine edge lengths of one frustum block (arrays broadcast)."""

    a: np.ndarray
    s_base: np.ndarray
    sp_base: np.ndarray
    sbar_base: np.ndarray
    s_top: np.ndarray
    sp_top: np.ndarray
    sbar_top: np.ndarray

    def __post_init__(self):
        arrs = np.broadcast_arrays(*(_num.asarray(getattr(self, f.name)) for f in fields(self)))
        for f, v in zip(fields(self), arrs):
            object.__setattr__(self, f.name, v)
        self._validate()

    @classmethod
    def from_triangle(cls, a, s, sp, sbar, ratio):
        """Block whose top triangle is the base scaled by ``ratio``."""
        return cls(a, s, sp, sbar, ratio * s, ratio * sp, ratio * sbar)

    @property
    def ratio(self):
        return self.s_top / self.s_base

    def _validate(self):
        re = _num.real
        a = re(self.a)
        s, sp, sb = re(self.s_base), re(self.sp_base), re(self.sbar_base)
        s1, sp1, sb1 = re(self.s_top), re(self.sp_top), re(self.sbar_top)
        _raise_where(a <= 0, "axial edge must be positive")
        area = triangle_area(s, sp, sb)
        triangle_area(s1, sp1, sb1)
        _raise_where(area == 0, "base triangle is degenerate")
        k = s1 / s
        for base, top in ((sp, sp1), (sb, sb1)):
            dev = top / base - k
            _raise_where(abs(dev) > SIMILARITY_RTOL * abs(k), "top triangle is not similar to the base")
        for base, top in ((s, s1), (sp, sp1), (sb, sb1)):
            _raise_where(4 * a * a <= (base - top) ** 2, "trapezoid slant height is not real")
        q = 16 * a * a * area * area - (sb * sp * (s - s1)) ** 2
        _raise_where(q <= 0, "block height is not real")

    def flipped(self):
        """The same block with the roles of base and top exchanged."""
        return FrustumBlock(self.a, self.s_top, self.sp_top, self.sbar_top,
                            self.s_base, self.sp_base, self.sbar_base)


@dataclass(frozen=True)
class BlockMetrics:
    d: np.ndarray
    dp: np.ndarray
    dbar: np.ndarray
    h2: np.ndarray
    h2p: np.ndarray
    h2bar: np.ndarray
    h3: np.ndarray
    r3: np.ndarray
    area_base: np.ndarray
    area_top: np.ndarray


@dataclass(frozen=True)
class BlockDihedrals:
    s: np.ndarray
    sp: np.ndarray
    sbar: np.ndarray
    s_top: np.ndarray
    sp_top: np.ndarray
    sbar_top: np.ndarray
    axial_O: np.ndarray
    axial_X: np.ndarray
    axial_Y: np.ndarray


@dataclass(frozen=True)
class MomentArms:
    """Signed circumcenter-to-edge distances on the five faces."""

    s_alpha: np.ndarray
    sp_alpha: np.ndarray
    sbar_alpha: np.ndarray
    s_alpha_top: np.ndarray
    sp_alpha_top: np.ndarray
    sbar_alpha_top: np.ndarray
    # trapezoid faces: (base edge, top edge, each axial leg)
    s_sigma: np.ndarray
    s_top_sigma: np.ndarray
    a_sigma: np.ndarray
    sp_sigma: np.ndarray
    sp_top_sigma: np.ndarray
    a_sigmap: np.ndarray
    sbar_sigma: np.ndarray
    sbar_top_sigma: np.ndarray
    a_sigmabar: np.ndarray


@dataclass(frozen=True)
class DualSegments:
    sigma_half: np.ndarray
    sigmap_half: np.ndarray
    sigmabar_half: np.ndarray
    alpha_base: np.ndarray
    alpha_top: np.ndarray


@dataclass(frozen=True)
class KiteAreas:
    s: np.ndarray
    sp: np.ndarray
    sbar: np.ndarray
    s_top: np.ndarray
    sp_top: np.ndarray
    sbar_top: np.ndarray
    axial_O: np.ndarray
    axial_X: np.ndarray
    axial_Y: np.ndarray


@dataclass(frozen=True)
class BlockDerived:
    metrics: BlockMetrics
    dihedrals: BlockDihedrals
    arms: MomentArms
    segments: DualSegments
    kites: KiteAreas


def _height_radicand(b, area):
    # 16 a^2 Delta^2 - sbar^2 s'^2 (s - s_top)^2
    return 16 * b.a ** 2 * area ** 2 - (b.sbar_base * b.sp_base * (b.s_base - b.s_top)) ** 2


def block_metrics(block):
    b = block
    a2 = b.a * b.a
    area = triangle_area(b.s_base, b.sp_base, b.sbar_base)
    area_top = triangle_area(b.s_top, b.sp_top, b.sbar_top)
    q = _height_radicand(b, area)
    prod2 = (b.sbar_base * b.sp_base) ** 2
    return BlockMetrics(
        d=_num.sqrt(a2 + b.s_base * b.s_top),
        dp=_num.sqrt(a2 + b.sp_base * b.sp_top),
        dbar=_num.sqrt(a2 + b.sbar_base * b.sbar_top),
        h2=_num.sqrt(4 * a2 - (b.s_base - b.s_top) ** 2) / 2,
        h2p=_num.sqrt(4 * a2 - (b.sp_base - b.sp_top) ** 2) / 2,
        h2bar=_num.sqrt(4 * a2 - (b.sbar_base - b.sbar_top) ** 2) / 2,
        h3=_num.sqrt(q) / (4 * area),
        r3=b.a * _num.sqrt((4 * area ** 2 * a2 + b.s_base * b.s_top * prod2) / q),
        area_base=area,
        area_top=area_top,
    )


def block_dihedrals(block):
    """The nine interior dihedral angles.

    Base edges: the trapezoid through edge ``e`` leans by
    ``atan2(h3, (1 - k) m_e)``, with ``m_e`` the base moment arm.  Top edges
    are the supplements.  Axial edges use the cosine numerator of the
    three-tetrahedron decomposition with the sine from the tetrahedron volume.
    """
    b = block
    a = b.a
    s, sp, sb = b.s_base, b.sp_base, b.sbar_base
    area = triangle_area(s, sp, sb)
    sq = _num.sqrt(_height_radicand(b, area))
    pi = _num.pi_like(a)

    th_s = _num.atan2(2 * sq, (s - b.s_top) * (sb ** 2 + sp ** 2 - s ** 2))
    th_sp = _num.atan2(2 * sq, (sp - b.sp_top) * (s ** 2 + sb ** 2 - sp ** 2))
    th_sb = _num.atan2(2 * sq, (sb - b.sbar_top) * (s ** 2 + sp ** 2 - sb ** 2))

    a2 = a * a
    cos_o = 2 * a2 * sb ** 2 * (s ** 2 + sp ** 2 - sb ** 2) - s ** 2 * sp ** 2 * (sb - b.sbar_top) ** 2
    cos_x = 2 * a2 * sp ** 2 * (s ** 2 + sb ** 2 - sp ** 2) - s ** 2 * sb ** 2 * (sp - b.sp_top) ** 2
    cos_y = 2 * a2 * s ** 2 * (sp ** 2 + sb ** 2 - s ** 2) - sp ** 2 * sb ** 2 * (s - b.s_top) ** 2
    return BlockDihedrals(
        s=th_s, sp=th_sp, sbar=th_sb,
        s_top=pi - th_s, sp_top=pi - th_sp, sbar_top=pi - th_sb,
        axial_O=_num.atan2(2 * a * sb ** 2 * sq, cos_o),
        axial_X=_num.atan2(2 * a * sp ** 2 * sq, cos_x),
        axial_Y=_num.atan2(2 * a * s ** 2 * sq, cos_y),
    )


def _trapezoid_arms(a, e, e_top):
    root = 2 * _num.sqrt(4 * a * a - (e - e_top) ** 2)
    return ((2 * a * a + e * (e_top - e)) / root,
            (2 * a * a + e_top * (e - e_top)) / root,
            a * (e + e_top) / root)


def moment_arms(block):
    b = block
    s, sp, sb = b.s_base, b.sp_base, b.sbar_base
    st, spt, sbt = b.s_top, b.sp_top, b.sbar_top
    area = triangle_area(s, sp, sb)
    area_t = triangle_area(st, spt, sbt)
    ms, mst, mas = _trapezoid_arms(b.a, s, st)
    mp, mpt, map_ = _trapezoid_arms(b.a, sp, spt)
    mb, mbt, mab = _trapezoid_arms(b.a, sb, sbt)
    return MomentArms(
        s_alpha=s * (sb ** 2 + sp ** 2 - s ** 2) / (8 * area),
        sp_alpha=sp * (s ** 2 + sb ** 2 - sp ** 2) / (8 * area),
        sbar_alpha=sb * (s ** 2 + sp ** 2 - sb ** 2) / (8 * area),
        s_alpha_top=st * (sbt ** 2 + spt ** 2 - st ** 2) / (8 * area_t),
        sp_alpha_top=spt * (st ** 2 + sbt ** 2 - spt ** 2) / (8 * area_t),
        sbar_alpha_top=sbt * (st ** 2 + spt ** 2 - sbt ** 2) / (8 * area_t),
        s_sigma=ms, s_top_sigma=mst, a_sigma=mas,
        sp_sigma=mp, sp_top_sigma=mpt, a_sigmap=map_,
        sbar_sigma=mb, sbar_top_sigma=mbt, a_sigmabar=mab,
    )


def dual_segments(block):
    """Block-circumcenter distances to the five faces (signed).

    The three trapezoid segments share one closed form under relabeling of the
    base edges; it satisfies ``sigma^2 = alpha_base^2 + m_alpha^2 - m_sigma^2``
    for each trapezoid.
    """
    b = block
    a2 = b.a * b.a
    s, sp, sb = b.s_base, b.sp_base, b.sbar_base
    area = triangle_area(s, sp, sb)
    q = _height_radicand(b, area)
    _raise_where(_num.real(q) <= 0, "block circumcenter is not realizable")
    sq = _num.sqrt(q)

    def half(e, e_top, o1, o2):
        return a2 * (e + e_top) * (o1 ** 2 + o2 ** 2 - e ** 2) / (
            2 * _num.sqrt(4 * a2 - (e - e_top) ** 2) * sq)

    w = (sb * sp) ** 2
    return DualSegments(
        sigma_half=half(s, b.s_top, sb, sp),
        sigmap_half=half(sp, b.sp_top, s, sb),
        sigmabar_half=half(sb, b.sbar_top, s, sp),
        alpha_base=(8 * a2 * area ** 2 + w * s * (b.s_top - s)) / (4 * area * sq),
        alpha_top=(8 * a2 * area ** 2 - w * b.s_top * (b.s_top - s)) / (4 * area * sq),
    )


def kite_areas(block, arms=None, segments=None):
    """Signed share of each edge's dual area lying inside the block."""
    m = moment_arms(block) if arms is None else arms
    g = dual_segments(block) if segments is None else segments
    sig, sigp, sigb = g.sigma_half, g.sigmap_half, g.sigmabar_half
    return KiteAreas(
        s=(m.s_sigma * sig + m.s_alpha * g.alpha_base) / 2,
        sp=(m.sp_sigma * sigp + m.sp_alpha * g.alpha_base) / 2,
        sbar=(m.sbar_sigma * sigb + m.sbar_alpha * g.alpha_base) / 2,
        s_top=(m.s_top_sigma * sig + m.s_alpha_top * g.alpha_top) / 2,
        sp_top=(m.sp_top_sigma * sigp + m.sp_alpha_top * g.alpha_top) / 2,
        sbar_top=(m.sbar_top_sigma * sigb + m.sbar_alpha_top * g.alpha_top) / 2,
        axial_O=(m.a_sigma * sig + m.a_sigmap * sigp) / 2,
        axial_X=(m.a_sigma * sig + m.a_sigmabar * sigb) / 2,
        axial_Y=(m.a_sigmap * sigp + m.a_sigmabar * sigb) / 2,
    )


def block_geometry(block):
    arms = moment_arms(block)
    segs = dual_segments(block)
    return BlockDerived(
        metrics=block_metrics(block),
        dihedrals=block_dihedrals(block),
        arms=arms,
        segments=segs,
        kites=kite_areas(block, arms, segs),
    )


def block_vertices(block):
    """Explicit coordinates of the six vertices (float only).

    The base lies in z = 0 with its circumcenter at the origin; the top is the
    base scaled about the axis by ``k`` and lifted by the block height.  This
    is the embedding the closed forms describe, exposed for independent checks.
    """
    b = block
    s, sp, sb = (np.asarray(v, dtype=float) for v in (b.s_base, b.sp_base, b.sbar_base))
    # O at the origin, X on the x-axis, Y from the two distances.
    yx = (s ** 2 + sp ** 2 - sb ** 2) / (2 * s)
    yy = np.sqrt(sp ** 2 - yx ** 2)
    # circumcenter from the perpendicular bisectors of OX and OY
    cx = s / 2
    cy = (yx ** 2 + yy ** 2 - 2 * yx * cx) / (2 * yy)
    zero = np.zeros_like(s)
    base = {
        "O": np.stack([zero - cx, zero - cy, zero], axis=-1),
        "X": np.stack([s - cx, zero - cy, zero], axis=-1),
        "Y": np.stack([yx - cx, yy - cy, zero], axis=-1),
    }
    k = np.asarray(b.s_top / b.s_base, dtype=float)
    h = np.asarray(block_metrics(b).h3, dtype=float)
    lift = np.stack([zero, zero, zero + h], axis=-1)
    out = dict(base)
    for name, p in base.items():
        out[name + "1"] = k[..., None] * p + lift
    return out


def decomposition_dihedrals(block):
    """The nine dihedral angles obtained by splitting the block into three
    tetrahedra {O O' X Y}, {Y Y' X O'} and {X X' Y' O'} along the trapezoid
    diagonals, summing the tetrahedron dihedrals that meet along each edge.
    """
    b = block
    a = b.a
    s, sp, sb = b.s_base, b.sp_base, b.sbar_base
    s1, sp1, sb1 = b.s_top, b.sp_top, b.sbar_top
    m = block_metrics(b)
    d, dp, db = m.d, m.dp, m.dbar
    # Vertices: O, X, Y and O1, X1, Y1.  Lengths of the tetrahedron edges:
    L = {
        ("O", "O1"): a, ("X", "X1"): a, ("Y", "Y1"): a,
        ("O", "X"): s, ("O", "Y"): sp, ("X", "Y"): sb,
        ("O1", "X1"): s1, ("O1", "Y1"): sp1, ("X1", "Y1"): sb1,
        ("O1", "X"): d, ("O1", "Y"): dp, ("X", "Y1"): db,
    }

    def ln(p, q):
        return L[(p, q)] if (p, q) in L else L[(q, p)]

    def dih(tet, p, q):
        x, y = (v for v in tet if v not in (p, q))
        return tetra_dihedral(ln(p, q), ln(p, x), ln(p, y), ln(q, x), ln(q, y), ln(x, y))

    t1 = ("O", "O1", "X", "Y")
    t2 = ("Y", "Y1", "X", "O1")
    t3 = ("X", "X1", "Y1", "O1")
    return BlockDihedrals(
        s=dih(t1, "O", "X"),
        sp=dih(t1, "O", "Y"),
        sbar=dih(t1, "X", "Y") + dih(t2, "X", "Y"),
        s_top=dih(t3, "O1", "X1"),
        sp_top=dih(t2, "O1", "Y1") + dih(t3, "O1", "Y1"),
        sbar_top=dih(t3, "X1", "Y1"),
        axial_O=dih(t1, "O", "O1"),
        axial_X=dih(t3, "X", "X1"),
        axial_Y=dih(t2, "Y", "Y1"),
    )
