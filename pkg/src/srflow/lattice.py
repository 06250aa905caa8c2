"""Axisymmetric frustum lattice and its static dual geometry.

Levels ``i = 1..N`` carry cross-sectional spheres of radius ``rho_i``; layer
``i`` (between levels ``i`` and ``i + 1``) has axial edge ``a_i``.  Each sphere
is represented by the projected two-ring patch around its pole, giving three
block types per layer:

* ``T1`` = O X Y with edges (s, s, sbar); carries hinges s, sbar, a, ahat
* ``T2`` = X Y V with edges (sbar, u, u); the second block at hinge sbar
* ``T3`` = X U V with edges (up, u, ubar); completes the ring around ahat

Boundary levels see ghost levels produced by the closure rule:

* ``reflective``: even mirror, rho_0 = rho_2, a_0 = a_1 (and likewise at N)
* ``pole_regular``: odd mirror about a pole half a spacing beyond the end
  level, rho_0 = -rho_1, a_0 = a_1; smooth because rho is odd about a pole.
  Ghost radii are negative, so geometric quantities at the end levels are
  undefined (NaN) and only difference formulas use them.
* ``none``: no ghosts; end-level quantities are NaN.

Public per-level functions use 1-based level indices.
"""

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from . import _num
from .errors import GeometryError
from .frustum import FrustumBlock, block_dihedrals, dual_segments, kite_areas, moment_arms
from .sphere import EDGE_NAMES, unit_edges

__all__ = [
    "LatticeState",
    "DualVertexData",
    "CLOSURES",
    "build",
    "extend_with_ghosts",
    "deficit_angles",
    "dual_areas",
    "gaussian_curvatures",
    "dual_edges",
    "volume_fractions",
    "dual_vertex_data",
    "dual_edge_lengths",
    "pole_to_pole_range",
    "write_lattice_csv",
    "LATTICE_COLUMNS",
]

CLOSURES = ("reflective", "pole_regular", "none")
LATTICE_COLUMNS = ("i", "position", "rho", "a", "eps_s", "eps_sbar", "eps_a", "eps_ahat",
                   "K_s", "K_sbar", "K_a", "K_ahat", "alpha", "sigma")


def extend_with_ghosts(rho, a, closure, depth=2):
    """Arrays padded with ``depth`` ghost levels (and layers) on each side.

    Returns ``(rho_ext, a_ext)`` with ``rho_ext[depth + i - 1] = rho_i`` and
    ``a_ext[depth + j - 1] = a_j``.  Missing ghosts are NaN.
    """
    rho = np.asarray(rho)
    a = np.asarray(a)
    n = rho.size
    if closure not in CLOSURES:
        raise ValueError(f"unknown closure {closure!r}")
    if depth >= n - 1:
        raise ValueError("too few levels for the ghost depth")
    nan = np.full(depth, np.nan, dtype=rho.dtype if rho.dtype == object else float)
    if closure == "none":
        return np.concatenate([nan, rho, nan]), np.concatenate([nan, a, nan])
    # a_ext mirrors about the end level (reflective) or the pole (odd closure)
    if closure == "reflective":
        lo_r = rho[1:depth + 1][::-1]
        hi_r = rho[n - depth - 1:n - 1][::-1]
        lo_a = a[:depth][::-1]
        hi_a = a[n - 1 - depth:][::-1]
    else:
        lo_r = -rho[:depth][::-1]
        hi_r = -rho[n - depth:][::-1]
        # the ghost layer through the pole copies the end layer; deeper ghost
        # layers mirror interior layers
        lo_a = np.concatenate([a[:depth - 1][::-1], a[:1]])
        hi_a = np.concatenate([a[-1:], a[::-1][:depth - 1]])
    return np.concatenate([lo_r, rho, hi_r]), np.concatenate([lo_a, a, hi_a])


@dataclass(frozen=True, eq=False)
class LatticeState:
    """An immutable snapshot of the lattice.

    ``cross_section='flat'`` replaces the projected sphere patch by the flat
    equilateral lattice (all five edges equal to ``rho * xi``), which tiles
    flat space when ``rho`` is constant.
    """

    xi: float
    rho: np.ndarray
    a: np.ndarray
    t: float = 0.0
    closure: str = "reflective"
    origin: float = 0.0
    cross_section: str = "sphere"

    def __post_init__(self):
        rho = _num.asarray(self.rho)
        a = _num.asarray(self.a)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "a", a)
        if rho.ndim != 1 or a.ndim != 1 or a.size != rho.size - 1:
            raise ValueError("need N radii and N - 1 axial edges")
        if rho.size < 5:
            raise ValueError("need at least 5 levels")
        if np.any(_num.real(rho) <= 0) or np.any(_num.real(a) <= 0):
            raise GeometryError("radii and axial edges must be positive")
        if not 0 < float(self.xi) < 1:
            raise ValueError("xi must lie in (0, 1)")
        if self.closure not in CLOSURES:
            raise ValueError(f"unknown closure {self.closure!r}")
        if self.cross_section not in ("sphere", "flat"):
            raise ValueError("cross_section must be 'sphere' or 'flat'")

    @property
    def n(self):
        return self.rho.size

    @property
    def positions(self):
        return self.origin + np.concatenate([[0.0], np.cumsum(np.asarray(self.a, dtype=float))])

    def replace(self, **kw):
        return replace(self, **kw)

    def mirrored(self):
        L = float(np.sum(np.asarray(self.a, dtype=float)))
        return replace(self, rho=self.rho[::-1].copy(), a=self.a[::-1].copy(),
                       origin=-(self.origin + L))

    def to_mp(self):
        """Copy with extended-precision (mpmath) arrays."""
        return replace(self, rho=_num.to_mp(self.rho), a=_num.to_mp(self.a),
                       xi=_num.to_mp(self.xi))

    @cached_property
    def unit_edges(self):
        if self.cross_section == "flat":
            return {n: self.xi * (_num.asarray(self.xi) * 0 + 1) for n in EDGE_NAMES}
        return unit_edges(self.xi)

    @cached_property
    def ghosted(self):
        return extend_with_ghosts(self.rho, self.a, self.closure, depth=2)

    @cached_property
    def dual(self):
        return _evaluate(self)


@dataclass(frozen=True)
class DualVertexData:
    """Per-level dual data.  Level arrays have length N (index i - 1); layer
    arrays (sigma, eps_a, eps_ahat, a_star, ahat_star, K_a, K_ahat, f_sigma_*)
    have length N - 1 (index j - 1)."""

    alpha: np.ndarray
    sigma: np.ndarray
    eps_s: np.ndarray
    eps_sbar: np.ndarray
    eps_a: np.ndarray
    eps_ahat: np.ndarray
    s_star: np.ndarray
    sbar_star: np.ndarray
    a_star: np.ndarray
    ahat_star: np.ndarray
    K_s: np.ndarray
    K_sbar: np.ndarray
    K_a: np.ndarray
    K_ahat: np.ndarray
    f_alpha_s: np.ndarray
    f_alpha_sbar: np.ndarray
    f_sigma_s: np.ndarray
    f_sigma_s_next: np.ndarray
    f_sigma_a: np.ndarray
    rate_alpha: np.ndarray
    rate_sigma: np.ndarray
    # ghost-layer values at both ends, used by the velocity system
    extra: dict = field(default_factory=dict, repr=False)


def _layer_blocks(g, r0, r1, a):
    """The three block types of one set of layers (arrays)."""
    k = r1 / r0
    t1 = FrustumBlock.from_triangle(a, r0 * g["s"], r0 * g["s"], r0 * g["sbar"], k)
    t2 = FrustumBlock.from_triangle(a, r0 * g["sbar"], r0 * g["u"], r0 * g["u"], k)
    t3 = FrustumBlock.from_triangle(a, r0 * g["up"], r0 * g["u"], r0 * g["ubar"], k)
    return t1, t2, t3


def _nan_like(x, n):
    if _num.is_mp(x):
        out = np.empty(n, dtype=object)
        out[:] = np.nan
        return out
    return np.full(n, np.nan, dtype=complex if np.iscomplexobj(x) else float)


def _layer_quantities(state):
    """Dihedrals, kites and dual segments on every layer j = 0..N (ghosts
    included), NaN where a ghost is missing or has non-positive radius."""
    rho_e, a_e = state.ghosted
    d = 2
    # layers j = 0..N correspond to a_e[d - 1 .. d + N - 1]
    n = state.n
    r0 = rho_e[d - 1:d + n]
    r1 = rho_e[d:d + n + 1]
    a = a_e[d - 1:d + n]
    real = lambda v: np.asarray(_num.real(v), dtype=float)
    ok = np.isfinite(real(r0)) & np.isfinite(real(r1)) & np.isfinite(real(a))
    ok[ok] &= (real(r0)[ok] > 0) & (real(r1)[ok] > 0)
    g = state.unit_edges
    names = ("th_s", "th_sbar", "th_O", "th_X", "k_s", "k_s_top", "k_sbar", "k_sbar_top",
             "k_O", "k_X", "alpha_base", "alpha_top", "sigma_half", "t2_th", "t2_k", "t2_k_top",
             "t2_th_X", "t2_k_X", "t3_th_X", "t3_k_X", "m_s", "m_s_top", "m_a", "h2")
    out = {nm: _nan_like(r0, n + 1) for nm in names}
    if not np.any(ok):
        return out, ok
    idx = np.nonzero(ok)[0]
    t1, t2, t3 = _layer_blocks(g, r0[idx], r1[idx], a[idx])
    d1, d2, d3 = block_dihedrals(t1), block_dihedrals(t2), block_dihedrals(t3)
    m1 = moment_arms(t1)
    g1 = dual_segments(t1)
    k1 = kite_areas(t1, m1, g1)
    k2 = kite_areas(t2)
    k3 = kite_areas(t3)
    vals = {
        "th_s": d1.s, "th_sbar": d1.sbar, "th_O": d1.axial_O, "th_X": d1.axial_X,
        "k_s": k1.s, "k_s_top": k1.s_top, "k_sbar": k1.sbar, "k_sbar_top": k1.sbar_top,
        "k_O": k1.axial_O, "k_X": k1.axial_X,
        "alpha_base": g1.alpha_base, "alpha_top": g1.alpha_top, "sigma_half": g1.sigma_half,
        "t2_th": d2.s, "t2_k": k2.s, "t2_k_top": k2.s_top,
        "t2_th_X": d2.axial_O, "t2_k_X": k2.axial_O,
        "t3_th_X": d3.axial_O, "t3_k_X": k3.axial_O,
        "m_s": m1.s_sigma, "m_s_top": m1.s_top_sigma, "m_a": m1.a_sigma,
        "h2": _num.sqrt(4 * a[idx] ** 2 - (r0[idx] * g["s"] - r1[idx] * g["s"]) ** 2) / 2,
    }
    for nm, v in vals.items():
        out[nm][idx] = v
    return out, ok


def _evaluate(state):
    L, ok = _layer_quantities(state)
    n = state.n
    pi = _num.pi_like(state.rho)
    g = state.unit_edges
    lo = slice(0, n)       # layer below level i  (j = i - 1)
    hi = slice(1, n + 1)   # layer above level i  (j = i)

    # hinges on the cross-sections, per level
    eps_s = 2 * (L["th_s"][lo] - L["th_s"][hi])
    eps_sbar = (L["th_sbar"][lo] - L["th_sbar"][hi]) + (L["t2_th"][lo] - L["t2_th"][hi])
    s_star = 2 * L["k_s"][hi] + 2 * L["k_s_top"][lo]
    sbar_star = L["k_sbar"][hi] + L["t2_k"][hi] + L["k_sbar_top"][lo] + L["t2_k_top"][lo]
    alpha = L["alpha_top"][lo] + L["alpha_base"][hi]
    K_s = eps_s / s_star
    K_sbar = eps_sbar / sbar_star

    # axial hinges, per layer j = 0..N
    eps_a_all = 2 * pi - 6 * L["th_O"]
    eps_ahat_all = 2 * pi - 2 * (L["th_X"] + L["t2_th_X"] + L["t3_th_X"])
    a_star_all = 6 * L["k_O"]
    ahat_star_all = 2 * (L["k_X"] + L["t2_k_X"] + L["t3_k_X"])
    K_a_all = eps_a_all / a_star_all
    K_ahat_all = eps_ahat_all / ahat_star_all
    sigma_all = 2 * L["sigma_half"]

    # volume fractions: triangle at each level (scale free), trapezoid per layer
    s1, sb1 = g["s"], g["sbar"]
    tri2 = (sb1 / 4) * _num.sqrt(4 * s1 * s1 - sb1 * sb1) * 2   # twice the unit area
    m_s_alpha = s1 * sb1 * sb1 / (8 * tri2 / 2)
    m_sb_alpha = sb1 * (2 * s1 * s1 - sb1 * sb1) / (8 * tri2 / 2)
    f_as = s1 * m_s_alpha / tri2
    f_asb = sb1 * m_sb_alpha / tri2
    ones = _ones_like(state.rho, n)
    f_alpha_s = f_as * ones
    f_alpha_sbar = f_asb * ones

    rho_e, a_e = state.ghosted
    r0 = rho_e[1:n + 2]
    r1 = rho_e[2:n + 3]
    a_l = a_e[1:n + 2]
    sb_lo, sb_hi = r0 * g["s"], r1 * g["s"]
    trap2 = (sb_lo + sb_hi) * L["h2"]            # twice the trapezoid area
    f_ss_all = sb_lo * L["m_s"] / trap2
    f_ss1_all = sb_hi * L["m_s_top"] / trap2
    f_sa_all = a_l * L["m_a"] / trap2

    rate_alpha = -4 * K_s * f_alpha_s - 2 * K_sbar * f_alpha_sbar
    # sigma rates on layers j = 0..N: K_s at level j is index j - 1
    K_s_pad = np.concatenate([_nan_like(K_s, 1), K_s, _nan_like(K_s, 1)])
    rate_sigma_all = (-2 * K_s_pad[0:n + 1] * f_ss_all - 2 * K_s_pad[1:n + 2] * f_ss1_all
                      - 2 * (K_a_all + K_ahat_all) * f_sa_all)

    inner = slice(1, n)    # real layers 1..N-1
    return DualVertexData(
        alpha=alpha, sigma=sigma_all[inner],
        eps_s=eps_s, eps_sbar=eps_sbar,
        eps_a=eps_a_all[inner], eps_ahat=eps_ahat_all[inner],
        s_star=s_star, sbar_star=sbar_star,
        a_star=a_star_all[inner], ahat_star=ahat_star_all[inner],
        K_s=K_s, K_sbar=K_sbar, K_a=K_a_all[inner], K_ahat=K_ahat_all[inner],
        f_alpha_s=f_alpha_s, f_alpha_sbar=f_alpha_sbar,
        f_sigma_s=f_ss_all[inner], f_sigma_s_next=f_ss1_all[inner], f_sigma_a=f_sa_all[inner],
        rate_alpha=rate_alpha, rate_sigma=rate_sigma_all[inner],
        extra={"sigma_all": sigma_all, "rate_sigma_all": rate_sigma_all, "layer_ok": ok},
    )


def _ones_like(x, n):
    if _num.is_mp(x):
        out = np.empty(n, dtype=object)
        out[:] = 1
        return out
    return np.ones(n)


def build(profile, n_levels, xi, a_range, closure="reflective", cross_section="sphere"):
    """Sample ``profile`` at ``n_levels`` equally spaced positions of ``a_range``.

    For a pole-to-pole lattice pass ``a_range`` inset by half a spacing from
    each pole and use ``closure='pole_regular'``.
    """
    if n_levels < 5:
        raise ValueError("need at least 5 levels")
    if not 0 < xi <= 0.5:
        raise ValueError("xi must lie in (0, 0.5]")
    lo, hi = map(float, a_range)
    if not hi > lo:
        raise ValueError("empty range")
    pos = np.linspace(lo, hi, n_levels)
    rho = np.asarray(profile(pos), dtype=float)
    bad = np.nonzero(~(rho > 0))[0]
    if bad.size:
        raise ValueError(f"profile is not positive at level {bad[0] + 1}")
    a = np.full(n_levels - 1, (hi - lo) / (n_levels - 1))
    state = LatticeState(xi=xi, rho=rho, a=a, closure=closure, origin=lo,
                         cross_section=cross_section)
    try:
        state.dual
    except GeometryError as exc:
        raise GeometryError(f"lattice not realizable: {exc}") from exc
    return state


def pole_to_pole_range(half_length, n_levels):
    """Range inset by half a spacing from poles at +-half_length."""
    h = 2 * half_length / n_levels
    return (-half_length + h / 2, half_length - h / 2)


def _level(state, i):
    if not 1 <= i <= state.n:
        raise IndexError(f"level {i} outside 1..{state.n}")
    return i - 1


def deficit_angles(state, i):
    k = _level(state, i)
    d = state.dual
    ea, eah = _axial_at(state, "eps_a", i), _axial_at(state, "eps_ahat", i)
    return {"eps_s": d.eps_s[k], "eps_sbar": d.eps_sbar[k], "eps_a": ea, "eps_ahat": eah}


def dual_areas(state, i):
    k = _level(state, i)
    d = state.dual
    return {"s_star": d.s_star[k], "sbar_star": d.sbar_star[k],
            "a_star": _axial_at(state, "a_star", i), "ahat_star": _axial_at(state, "ahat_star", i)}


def gaussian_curvatures(state, i):
    k = _level(state, i)
    d = state.dual
    return {"K_s": d.K_s[k], "K_sbar": d.K_sbar[k],
            "K_a": _axial_at(state, "K_a", i), "K_ahat": _axial_at(state, "K_ahat", i)}


def dual_edges(state, i):
    k = _level(state, i)
    d = state.dual
    return {"alpha": d.alpha[k], "sigma": _axial_at(state, "sigma", i)}


def volume_fractions(state, i):
    k = _level(state, i)
    d = state.dual
    return {"f_alpha_s": d.f_alpha_s[k], "f_alpha_sbar": d.f_alpha_sbar[k],
            "f_sigma_s": _axial_at(state, "f_sigma_s", i),
            "f_sigma_s_next": _axial_at(state, "f_sigma_s_next", i),
            "f_sigma_a": _axial_at(state, "f_sigma_a", i)}


def _axial_at(state, key, i):
    """Layer quantity for the layer above level i (NaN above the last level)."""
    arr = getattr(state.dual, key)
    return arr[i - 1] if i < state.n else np.nan


def dual_vertex_data(state):
    return state.dual


def write_lattice_csv(state, path, header=None):
    """Dump per-level data; layer quantities are those of the layer above."""
    from .io import write_csv
    d = state.dual
    n = state.n
    pos = state.positions

    def lay(v):
        return np.concatenate([np.asarray(v, dtype=float), [np.nan]])

    cols = {
        "i": np.arange(1, n + 1),
        "position": pos,
        "rho": np.asarray(state.rho, dtype=float),
        "a": lay(state.a),
        "eps_s": d.eps_s, "eps_sbar": d.eps_sbar, "eps_a": lay(d.eps_a), "eps_ahat": lay(d.eps_ahat),
        "K_s": d.K_s, "K_sbar": d.K_sbar, "K_a": lay(d.K_a), "K_ahat": lay(d.K_ahat),
        "alpha": d.alpha, "sigma": lay(d.sigma),
    }
    write_csv(path, LATTICE_COLUMNS, [np.asarray(cols[c], dtype=float) for c in LATTICE_COLUMNS],
              header=header)


def dual_edge_lengths(xi, rho, a, closure="reflective", cross_section="sphere"):
    """Dual edges (alpha_1..alpha_N, sigma_1..sigma_{N-1}) from the block
    circumcenters alone.  Cheaper than the full evaluation and safe for
    complex-step differentiation."""
    state = LatticeState(xi=xi, rho=rho, a=a, closure=closure, cross_section=cross_section)
    rho_e, a_e = state.ghosted
    n = state.n
    r0, r1, al = rho_e[1:n + 2], rho_e[2:n + 3], a_e[1:n + 2]
    re = lambda v: np.asarray(_num.real(v), dtype=float)
    ok = np.isfinite(re(r0)) & np.isfinite(re(r1)) & np.isfinite(re(al))
    ok[ok] &= (re(r0)[ok] > 0) & (re(r1)[ok] > 0)
    g = state.unit_edges
    base = _nan_like(rho_e, n + 1)
    top = _nan_like(rho_e, n + 1)
    half = _nan_like(rho_e, n + 1)
    idx = np.nonzero(ok)[0]
    k = r1[idx] / r0[idx]
    t1 = FrustumBlock.from_triangle(al[idx], r0[idx] * g["s"], r0[idx] * g["s"],
                                    r0[idx] * g["sbar"], k)
    seg = dual_segments(t1)
    base[idx], top[idx], half[idx] = seg.alpha_base, seg.alpha_top, seg.sigma_half
    alpha = top[0:n] + base[1:n + 1]
    sigma = 2 * half[1:n]
    return alpha, sigma
