"""Projected hexagonal patch around a pole of a cross-sectional 2-sphere.

An equilateral hexagonal lattice of edge ``l = rho * xi`` is laid in the plane
tangent to the sphere at the pole and projected centrally (from the sphere's
center) onto the sphere.  Five distinct geodesic edge lengths appear in the
first two rings::

    s    = O X      (O at the pole, X in ring 1)
    sbar = X Y      (between two ring-1 vertices)
    u    = X V      (ring 1 to the ring-2 vertex V at (3/2, sqrt(3)/2) l)
    ubar = U V      (between ring-2 vertices U at (2, 0) l and V)
    up   = X U      (radially outward, ring 1 to ring 2)
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _num

__all__ = [
    "SphereEdges",
    "EDGE_NAMES",
    "PRINTED_COEFFS",
    "EXACT_COEFFS",
    "project_hex_vertices",
    "exact_edges",
    "edge_series",
    "tangent_coordinates",
    "unit_edges",
]

EDGE_NAMES = ("s", "sbar", "u", "ubar", "up")

# Coefficients of xi^2 and xi^4 in edge / (rho xi).
PRINTED_COEFFS = {
    "s": (Fraction(-1, 3), Fraction(1, 5)),
    "sbar": (Fraction(-11, 24), Fraction(203, 640)),
    "u": (Fraction(-35, 24), Fraction(1183, 640)),
    "ubar": (Fraction(-11, 6), Fraction(203, 40)),
    "up": (Fraction(-7, 3), Fraction(31, 5)),
}

# Same table from a symbolic expansion of the exact lengths.  Only the xi^4
# coefficient of u differs from the printed one.
EXACT_COEFFS = dict(PRINTED_COEFFS)
EXACT_COEFFS["u"] = (Fraction(-35, 24), Fraction(1883, 640))

_EDGE_ENDPOINTS = {
    "s": ("O", "X"),
    "sbar": ("X", "Y"),
    "u": ("X", "V"),
    "ubar": ("U", "V"),
    "up": ("X", "U"),
}


@dataclass(frozen=True)
class SphereEdges:
    s: np.ndarray
    sbar: np.ndarray
    u: np.ndarray
    ubar: np.ndarray
    up: np.ndarray
    rho: np.ndarray
    xi: float

    def as_dict(self):
        return {n: getattr(self, n) for n in EDGE_NAMES}


def _check(rho, xi):
    if np.any(np.asarray(rho, dtype=float) <= 0):
        raise ValueError("sphere radius must be positive")
    xf = float(xi)
    if not 0 < xf < 1:
        raise ValueError(f"xi must lie in (0, 1), got {xf}")


def tangent_coordinates():
    """Tangent-plane coordinates (units of l) of the two-ring patch.

    Returns a dict of named vertices (O, X, Y, U, V) plus arrays ``ring1``
    (6 vertices) and ``ring2`` (12 vertices).
    """
    ang1 = np.arange(6) * np.pi / 3
    ring1 = np.stack([np.cos(ang1), np.sin(ang1)], axis=-1)
    far = 2 * ring1
    mid = ring1 + np.roll(ring1, -1, axis=0)
    ring2 = np.empty((12, 2))
    ring2[0::2] = far
    ring2[1::2] = mid
    named = {
        "O": (0.0, 0.0),
        "X": (1.0, 0.0),
        "Y": (0.5, np.sqrt(3) / 2),
        "U": (2.0, 0.0),
        "V": (1.5, np.sqrt(3) / 2),
    }
    return named, ring1, ring2


def _direction(xy, xi):
    """Unit vector from the sphere center through tangent point ``xi * xy``."""
    x, y = xy
    v = np.array([xi * x, xi * y, 1.0])
    return v / np.linalg.norm(v)


def project_hex_vertices(rho, xi):
    """Unit directions from the sphere center to the projected lattice.

    Returns a dict with keys O, X, Y, U, V and arrays ``ring1`` (6, 3) and
    ``ring2`` (12, 3).  The directions do not depend on ``rho``; it is
    validated so the call matches :func:`exact_edges`.
    """
    _check(rho, xi)
    named, ring1, ring2 = tangent_coordinates()
    out = {k: _direction(v, xi) for k, v in named.items()}
    out["ring1"] = np.array([_direction(p, xi) for p in ring1])
    out["ring2"] = np.array([_direction(p, xi) for p in ring2])
    return out


def _angle(p, q):
    return _num.atan2(_norm(_cross(p, q)), p[0] * q[0] + p[1] * q[1] + p[2] * q[2])


def _cross(p, q):
    return (p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0])


def _norm(v):
    return _num.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


def unit_edges(xi):
    """The five edge angles on the unit sphere (radians).

    ``xi`` may be a float, an array or an ``mpmath.mpf``; the tangent points
    are used unnormalised since the angle does not depend on their length.
    """
    xi = _num.asarray(xi)
    half = xi / 2
    one = xi * 0 + 1
    r3 = _num.sqrt(3 * one)
    pts = {
        "O": (0 * xi, 0 * xi, one),
        "X": (xi, 0 * xi, one),
        "Y": (half, half * r3, one),
        "U": (2 * xi, 0 * xi, one),
        "V": (3 * half, half * r3, one),
    }
    return {n: _angle(pts[p], pts[q]) for n, (p, q) in _EDGE_ENDPOINTS.items()}


def exact_edges(rho, xi):
    """Exact geodesic lengths of the five edges."""
    _check(rho, xi)
    rho = _num.asarray(rho)
    e = unit_edges(xi)
    return SphereEdges(rho=rho, xi=xi, **{n: rho * e[n] for n in EDGE_NAMES})


def edge_series(rho, xi, order, coeffs=None):
    """Truncated series ``rho xi (1 + c2 xi^2 + c4 xi^4)`` of each edge.

    ``order`` is 0, 2 or 4.  ``coeffs`` defaults to the printed table; pass
    :data:`EXACT_COEFFS` for the corrected one.
    """
    if order not in (0, 2, 4):
        raise ValueError("order must be 0, 2 or 4")
    _check(rho, xi)
    coeffs = PRINTED_COEFFS if coeffs is None else coeffs
    rho = _num.asarray(rho)
    x2 = xi * xi
    out = {}
    for n in EDGE_NAMES:
        c2, c4 = coeffs[n]
        poly = 1
        if order >= 2:
            poly = poly + _coef(c2, xi) * x2
        if order >= 4:
            poly = poly + _coef(c4, xi) * x2 * x2
        out[n] = rho * xi * poly
    return SphereEdges(rho=rho, xi=xi, **out)


def _coef(c, like):
    if _num.is_mp(like):
        import mpmath
        return mpmath.mpf(c.numerator) / c.denominator
    return c.numerator / c.denominator
