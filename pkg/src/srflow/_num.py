"""Elementwise math that works for float arrays and for mpmath object arrays.

Geometry code calls these instead of numpy ufuncs so the same formulas can be
evaluated in extended precision (object arrays of ``mpmath.mpf``).
"""

import mpmath
import numpy as np

_mp_sqrt = np.frompyfunc(mpmath.sqrt, 1, 1)
_mp_atan2 = np.frompyfunc(mpmath.atan2, 2, 1)
_mp_atan = np.frompyfunc(mpmath.atan, 1, 1)
_mp_acos = np.frompyfunc(mpmath.acos, 1, 1)
_mp_cos = np.frompyfunc(mpmath.cos, 1, 1)
_mp_sin = np.frompyfunc(mpmath.sin, 1, 1)


def is_mp(*xs):
    return any(np.asarray(x).dtype == object for x in xs)


def asarray(x):
    x = np.asarray(x)
    if x.dtype == object or np.iscomplexobj(x):
        return x
    return x.astype(float)


def real(x):
    """Real part for complex-step evaluation; identity otherwise."""
    return x.real if np.iscomplexobj(x) else x


def _unwrap(r):
    r = np.asarray(r)
    return r[()] if r.ndim == 0 else r


def sqrt(x):
    return _unwrap(_mp_sqrt(x)) if is_mp(x) else np.sqrt(x)


def atan2(y, x):
    return _unwrap(_mp_atan2(y, x)) if is_mp(y, x) else np.arctan2(y, x)


def arctan(x):
    return _unwrap(_mp_atan(x)) if is_mp(x) else np.arctan(x)


def arccos(x):
    return _unwrap(_mp_acos(x)) if is_mp(x) else np.arccos(x)


def cos(x):
    return _unwrap(_mp_cos(x)) if is_mp(x) else np.cos(x)


def sin(x):
    return _unwrap(_mp_sin(x)) if is_mp(x) else np.sin(x)


def pi_like(x):
    return mpmath.mpf(mpmath.pi) if is_mp(x) else np.pi


def to_mp(x):
    """Convert floats (scalar or array) to an object array of mpf."""
    arr = np.asarray(x, dtype=float)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = mpmath.mpf(v)
    return out if out.ndim else out[()]


def to_float(x):
    return np.asarray(x, dtype=float)
