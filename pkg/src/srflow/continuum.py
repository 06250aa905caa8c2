"""Reference solver for Ricci flow on warped products I x S^2.

The metric is da^2 + rho(a)^2 dOmega^2.  On a co-moving grid of proper axial
distance with spacings h_j the flow reads

    d rho / dt = rho'' + (rho'^2 - 1) / rho
    d h / dt   = 2 h rho'' / rho

(the spacing equation integrated over each cell by the midpoint rule).
Derivatives come from three-point finite-difference weights on the actual
nonuniform positions.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import FlowStopped

__all__ = ["ContinuumGrid", "profile_eval", "rf_rhs", "fd_weights", "integrate_continuum",
           "ricci_diagnostic", "grid_from_profile"]


@dataclass(frozen=True, eq=False)
class ContinuumGrid:
    h: np.ndarray
    rho: np.ndarray
    t: float = 0.0
    closure: str = "reflective"
    origin: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        rho = np.asarray(self.rho, dtype=float)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "rho", rho)
        if rho.ndim != 1 or h.shape != (rho.size - 1,):
            raise ValueError("need N values and N - 1 spacings")
        if rho.size < 5:
            raise ValueError("need at least 5 grid points")
        if np.any(h <= 0):
            raise ValueError("spacings must be positive")
        if self.closure not in ("reflective", "pole_regular", "none"):
            raise ValueError(f"unknown closure {self.closure!r}")

    @property
    def positions(self):
        return self.origin + np.concatenate([[0.0], np.cumsum(self.h)])


def profile_eval(profile, a):
    """rho(a) of a radial profile; positions outside its domain raise."""
    return profile(a)


def grid_from_profile(profile, n, a_range, closure="reflective"):
    lo, hi = map(float, a_range)
    x = np.linspace(lo, hi, n)
    return ContinuumGrid(h=np.diff(x), rho=profile(x), closure=closure, origin=lo)


def fd_weights(x0, x, m):
    """Finite-difference weights for derivatives 0..m at ``x0`` on nodes ``x``
    (Fornberg's recursion).  Returns an array of shape (m + 1, len(x))."""
    n = len(x)
    c = np.zeros((m + 1, n))
    c1 = 1.0
    c4 = x[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def d1_five_point(x, f):
    """First derivative at x[2:-2] from five-point Lagrange weights on the
    (possibly nonuniform) nodes; fourth order."""
    x = np.asarray(x, dtype=float)
    n = x.size - 4
    X = np.stack([x[k:k + n] for k in range(5)], axis=1)
    F = np.stack([f[k:k + n] for k in range(5)], axis=1)
    x0 = X[:, 2:3]
    out = np.zeros(n)
    for k in range(5):
        # L_k'(x0) with x0 one of the nodes
        others = [m for m in range(5) if m != k]
        den = np.prod([X[:, k] - X[:, m] for m in others], axis=0)
        num = np.zeros(n)
        for m in others:
            num += np.prod([x0[:, 0] - X[:, l] for l in others if l != m], axis=0)
        out += F[:, k] * num / den
    return out


def _ghosted(grid, depth=2):
    """Positions and values with ghost points: even mirror through the end
    point (reflective) or odd mirror through a pole half a spacing beyond it
    (pole_regular)."""
    rho, h = grid.rho, grid.h
    x = np.concatenate([[0.0], np.cumsum(h)])
    if grid.closure == "reflective":
        gl, gr = rho[1:depth + 1][::-1], rho[-depth - 1:-1][::-1]
        xl = x[0] - (x[1:depth + 1] - x[0])[::-1]
        xr = x[-1] + (x[-1] - x[-depth - 1:-1])[::-1]
    else:
        gl, gr = -rho[:depth][::-1], -rho[-depth:][::-1]
        pl, pr = x[0] - h[0] / 2, x[-1] + h[-1] / 2
        xl = 2 * pl - x[:depth][::-1]
        xr = 2 * pr - x[-depth:][::-1]
    return np.concatenate([xl, x, xr]), np.concatenate([gl, rho, gr])


def _derivatives(grid):
    """(rho', rho'') at every grid point."""
    rho = grid.rho
    n = rho.size
    if grid.closure == "none":
        x = np.concatenate([[0.0], np.cumsum(grid.h)])
        xe, re = x, rho
    else:
        xe, re = _ghosted(grid, 1)
    hm, hp = np.diff(xe)[:-1], np.diff(xe)[1:]
    rm, r0, rp = re[:-2], re[1:-1], re[2:]
    # three-point nonuniform central weights in closed form
    d1 = (hm * hm * (rp - r0) + hp * hp * (r0 - rm)) / (hm * hp * (hm + hp))
    d2 = 2 * (hm * (rp - r0) - hp * (r0 - rm)) / (hm * hp * (hm + hp))
    if grid.closure == "none":
        # one-sided, second order for both derivatives at the ends
        d1 = np.concatenate([[0.0], d1, [0.0]])
        d2 = np.concatenate([[0.0], d2, [0.0]])
        for end in (0, n - 1):
            i3 = np.arange(3) if end == 0 else np.arange(n - 3, n)
            i4 = np.arange(4) if end == 0 else np.arange(n - 4, n)
            d1[end] = fd_weights(x[end], x[i3], 1)[1] @ rho[i3]
            d2[end] = fd_weights(x[end], x[i4], 2)[2] @ rho[i4]
    elif grid.closure == "pole_regular":
        # (rho'^2 - 1) / rho^2 amplifies the error in rho' by 1/rho^2 near a
        # pole; the fourth-order quotient keeps it convergent there
        xe2, re2 = _ghosted(grid, 2)
        d1 = d1_five_point(xe2, re2)
    return d1, d2


def rf_rhs(grid):
    """(dh/dt, drho/dt) for the warped-product Ricci flow."""
    rho = grid.rho
    if np.any(rho <= 0):
        raise FlowStopped("non-positive radius", grid.t)
    d1, d2 = _derivatives(grid)
    rho_dot = d2 + (d1 * d1 - 1.0) / rho
    lam = 2 * d2 / rho
    h_dot = grid.h * 0.5 * (lam[:-1] + lam[1:])
    return h_dot, rho_dot


def ricci_diagnostic(grid):
    """Ricci tensor components: axial -2 rho''/rho and spherical
    -(rho''/rho + (rho'^2 - 1)/rho^2), per grid point."""
    d1, d2 = _derivatives(grid)
    r = grid.rho
    return -2 * d2 / r, -(d2 / r + (d1 * d1 - 1) / (r * r))


def integrate_continuum(grid0, config=None):
    """Method-of-lines integration with the same driver, stop rules and
    trajectory type as the lattice flow (``config`` is a ``FlowConfig``;
    its mode and stencil fields are ignored)."""
    from .flow import FlowConfig, _drive, _trajectory, governing_radius

    config = FlowConfig() if config is None else config
    n = grid0.rho.size
    g0, _, has_waist = governing_radius(grid0.rho)

    def make_state(y, t):
        return replace(grid0, rho=y[:n], h=y[n:], t=t)

    def fun(t, y):
        if np.any(y[n:] <= 0):
            raise FlowStopped("non-positive spacing", t)
        hd, rd = rf_rhs(make_state(y, t))
        return np.concatenate([rd, hd])

    def summarize(g):
        val, k, _ = governing_radius(g.rho)
        d1, d2 = _derivatives(g)
        K = np.concatenate([np.abs(d2 / g.rho), np.abs((1 - d1 * d1) / g.rho ** 2)])
        return {"t": g.t, "g": val, "index": k + 1, "min_a": float(np.min(g.h)),
                "max_K": float(np.max(K))}

    stop = lambda g: governing_radius(g.rho)[0] < config.min_rho_fraction * g0
    y0 = np.concatenate([grid0.rho, grid0.h])
    rows, snaps, last, reason = _drive(fun, y0, grid0.t, config, n, make_state, summarize, stop)
    return _trajectory(rows, snaps, last, reason, has_waist, config)
