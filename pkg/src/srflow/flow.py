"""Time evolution of the lattice under the dual-edge flow.

Three velocity modes:

* ``continuum_limit``: difference-quotient rates at each level,
  adot/a = 2 D2rho / rho and rhodot/rho = D2rho/rho + (Drho/rho)^2 - 1/rho^2.
* ``zeroth_order``: leading-order rational right sides in xi.
* ``full``: rates from the lattice curvature, with (adot, rhodot) recovered
  from the chain rule through the exact dual-edge lengths.

Rates live on levels (alpha family) and layers (sigma family) while the
unknowns a and rho live on layers and levels respectively; a rate is moved
to the neighbouring location by averaging its two values.
"""

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import RK45
from scipy.linalg import solve_banded

from . import expansions as ex
from .errors import ConfigError, FlowStopped, GeometryError
from .lattice import LatticeState, dual_edge_lengths, extend_with_ghosts

__all__ = [
    "FlowConfig",
    "FlowTrajectory",
    "governing_radius",
    "ricci_alpha",
    "ricci_sigma",
    "reduced_rhs",
    "velocity_jacobian",
    "assemble_velocity_system",
    "velocities",
    "integrate",
    "estimate_T",
    "monitor_waist_bound",
    "TRAJECTORY_COLUMNS",
]

MODES = ("full", "zeroth_order", "continuum_limit")
TRAJECTORY_COLUMNS = ("t", "rho_min", "T_est", "ratio", "max_K", "min_a", "min_rho_index")


@dataclass(frozen=True)
class FlowConfig:
    mode: str = "continuum_limit"
    integrator: str = "rk45"
    dt: float = 1e-4
    rtol: float = 1e-8
    atol: float = 1e-12
    t_max: float = 1.0
    min_rho_fraction: float = 1e-3
    max_steps: int = 1_000_000
    stencil: str = "centered"
    jacobian: str = "analytic"
    cond_max: float = 1e12
    snapshot_every: int = 0
    bound_delta: float = 0.1
    closure: str = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.integrator not in ("rk45", "euler"):
            raise ConfigError(f"unknown integrator {self.integrator!r}")
        if self.stencil not in ("centered", "forward"):
            raise ConfigError(f"unknown stencil {self.stencil!r}")
        if self.jacobian not in ("analytic", "fd"):
            raise ConfigError(f"unknown jacobian {self.jacobian!r}")
        for name in ("dt", "rtol", "atol", "min_rho_fraction", "cond_max"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.t_max < 0 or self.max_steps < 0 or self.snapshot_every < 0 or self.bound_delta < 0:
            raise ConfigError("t_max, max_steps, snapshot_every and bound_delta must be non-negative")

    def to_dict(self):
        return asdict(self)


def governing_radius(rho):
    """(value, index, has_waist): the smallest interior local minimum of
    ``rho`` if there is one, the common value of a uniform profile, and the
    largest radius otherwise."""
    r = np.asarray(rho, dtype=float)
    top = r.max()
    if top - r.min() <= 1e-12 * abs(top):
        k = int(np.argmin(r))
        return float(r[k]), k, True
    inner = r[1:-1]
    is_min = (inner <= r[:-2]) & (inner <= r[2:]) & ((inner < r[:-2]) | (inner < r[2:]))
    if np.any(is_min):
        cand = np.nonzero(is_min)[0] + 1
        k = int(cand[np.argmin(r[cand])])
        return float(r[k]), k, True
    k = int(np.argmax(r))
    return float(r[k]), k, False


# -- rates -----------------------------------------------------------------

def ricci_alpha(state, i):
    """Flow rate of alpha_i (1-based level)."""
    return state.dual.rate_alpha[i - 1]


def ricci_sigma(state, i):
    """Flow rate of sigma_i (1-based layer, 1 <= i < N)."""
    return state.dual.rate_sigma[i - 1]


def _difference_quotients(state, stencil):
    """(D rho, D2 rho) at every level from ghost-extended arrays."""
    n = state.n
    rho_e, a_e = extend_with_ghosts(np.asarray(state.rho, dtype=float),
                                    np.asarray(state.a, dtype=float), state.closure, depth=1)
    rm, r, rp = rho_e[:n], rho_e[1:n + 1], rho_e[2:n + 2]
    hm, hp = a_e[:n], a_e[1:n + 1]
    if stencil == "forward":
        d1 = (rp - r) / hp
        d2 = ((rp - r) / hp - (r - rm) / hm) / hp
    else:
        d1 = (hm * hm * (rp - r) + hp * hp * (r - rm)) / (hm * hp * (hm + hp))
        d2 = 2 * (hm * (rp - r) - hp * (r - rm)) / (hm * hp * (hm + hp))
    if state.closure == "pole_regular" and stencil == "centered":
        from .continuum import d1_five_point
        rho2, a2 = extend_with_ghosts(np.asarray(state.rho, dtype=float),
                                      np.asarray(state.a, dtype=float), state.closure, depth=2)
        d1 = d1_five_point(np.concatenate([[0.0], np.cumsum(a2)]), rho2)
    if state.closure == "none":
        # one-sided second-order quotients at the end levels
        for end, sgn in ((0, 1), (n - 1, -1)):
            k = np.array([end, end + sgn, end + 2 * sgn, end + 3 * sgn])
            x = np.concatenate([[0.0], np.cumsum(np.asarray(state.a, dtype=float))])[k]
            from .continuum import fd_weights
            w1 = fd_weights(x[0], x[:3], 1)[1]
            w2 = fd_weights(x[0], x, 2)[2]
            d1[end] = w1 @ state.rho[k[:3]]
            d2[end] = w2 @ state.rho[k]
    return d1, d2


def _level_rates_continuum(state, stencil):
    d1, d2 = _difference_quotients(state, stencil)
    r = np.asarray(state.rho, dtype=float)
    return 2 * d2 / r, d2 / r + (d1 / r) ** 2 - 1 / r ** 2


def _zeroth_rates(state):
    """Leading-order rates: alpha family on levels, sigma family on layers
    0..N (ghost layers from the reflective closure)."""
    n = state.n
    rho_e, a_e = extend_with_ghosts(np.asarray(state.rho, dtype=float),
                                    np.asarray(state.a, dtype=float), state.closure, depth=2)
    # level i sits at rho_e[i + 1], layer j at a_e[j + 1]
    i = np.arange(1, n + 1)
    ra = ex.zeroth_alpha_rhs(rho_e[i], rho_e[i + 1], rho_e[i + 2], a_e[i], a_e[i + 1])
    j = np.arange(0, n)
    rs = ex.zeroth_sigma_rhs_corrected(rho_e[j], rho_e[j + 1], rho_e[j + 2], rho_e[j + 3],
                                       a_e[j], a_e[j + 1], a_e[j + 2])
    # rs[j] is layer j (between levels j and j + 1), j = 0..N-1; layer N by mirror
    rs = np.concatenate([rs, rs[-1:]])
    return ra, rs


def reduced_rhs(state, mode="continuum_limit", stencil="centered"):
    """(adot, rhodot) from the continuum-limit or zeroth-order rates."""
    r = np.asarray(state.rho, dtype=float)
    a = np.asarray(state.a, dtype=float)
    if np.any(r <= 0):
        raise FlowStopped("non-positive radius", state.t)
    if mode == "continuum_limit":
        ra, rs = _level_rates_continuum(state, stencil)
        return a * 0.5 * (ra[:-1] + ra[1:]), r * rs
    if mode == "zeroth_order":
        if state.closure != "reflective":
            raise ConfigError("zeroth_order mode needs the reflective closure")
        ra, rs = _zeroth_rates(state)
        return a * 0.5 * (ra[:-1] + ra[1:]), r * 0.5 * (rs[:-1] + rs[1:])
    raise ConfigError(f"reduced_rhs does not handle mode {mode!r}")


# -- full mode: chain rule through the dual-edge lengths -------------------

def _interleave(rho, a):
    x = np.empty(rho.size + a.size, dtype=np.result_type(rho, a))
    x[0::2] = rho
    x[1::2] = a
    return x


def _edges_vec(state, x):
    alpha, sigma = dual_edge_lengths(state.xi, x[0::2], x[1::2], state.closure,
                                     state.cross_section)
    return _interleave(alpha, sigma)


def velocity_jacobian(state, method="analytic", h=None):
    """Dense Jacobian of the interleaved dual edges [alpha_1, sigma_1, ...]
    with respect to the interleaved unknowns [rho_1, a_1, ..., rho_N].

    ``analytic`` uses complex-step differentiation (exact to rounding);
    ``fd`` uses central differences with relative step ``h`` (default 1e-7).
    Columns five apart never share a row, so they are perturbed together.
    """
    x0 = _interleave(np.asarray(state.rho, dtype=float), np.asarray(state.a, dtype=float))
    m = x0.size
    J = np.zeros((m, m))
    stride = 5
    for c0 in range(stride):
        cols = np.arange(c0, m, stride)
        if method == "analytic":
            step = 1e-30
            x = x0.astype(complex)
            x[cols] += 1j * step * np.abs(x0[cols])
            col_vals = np.imag(_edges_vec(state, x)) / step
            scale = np.abs(x0)
        else:
            hh = 1e-7 if h is None else h
            dx = np.zeros(m)
            dx[cols] = hh * np.abs(x0[cols])
            col_vals = (_edges_vec(state, x0 + dx) - _edges_vec(state, x0 - dx)) / 2
            scale = dx
        for c in cols:
            rows = np.arange(max(0, c - 2), min(m, c + 3))
            J[rows, c] = col_vals[rows] / scale[c]
    return J


def _to_banded(J, lo=2, up=2):
    m = J.shape[0]
    ab = np.zeros((lo + up + 1, m))
    for k in range(-lo, up + 1):
        d = np.diagonal(J, k)
        if k >= 0:
            ab[up - k, k:] = d
        else:
            ab[up - k, :m + k] = d
    return ab


def assemble_velocity_system(state, rate_alpha=None, rate_sigma=None, jacobian="analytic",
                             cond_max=1e12):
    """Solve J (rhodot, adot) = (alpha * rate_alpha, sigma * rate_sigma)."""
    if state.closure != "reflective":
        raise ConfigError("full mode needs the reflective closure")
    d = state.dual
    ra = d.rate_alpha if rate_alpha is None else np.asarray(rate_alpha, dtype=float)
    rs = d.rate_sigma if rate_sigma is None else np.asarray(rate_sigma, dtype=float)
    rhs = _interleave(np.asarray(d.alpha, dtype=float) * ra, np.asarray(d.sigma, dtype=float) * rs)
    if not np.all(np.isfinite(rhs)):
        raise FlowStopped("non-finite curvature rates", state.t)
    J = velocity_jacobian(state, jacobian)
    cond = np.linalg.cond(J)
    if not np.isfinite(cond) or cond > cond_max:
        raise FlowStopped(f"velocity system ill-conditioned (cond = {cond:.3g})", state.t)
    v = solve_banded((2, 2), _to_banded(J), rhs)
    return v[1::2], v[0::2], {"cond": float(cond),
                              "residual": float(np.max(np.abs(J @ v - rhs)))}


def velocities(state, config):
    """(adot, rhodot) for the configured mode."""
    if config.mode == "full":
        adot, rdot, _ = assemble_velocity_system(state, jacobian=config.jacobian,
                                                 cond_max=config.cond_max)
        return adot, rdot
    return reduced_rhs(state, config.mode, config.stencil)


# -- trajectories ------------------------------------------------------------

def estimate_T(t, g):
    """Singularity time from a linear fit of g^2 against t over the last 10%
    of samples (at least three)."""
    t = np.asarray(t, dtype=float)
    g = np.asarray(g, dtype=float)
    if t.size < 3:
        return np.nan
    k = max(3, int(np.ceil(0.1 * t.size)))
    c1, c0 = np.polyfit(t[-k:], g[-k:] ** 2, 1)
    if not c1 < 0:
        return np.nan
    return float(-c0 / c1)


@dataclass
class FlowTrajectory:
    """Per-step summaries plus optional state snapshots."""

    t: np.ndarray
    rho_min: np.ndarray
    max_K: np.ndarray
    min_a: np.ndarray
    min_rho_index: np.ndarray
    has_waist: bool
    reason: str
    final: object
    snapshots: list = field(default_factory=list, repr=False)
    config: dict = field(default_factory=dict, repr=False)

    @property
    def T_est(self):
        return estimate_T(self.t, self.rho_min)

    def ratio(self, T=None):
        T = self.T_est if T is None else T
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.rho_min ** 2 / (T - self.t)
        out[~(T - self.t > 0)] = np.nan
        return out

    def columns(self):
        T = self.T_est
        return {"t": self.t, "rho_min": self.rho_min, "T_est": np.full(self.t.size, T),
                "ratio": self.ratio(T), "max_K": self.max_K, "min_a": self.min_a,
                "min_rho_index": self.min_rho_index}

    def write_csv(self, path, header=None):
        from .io import write_csv
        cols = self.columns()
        write_csv(path, TRAJECTORY_COLUMNS, [cols[c] for c in TRAJECTORY_COLUMNS], header=header)

    def summary(self):
        mon = monitor_waist_bound(self, self.config.get("bound_delta", 0.1))
        return {"T_est": self.T_est, "reason": self.reason, "steps": int(self.t.size - 1),
                "t_final": float(self.t[-1]), "rho_min_final": float(self.rho_min[-1]),
                "waist_bound": mon}


def monitor_waist_bound(traj, delta=0.1):
    """Check rho_min^2 / (T - t) in [1 - delta, 2 + delta] over the last
    decade of T - t.  Profiles without a waist are not applicable."""
    if not traj.has_waist:
        return {"applicable": False, "passed": None, "reason": "no waist"}
    T = traj.T_est
    if not np.isfinite(T):
        return {"applicable": False, "passed": None, "reason": "no pinch detected"}
    tau = T - traj.t
    tau_end = tau[-1]
    if not tau_end > 0:
        return {"applicable": True, "passed": False, "reason": "stop time beyond T estimate",
                "T_est": T}
    sel = (tau > 0) & (tau <= 10 * tau_end)
    if tau[0] < 10 * tau_end:
        return {"applicable": False, "passed": None, "reason": "run shorter than one decade"}
    r = traj.rho_min[sel] ** 2 / tau[sel]
    lo, hi = float(r.min()), float(r.max())
    ok = bool(lo >= 1 - delta and hi <= 2 + delta)
    return {"applicable": True, "passed": ok, "ratio_min": lo, "ratio_max": hi,
            "samples": int(sel.sum()), "T_est": T, "delta": delta}


def _max_sectional(state):
    d1, d2 = _difference_quotients(state, "centered")
    r = np.asarray(state.rho, dtype=float)
    k = np.concatenate([np.abs(d2 / r), np.abs((1 - d1 * d1) / r ** 2)])
    return float(np.nanmax(k))


def _drive(fun, y0, t0, config, n, make_state, summarize, stop_check):
    """Shared step loop; y holds [values (n), spacings]."""
    rows = [summarize(make_state(y0, t0))]
    snaps = [make_state(y0, t0)] if config.snapshot_every else []
    last = make_state(y0, t0)
    reason = "max_time"
    if config.t_max <= t0:
        return rows, snaps, last, reason
    steps = 0
    if config.integrator == "rk45":
        def trial(t, y):
            # a failed stage evaluation makes the error estimate NaN, which
            # the adaptive controller treats as a rejected step
            try:
                return fun(t, y)
            except (FlowStopped, GeometryError):
                return np.full(y.shape, np.nan)
        solver = RK45(trial, t0, y0, config.t_max, rtol=config.rtol, atol=config.atol)
        step = solver.step
        get = lambda: (solver.t, solver.y)
    else:
        st = {"t": t0, "y": y0.copy()}

        def step():
            dt = min(config.dt, config.t_max - st["t"])
            st["y"] = st["y"] + dt * fun(st["t"], st["y"])
            st["t"] = st["t"] + dt
            if config.t_max - st["t"] < 1e-12 * config.dt:
                st["t"] = config.t_max
        get = lambda: (st["t"], st["y"])
    while True:
        try:
            msg = step()
        except (FlowStopped, GeometryError) as exc:
            reason = getattr(exc, "reason", str(exc))
            break
        if config.integrator == "rk45" and solver.status == "failed":
            # the adaptive step collapsing to rounding level is how a
            # curvature singularity shows up; anything else is an error
            reason = ("step_size_underflow" if "step size" in str(msg)
                      else f"integrator failed: {msg}")
            break
        t, y = get()
        if np.any(~np.isfinite(y)) or np.any(y <= 0):
            reason = "non-positive radius or spacing"
            break
        try:
            last = make_state(y.copy(), t)
            rows.append(summarize(last))
        except (FlowStopped, GeometryError) as exc:
            reason = getattr(exc, "reason", str(exc))
            break
        steps += 1
        if config.snapshot_every and steps % config.snapshot_every == 0:
            snaps.append(last)
        if stop_check(last):
            reason = "min_rho"
            break
        if t >= config.t_max:
            reason = "max_time"
            break
        if steps >= config.max_steps:
            reason = "max_steps"
            break
    return rows, snaps, last, reason


def _trajectory(rows, snaps, last, reason, has_waist, config):
    arr = lambda k: np.array([r[k] for r in rows])
    return FlowTrajectory(t=arr("t"), rho_min=arr("g"), max_K=arr("max_K"), min_a=arr("min_a"),
                          min_rho_index=arr("index"), has_waist=has_waist, reason=reason,
                          final=last, snapshots=snaps, config=config.to_dict())


def integrate(state0, config=None):
    """Integrate the lattice flow from ``state0``.

    Stops at ``t_max``, when the governing radius falls below
    ``min_rho_fraction`` of its initial value, at ``max_steps``, or when the
    geometry stops being realizable (the last good state is kept).
    """
    config = FlowConfig() if config is None else config
    if config.closure is not None:
        state0 = state0.replace(closure=config.closure)
    n = state0.n
    g0, _, has_waist = governing_radius(state0.rho)

    def make_state(y, t):
        return LatticeState(xi=state0.xi, rho=y[:n], a=y[n:], t=t, closure=state0.closure,
                            origin=state0.origin, cross_section=state0.cross_section)

    def fun(t, y):
        if np.any(y[:n] <= 0) or np.any(y[n:] <= 0):
            raise FlowStopped("non-positive radius or spacing", t)
        adot, rdot = velocities(make_state(y, t), config)
        return np.concatenate([rdot, adot])

    def summarize(s):
        g, k, _ = governing_radius(s.rho)
        return {"t": s.t, "g": g, "index": k + 1, "min_a": float(np.min(s.a)),
                "max_K": _max_sectional(s)}

    stop = lambda s: governing_radius(s.rho)[0] < config.min_rho_fraction * g0
    y0 = np.concatenate([np.asarray(state0.rho, dtype=float), np.asarray(state0.a, dtype=float)])
    rows, snaps, last, reason = _drive(fun, y0, state0.t, config, n, make_state, summarize, stop)
    return _trajectory(rows, snaps, last, reason, has_waist, config)
