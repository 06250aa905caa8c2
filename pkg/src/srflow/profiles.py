"""Radial profiles rho(a) used as initial data.

``a`` is the proper axial distance from the equator.  Each profile provides
values and first and second derivatives so continuum rates can be evaluated
exactly at lattice levels.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = ["RadialProfile", "sphere", "angenent_knopf", "cylinder", "sampled", "ak_B"]


def ak_B(A):
    """Waist curvature constant making sqrt(A + B a^2) meet cos(a) at pi/4."""
    return 16.0 * (0.5 - A) / np.pi ** 2


@dataclass(frozen=True)
class RadialProfile:
    """A radial profile.

    kind: 'sphere', 'angenent_knopf', 'cylinder' or 'sampled'.
    ``domain`` is the closed interval of admissible positions; the profile is
    positive on its interior.  ``breakpoints`` lists positions where the
    profile is not smooth (piecewise definitions).
    """

    kind: str
    R0: float = 1.0
    A: float = 0.0
    B: float = 0.0
    table: tuple = field(default=None, repr=False)
    _spline: object = field(default=None, repr=False, compare=False)

    @property
    def domain(self):
        if self.kind == "sphere":
            h = np.pi * self.R0 / 2
            return (-h, h)
        if self.kind == "angenent_knopf":
            return (-np.pi / 2, np.pi / 2)
        if self.kind == "cylinder":
            return (-np.inf, np.inf)
        a = self.table[0]
        return (float(a[0]), float(a[-1]))

    @property
    def breakpoints(self):
        if self.kind == "angenent_knopf":
            return (-np.pi / 4, np.pi / 4)
        return ()

    def _check_domain(self, a):
        lo, hi = self.domain
        if np.any(a < lo) or np.any(a > hi):
            raise ValueError(f"position outside profile domain [{lo}, {hi}]")

    def derivatives(self, a):
        """(rho, rho', rho'') at positions ``a``."""
        a = np.asarray(a, dtype=float)
        self._check_domain(a)
        if self.kind == "sphere":
            R = self.R0
            return R * np.cos(a / R), -np.sin(a / R), -np.cos(a / R) / R
        if self.kind == "cylinder":
            one = np.ones_like(a)
            return self.R0 * one, 0 * one, 0 * one
        if self.kind == "angenent_knopf":
            R, A, B = self.R0, self.A, self.B
            inner = np.abs(a) < np.pi / 4
            c = np.cos(a)
            q = A + B * a * a
            sq = np.sqrt(np.where(inner, q, 1.0))
            r = np.where(inner, R * sq, R * c)
            r1 = np.where(inner, R * B * a / sq, -R * np.sin(a))
            r2 = np.where(inner, R * A * B / sq ** 3, -R * c)
            return r, r1, r2
        sp = self._spline
        return sp(a), sp(a, 1), sp(a, 2)

    def __call__(self, a):
        return self.derivatives(a)[0]

    def continuum_rates(self, a):
        """Continuum values of (2 rho''/rho, rho''/rho + (rho'/rho)^2 - 1/rho^2)."""
        r, r1, r2 = self.derivatives(a)
        return 2 * r2 / r, r2 / r + (r1 / r) ** 2 - 1 / r ** 2

    def to_config(self):
        out = {"kind": self.kind, "R0": self.R0}
        if self.kind == "angenent_knopf":
            out["A"] = self.A
        if self.kind == "sampled":
            out["table"] = [list(map(float, self.table[0])), list(map(float, self.table[1]))]
        return out

    @classmethod
    def from_config(cls, cfg):
        kind = cfg.get("kind")
        if kind == "sphere":
            return sphere(cfg.get("R0", 1.0))
        if kind == "angenent_knopf":
            return angenent_knopf(cfg.get("R0", 1.0), cfg.get("A", 0.1))
        if kind == "cylinder":
            return cylinder(cfg.get("R0", 1.0))
        if kind == "sampled":
            a, r = cfg["table"]
            return sampled(a, r)
        raise ValueError(f"unknown profile kind {kind!r}")


def sphere(R0=1.0):
    """Round sphere rho = R0 cos(a / R0)."""
    if R0 <= 0:
        raise ValueError("R0 must be positive")
    return RadialProfile("sphere", R0=float(R0))


def angenent_knopf(R0=1.0, A=0.1):
    """Dumbbell: R0 cos(a) on the lobes, R0 sqrt(A + B a^2) on the waist."""
    if R0 <= 0 or not 0 < A < 0.5:
        raise ValueError("need R0 > 0 and 0 < A < 1/2")
    return RadialProfile("angenent_knopf", R0=float(R0), A=float(A), B=ak_B(A))


def cylinder(R0=1.0):
    if R0 <= 0:
        raise ValueError("R0 must be positive")
    return RadialProfile("cylinder", R0=float(R0))


def sampled(a, rho):
    """Profile from samples, interpolated by a not-a-knot cubic spline (C^2)."""
    a = np.asarray(a, dtype=float)
    rho = np.asarray(rho, dtype=float)
    if a.ndim != 1 or a.shape != rho.shape or a.size < 4:
        raise ValueError("need matching 1-D sample arrays with at least 4 points")
    if np.any(np.diff(a) <= 0):
        raise ValueError("sample positions must increase")
    if np.any(rho[1:-1] <= 0):
        raise ValueError("profile must be positive on the interior")
    return RadialProfile("sampled", table=(a, rho), _spline=CubicSpline(a, rho))
