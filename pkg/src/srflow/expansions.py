"""Closed forms and small-xi expansions in their published form.

Each function takes the local stencil of radii and axial edges around level
``i``::

    rm, r, rp, rpp = rho_{i-1}, rho_i, rho_{i+1}, rho_{i+2}
    am, a, ap      = a_{i-1},   a_i,   a_{i+1}

Series functions return the truncated expansion; ``order`` selects how many
terms are kept (the leading power of xi, or that plus the next correction).
Where a published expression is known to be inconsistent, a corrected variant
sits next to it with a ``_corrected`` suffix; the published one is never
altered.
"""

import numpy as np

from . import _num

SQ3 = np.sqrt(3.0)


def _sq3(x):
    return _num.sqrt(3 * (x * 0 + 1)) if _num.is_mp(x) else SQ3


def _keep(order, lead, corr):
    return lead if order == 0 else lead * (1 + corr)


# -- level-i hinges on the cross-section ---------------------------------

def alpha_series(rm, r, rp, am, a, xi, order=2):
    lead = (am + a) / 2
    c = (a * (rm - r) * (rm + 3 * r) + am * (r - rp) * (rp + 3 * r)) / (6 * am * a * (am + a))
    return _keep(order, lead, c * xi ** 2)


def alpha_series_corrected(rm, r, rp, am, a, xi, order=2):
    """Same lead; the upper neighbour enters the xi^2 term as (rho_{i+1} - rho_i)."""
    lead = (am + a) / 2
    c = (a * (rm - r) * (rm + 3 * r) + am * (rp - r) * (rp + 3 * r)) / (6 * am * a * (am + a))
    return _keep(order, lead, c * xi ** 2)


def f_alpha_s_series(xi, order=4):
    x2 = xi * xi
    return (1 - x2 / 12 + (x2 * x2 / 16 if order >= 4 else 0)) / 3 if order else (xi * 0 + 1) / 3


def f_alpha_sbar_series(xi, order=4):
    x2 = xi * xi
    return (1 - x2 / 6 + (x2 * x2 / 8 if order >= 4 else 0)) / 3 if order else (xi * 0 + 1) / 3


def f_alpha_sbar_series_corrected(xi, order=4):
    """Complement of twice the s fraction, so the two always sum to one."""
    x2 = xi * xi
    return (1 + x2 / 6 - (x2 * x2 / 8 if order >= 4 else 0)) / 3 if order else (xi * 0 + 1) / 3


def eps_s_series(rm, r, rp, am, a, xi, order=2):
    lead = (a * (r - rm) + am * (r - rp)) / (_sq3(xi) * a * am) * xi
    c = (5 * a ** 2 * (rm - r) ** 2 + am ** 2 * (5 * (r - rp) ** 2 - 18 * a ** 2)
         + 5 * am * a * (rm - r) * (r - rp)) / (36 * a ** 2 * am ** 2)
    return _keep(order, lead, c * xi ** 2)


def _s_star_num(rm, r, rp, am, a, cubic):
    r3 = r ** 3 if cubic else r ** 2
    return (a * (rm - r) * (5 * rm ** 2 + 10 * rm * r + 13 * r ** 2) - 6 * am ** 2 * a * (rm + 3 * r)
            + am * (-13 * r3 + 3 * r ** 2 * rp + 5 * r * rp ** 2 + 5 * rp ** 3
                    - 6 * a ** 2 * (3 * r + rp)))


def s_star_series(rm, r, rp, am, a, ap, xi, order=2):
    """Published form; its correction denominator carries a_{i+1}."""
    q = am * (rm + 3 * r) + a * (3 * r + rp)
    lead = q / (8 * _sq3(xi)) * xi
    c = _s_star_num(rm, r, rp, am, a, cubic=False) / (12 * a * ap * q)
    return _keep(order, lead, c * xi ** 2)


def s_star_series_corrected(rm, r, rp, am, a, ap, xi, order=2):
    """Candidate repair: rho_i^3 for the lone rho_i^2 term and a_{i-1} in
    the denominator (both restore dimensional consistency)."""
    q = am * (rm + 3 * r) + a * (3 * r + rp)
    lead = q / (8 * _sq3(xi)) * xi
    c = _s_star_num(rm, r, rp, am, a, cubic=True) / (12 * a * am * q)
    return _keep(order, lead, c * xi ** 2)


def K_s_series(rm, r, rp, am, a, xi, order=0):
    lead = 8 * (a * (r - rm) - am * (rp - r)) / (a * am * (a * (3 * r + rp) + am * (3 * r + rm)))
    if order == 0:
        return lead + 0 * xi
    q = am * (rm + 3 * r) + a * (3 * r + rp)
    c = ((am * (r - rp) + a * (r - rm))
         * (5 * am ** 2 * (rm + 3 * r) * (r - rp)
            + 2 * am * a * (5 * rm ** 2 + 10 * rm * r + 12 * r ** 2 + 10 * r * rp + 5 * rp ** 2)
            - 5 * a ** 2 * (rm - r) * (3 * r + rp))) / (36 * am ** 2 * a ** 2 * q)
    return lead * (1 + c * xi ** 2)


def eps_sbar_series(rm, r, rp, am, a, xi, order=2):
    lead = (rm - rp) * xi / (_sq3(xi) * a)
    c = (10 * (rm ** 2 + 3 * r ** 2 - 3 * r * rp + rp ** 2 - 3 * rm * r + rm * rp)
         - 117 * a ** 2) / (72 * a)
    return _keep(order, lead, c * xi ** 2)


def sbar_star_series(rm, r, rp, am, a, xi, order=2):
    lead = (a * (3 * r + rp) + am * (3 * rp - r)) / (8 * _sq3(xi)) * xi
    num = (2 * r ** 3 * (5 * a - 13 * am)
           + rp * (2 * r ** 2 * (3 * am + 5 * a) - 3 * am * a * (3 * am + a))
           + 2 * r * rp ** 2 * (5 * am + 3 * a) - 3 * am * a * r * (am + 3 * a)
           + 2 * rp ** 3 * (5 * am - 13 * a))
    c = num / (24 * am * a * (am * (r + 3 * rp) + a * (3 * r + rp)))
    return _keep(order, lead, c * xi ** 2)


def K_sbar_series(rm, r, rp, am, a, xi, order=0):
    lead = 8 * (rm - rp) / (a * (am * (r + 3 * rp) + a * (3 * r + rp)))
    return lead + 0 * xi


# -- layer-i hinges along the axis ---------------------------------------

def sigma_series(r, rp, a, xi, order=2):
    lead = (r + rp) / (2 * _sq3(xi)) * xi
    c = (7 * (r - rp) ** 2 - 12 * a ** 2) / (24 * a ** 2)
    return _keep(order, lead, c * xi ** 2)


def f_sigma_s_series(r, rp, a, xi, order=2):
    lead = r / (2 * (r + rp))
    return _keep(order, lead, (rp - r) ** 2 / (4 * a ** 2) * xi ** 2)


def f_sigma_s_next_series(r, rp, a, xi, order=2):
    lead = rp / (2 * (r + rp))
    return _keep(order, lead, (r - rp) ** 2 / (4 * a ** 2) * xi ** 2)


def f_sigma_s_series_corrected(r, rp, a, xi, order=2):
    """Relative xi^2 term (s_{i+1}^2 - s_i^2) / 4a^2 from the closed-form fraction;
    keeps f_s + f_s+ + 2 f_a = 1 at this order."""
    lead = r / (2 * (r + rp))
    return _keep(order, lead, (rp * rp - r * r) / (4 * a ** 2) * xi ** 2)


def f_sigma_s_next_series_corrected(r, rp, a, xi, order=2):
    lead = rp / (2 * (r + rp))
    return _keep(order, lead, (r * r - rp * rp) / (4 * a ** 2) * xi ** 2)


def f_sigma_a_series(r, rp, a, xi, order=2):
    return _keep(order, 0 * xi + 0.25, (r - rp) ** 2 / (4 * a ** 2) * xi ** 2)


def eps_a_series(r, rp, a, xi, order=2):
    d2 = (rp - r) ** 2
    lead = _sq3(xi) * (a ** 2 - d2) / (2 * a ** 2) * xi ** 2
    c = -5 * (3 * a ** 4 - 4 * a ** 2 * d2 + d2 ** 2) / (24 * a ** 4 * (a ** 2 - d2))
    return _keep(order, lead, c * xi ** 2)


def a_star_series(r, rp, a, xi, order=2):
    lead = _sq3(xi) / 8 * (r + rp) ** 2 * xi ** 2
    c = -(2 * a ** 2 - 5 * (r - rp) ** 2) / (12 * a ** 2)
    return _keep(order, lead, c * xi ** 2)


def a_star_series_corrected(r, rp, a, xi, order=2):
    """xi^2 term from expanding the closed-form dual area: -5 (2a^2 - d^2) / 12a^2."""
    lead = _sq3(xi) / 8 * (r + rp) ** 2 * xi ** 2
    c = -5 * (2 * a ** 2 - (r - rp) ** 2) / (12 * a ** 2)
    return _keep(order, lead, c * xi ** 2)


def K_a_series(r, rp, a, xi, order=0):
    d2 = (rp - r) ** 2
    lead = 4 * (a ** 2 - d2) / (a ** 2 * (r + rp) ** 2)
    return _keep(order, lead + 0 * xi, 5 * (a ** 2 - d2) / (24 * a ** 2) * xi ** 2)


def eps_ahat_series(r, rp, a, xi, order=2):
    d2 = (rp - r) ** 2
    lead = _sq3(xi) * (a ** 2 - d2) / (2 * a ** 2) * xi ** 2
    c = -(51 * a ** 4 - 56 * a ** 2 * d2 + 5 * d2 ** 2) / (24 * a ** 4 * (a ** 2 - d2))
    return _keep(order, lead, c * xi ** 2)


def ahat_star_series(r, rp, a, xi, order=2):
    lead = _sq3(xi) / 8 * (r + rp) ** 2 * xi ** 2
    c = -(28 * a ** 2 - 5 * (rp - r) ** 2) / (12 * a ** 2)
    return _keep(order, lead, c * xi ** 2)


def K_ahat_series(r, rp, a, xi, order=0):
    d2 = (r - rp) ** 2
    lead = -4 * d2 / (a ** 2 * (r + rp) ** 2)
    return _keep(order, lead + 0 * xi, -5 * d2 / (24 * a ** 2) * xi ** 2)


def K_ahat_series_corrected(r, rp, a, xi, order=0):
    """Leading factor implied by the ratio of the deficit and dual-area
    expansions; equal to the a-hinge curvature at this order."""
    d2 = (r - rp) ** 2
    ea = eps_ahat_series(r, rp, a, xi, order=0) / xi ** 2
    aa = ahat_star_series(r, rp, a, xi, order=0) / xi ** 2
    lead = ea / aa
    if order == 0:
        return lead
    ce = -(51 * a ** 4 - 56 * a ** 2 * d2 + 5 * d2 ** 2) / (24 * a ** 4 * (a ** 2 - d2))
    ca = -(28 * a ** 2 - 5 * d2) / (12 * a ** 2)
    return lead * (1 + (ce - ca) * xi ** 2)


# -- published closed forms (cross-check targets) -------------------------

def eps_s_closed(s_prev, s, s_next, sbar_prev, sbar, am, a):
    """Deficit at hinge s_i built from two arccos terms as published."""
    pi = _num.pi_like(s)
    t1 = _num.arccos(sbar * (s - s_next) / (_num.sqrt(4 * s * s - sbar * sbar)
                                             * _num.sqrt(4 * a * a - (s - s_next) ** 2)))
    t2 = _num.arccos((sbar * (s + s_prev) - 2 * sbar_prev * s)
                     / (_num.sqrt(4 * s * s - sbar * sbar) * _num.sqrt(4 * am * am - (s - s_prev) ** 2)))
    return 2 * pi - 2 * t1 - 2 * t2


def eps_sbar_closed(s_prev, s, s_next, sbar_prev, sbar, sbar_next, u_prev, u, u_next, am, a):
    """Deficit at hinge sbar_i as published (all four terms use a_i)."""
    pi = _num.pi_like(s)

    def term(e, e_other, ratio_diff, sbd):
        return _num.arccos(ratio_diff * (2 * e * e - sbar * sbar)
                           / (e * _num.sqrt(4 * e * e - sbar * sbar) * _num.sqrt(4 * a * a - sbd ** 2)))

    return (2 * pi - term(s, None, s - s_next, sbar - sbar_next)
            - term(u, None, u - u_next, sbar - sbar_next)
            - term(s, None, -(s - s_prev), sbar - sbar_prev)
            - term(u, None, -(u - u_prev), sbar - sbar_prev))


def eps_a_closed(s, s_next, sbar, a):
    c = (2 * a * a * (sbar * sbar - 2 * s * s) + s * s * (s - s_next) ** 2) / (
        s * s * ((s - s_next) ** 2 - 4 * a * a))
    return 2 * _num.pi_like(s) - 6 * _num.arccos(c)


def eps_ahat_closed(s, s_next, sbar, u, u_next, ubar, up, a):
    d = s - s_next
    du = u - u_next
    c1 = sbar * (2 * a * a - d * d) / (_num.sqrt(4 * a * a - d * d) * _num.sqrt(4 * a * a * s * s - sbar * sbar * d * d))
    c2 = sbar * (2 * a * a - du * du) / (_num.sqrt(4 * a * a - du * du)
                                         * _num.sqrt(4 * a * a * u * u - sbar * sbar * du * du))
    c3 = (2 * a * a * (u * u - ubar * ubar + up * up) - up * up * du * du) / (
        _num.sqrt(4 * a * a - du * du) * _num.sqrt(4 * a * a * u * u * up * up - up ** 4 * du * du))
    return (2 * _num.pi_like(s) - 2 * _num.arccos(c1) - 2 * _num.arccos(c2) - 2 * _num.arccos(c3))


def sigma_closed(s, s_next, sbar, a):
    return a * a * sbar * (s + s_next) / (
        _num.sqrt(4 * a * a - (s - s_next) ** 2)
        * _num.sqrt(a * a * (4 * s * s - sbar * sbar) - s * s * (s - s_next) ** 2))


def a_star_closed(s, s_next, sbar, a):
    return 3 * a ** 3 * sbar * (s + s_next) ** 2 / (
        2 * (4 * a * a - (s - s_next) ** 2)
        * _num.sqrt(a * a * (4 * s * s - sbar * sbar) - s * s * (s - s_next) ** 2))


def alpha_closed(s_prev, s, s_next, sbar, am, a):
    """Sum of the two half dual edges as published.  The lower half uses
    a_i (the published indexing) rather than a_{i-1}."""
    area = sbar / 4 * _num.sqrt(4 * s * s - sbar * sbar)
    w = sbar * sbar * s * s
    lo = (8 * a * a * area ** 2 + w * s * (s_prev - s)) / (
        4 * area * _num.sqrt(16 * a * a * area ** 2 - w * (s - s_prev) ** 2))
    hi = (8 * a * a * area ** 2 + w * s * (s_next - s)) / (
        4 * area * _num.sqrt(16 * a * a * area ** 2 - w * (s - s_next) ** 2))
    return lo + hi


# -- zeroth-order rate equations -----------------------------------------

def zeroth_alpha_rhs(rm, r, rp, am, a):
    """Right side for (a'_{i-1} + a'_i)/(a_{i-1} + a_i) at level i."""
    num = 16 * (am * (r - rp) + a * (r - rm)) * (am * (rm + 5 * r + 6 * rp) + 3 * a * (3 * r + rp))
    den = (3 * am * a * (am * (r + 3 * rp) + a * (3 * r + rp))
           * (am * (rm + 3 * r) + a * (3 * r + rp)))
    return -num / den


def _zeroth_sigma_s_terms(rm, r, rp, rpp, am, a, ap):
    t1 = r * (am * (r - rp) + a * (r - rm)) / (am * (am * (rm + 3 * r) + a * (3 * r + rp)))
    t2 = rp * (a * (rp - rpp) + ap * (rp - r)) / (ap * (a * (r + 3 * rp) + ap * (3 * rp + rpp)))
    return -8 * (t1 + t2) / (a * (r + rp))


def zeroth_sigma_rhs(rm, r, rp, rpp, am, a, ap):
    """Right side for the layer-i sphere-edge equation as published."""
    d = r - rp
    s2 = (r + rp) ** 2
    return (2 * d * d / (a * a * s2) - 2 * (a + d) * (a - d) / (a * a * s2)
            + _zeroth_sigma_s_terms(rm, r, rp, rpp, am, a, ap))


def zeroth_sigma_rhs_corrected(rm, r, rp, rpp, am, a, ap):
    """Same with the ahat-hinge curvature equal to the a-hinge one, the
    form that reduces to the limit with a_{i+-1} -> a_i."""
    d = r - rp
    s2 = (r + rp) ** 2
    return (-4 * (a * a - d * d) / (a * a * s2)
            + _zeroth_sigma_s_terms(rm, r, rp, rpp, am, a, ap))


def alpha_limit_equal_spacing(rm, r, rp, a):
    """Axial equation after a_{i+-1} -> a_i."""
    return (4 * (rm - 2 * r + rp) * (rm + 14 * r + 9 * rp)
            / (3 * a * a * (r + rp) * (rm + 6 * r + rp)))


def sigma_limit_equal_spacing(rm, r, rp, rpp, a):
    t1 = -8 * r * (-rm + 2 * r - rp) / (a * a * (r + rp) * (rm + 6 * r + rp))
    t2 = -8 * rp * (-r + 2 * rp - rpp) / (a * a * (r + rp) * (r + 6 * rp + rpp))
    d = r - rp
    s2 = (r + rp) ** 2
    return t1 + t2 - 2 * (a * a - d * d) / (a * a * s2) - 2 * (a + d) * (a - d) / (a * a * s2)


def alpha_continuum_limit(rm, r, rp, a, with_rho=True):
    """One-sided difference form; ``with_rho=False`` is the published
    expression, which lacks the division by rho_i."""
    d2 = ((rp - r) / a - (r - rm) / a) / a
    return 2 * d2 / r if with_rho else 2 * d2


def sigma_continuum_limit(rm, r, rp, a, with_a=True):
    """One-sided difference form; ``with_a=False`` is the published
    expression, whose curvature term lacks one division by a_i."""
    d1 = (rp - r) / a
    diff = d1 - (r - rm) / a
    d2 = diff / a if with_a else diff
    return d2 / r + d1 * d1 / (r * r) - 1 / (r * r)
