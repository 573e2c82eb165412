"""Upper bounds on tail probabilities from generalized moment functions.

For a threshold x the bound is the infimum over lam >= 0 of
E h(lam (X - x)) where h(u) = (1 + u/alpha)_+^alpha, with h the step
1{u >= 0} at alpha = 0 and exp(u) at alpha = inf.
"""
from __future__ import annotations

import math

import numpy as np

from . import quadrature
from .dist import ContinuousTail, DiscreteDist, Dist, check_alpha
from .errors import DomainError, InvalidRegion
from .optimize import MinimizeResult, golden_section, interval_minimize

DEFAULT_TOL = 1e-9


def _h(u: np.ndarray, alpha: float) -> np.ndarray:
    if math.isinf(alpha):
        return np.exp(u)
    z = 1.0 + u / alpha
    out = np.zeros_like(z)
    pos = z > 0
    out[pos] = np.exp(alpha * np.log1p(u[pos] / alpha))
    return out


def _discrete_split(d: DiscreteDist, x: float, alpha: float, lam: np.ndarray):
    """(A+, A-) over an array of lam: contributions of atoms >= x and < x."""
    u = lam[:, None] * (d.values[None, :] - x)
    w = _h(u, alpha) * d.probs[None, :]
    upper = d.values >= x
    return w[:, upper].sum(axis=1), w[:, ~upper].sum(axis=1)


def _continuous_split(d: ContinuousTail, x: float, alpha: float, lam: float):
    """(A+, A-) at a single lam for a tail-specified law.

    With g(z) = h(lam (z - x)) increasing, E[g(X); X >= x0] equals
    g(x0) q(x0) + int_{g(x0)}^{g(U)} q(g^-1(w)) dw, and the part below x is
    handled the same way; the change of variables w = g(z) removes the
    endpoint singularity of g' for alpha < 1.
    """
    lo, hi = d.lower_cut, d.upper_cut
    q = d.tail
    if lam == 0:
        return q(x), 1.0 - q(x)
    if math.isinf(alpha):
        def g(z):
            return math.exp(lam * (z - x))

        def g_inv(w):
            return x + np.log(w) / lam
        z_zero = -math.inf
    else:
        def g(z):
            base = 1.0 + lam * (z - x) / alpha
            return base ** alpha if base > 0 else 0.0

        def g_inv(w):
            return x + (alpha / lam) * (np.power(w, 1.0 / alpha) - 1.0)
        z_zero = x - alpha / lam

    def jumps(a, b):
        # tail jumps mapped into the w variable, so they land on panel edges
        return [g(z) for z in d.breakpoints if a < z < b]

    x0 = max(x, lo)
    if x0 >= hi:
        upper = 0.0
    else:
        upper = g(x0) * q(x0) + quadrature.integrate(lambda w: q(g_inv(w)), g(x0), g(hi),
                                                     jumps(x0, hi))
    if x <= lo:
        return upper, 0.0
    q_x = q(x)
    start = max(lo, z_zero)
    lower = g(lo) * (1.0 - q_x)
    if start < x:
        lower += quadrature.integrate(lambda w: q(g_inv(w)) - q_x, g(start), 1.0,
                                      jumps(start, x))
    return upper, max(lower, 0.0)


def moment_split(d: Dist, x: float, alpha: float, lam):
    """Vectorized (A+, A-) with A+ nondecreasing and A- nonincreasing in lam."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if isinstance(d, DiscreteDist):
        return _discrete_split(d, x, alpha, lam)
    pairs = [_continuous_split(d, x, alpha, float(v)) for v in lam]
    return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])


def moment_curve(d: Dist, x: float, alpha, lam: float) -> float:
    """E h(lam (X - x)) for the spectrum member ``alpha``."""
    alpha = check_alpha(alpha)
    if lam < 0:
        raise DomainError("lambda must be nonnegative")
    if alpha == 0 or lam == 0:
        return float(d.tail(x)) if alpha == 0 else 1.0
    if isinstance(d, DiscreteDist):
        if math.isinf(alpha):
            return math.exp(float(d.log_mgf(lam)) - lam * x)
        return float(_h(lam * (d.values - x), alpha) @ d.probs)
    up, down = _continuous_split(d, x, alpha, float(lam))
    return up + down


def _y_point(d: Dist, x: float) -> float:
    if isinstance(d, DiscreteDist):
        return d.x_star
    y = 0.5 * (x + d.upper_cut) if x >= d.lower_cut else 0.5 * (d.lower_cut + d.upper_cut)
    while d.tail(y) <= 0:
        y = 0.5 * (x + y)
    return y


def lambda_max(d: Dist, x: float, alpha) -> float:
    """Right end of a lam-range that contains every minimizer.

    Beyond it the moment function exceeds 1, which the bound never does.
    """
    alpha = check_alpha(alpha)
    if alpha == 0:
        raise DomainError("no lambda search is needed for alpha = 0")
    if d.is_constant or x >= d.x_star:
        raise InvalidRegion("need x below the top of the support")
    y = _y_point(d, x)
    tail_y = float(d.tail(y))
    if math.isinf(alpha):
        return math.log(1.0 / tail_y) / (y - x)
    return alpha / (y - x) * (tail_y ** (-1.0 / alpha) - 1.0)


def tail_bound(d: Dist, x: float, alpha, tol: float = DEFAULT_TOL) -> MinimizeResult:
    """Infimum over lam >= 0 of ``moment_curve`` with certified accuracy ``tol``."""
    alpha = check_alpha(alpha)
    if not tol > 0:
        raise DomainError("tol must be positive")
    x = float(x)
    if alpha == 0:
        return MinimizeResult(float(d.tail(x)), 0.0, [0.0], True)
    if x <= d.lower:
        # X >= x almost surely, so every moment is at least h(0) = 1
        return MinimizeResult(1.0, 0.0, [0.0], True)
    if x >= d.x_star:
        return _beyond_top(d, x, alpha)
    lam_hi = lambda_max(d, x, alpha)
    if alpha >= 1:
        lam, value, err = golden_section(lambda v: moment_curve(d, x, alpha, v), 0.0, lam_hi, tol)
        return MinimizeResult(value, err, [lam], True)
    return interval_minimize(lambda v: moment_split(d, x, alpha, v), 0.0, lam_hi, tol)


def _beyond_top(d: Dist, x: float, alpha: float) -> MinimizeResult:
    at_top = x == d.x_star and d.p_star > 0
    value = d.p_star if at_top else 0.0
    if math.isinf(alpha):
        return MinimizeResult(value, 0.0, [], False)
    # the smallest lam killing every atom below x
    below = d.x_star2 if at_top else d.x_star
    if at_top and math.isinf(below):
        return MinimizeResult(1.0, 0.0, [0.0], True)
    if below >= x:
        # continuous law at its cut: the bound tends to 0 without reaching it
        return MinimizeResult(value, 0.0, [], False)
    return MinimizeResult(value, 0.0, [alpha / (x - below)], True)


def x_alpha(d: Dist, alpha, tol: float = 1e-12) -> float:
    """Left end of the range where the alpha-bound drops below 1.

    For alpha >= 1 this is the mean, for alpha = 0 the bottom of the support.
    For alpha in (0, 1) it equals inf over t of t + ||(X - t)_+||_alpha,
    which is found on [min support, max support] by interval search.
    """
    alpha = check_alpha(alpha)
    if alpha >= 1:
        return d.mean
    if alpha == 0 or d.is_constant:
        return d.lower
    inv = 1.0 / alpha

    def parts(t):
        return t, np.power(np.atleast_1d(d.partial_moment(t, alpha)), inv)

    res = interval_minimize(parts, d.lower, d.x_star, tol)
    return res.value
