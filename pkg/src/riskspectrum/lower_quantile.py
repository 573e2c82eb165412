"""Minimizer of the quantile majorant for alpha >= 1, and related closed forms."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dist import Dist, PROB_EPS, check_alpha
from .errors import DomainError, ToleranceNotReached
from .optimize import golden_section, interval_minimize
from .quantile_bounds import _b_exp, _b_finite, bracket_t, check_p
from .tail_bounds import DEFAULT_TOL


class Branch(enum.Enum):
    ATOM_TOP = "AtomTop"
    ROOT = "Root"
    QUANTILE = "Quantile"


@dataclass(frozen=True)
class LowerQuantileResult:
    t_opt: float
    q_value: float
    branch: Branch


def pl_curve(d: Dist, t: float, alpha: float) -> float:
    """(E (X-t)_+^(alpha-1))^alpha / (E (X-t)_+^alpha)^(alpha-1), alpha > 1.

    B'(t) = 1 - (pl_curve(t) / p)^(1/alpha), so the majorant is minimized
    where this ratio crosses p.
    """
    alpha = float(alpha)
    if not 1 < alpha < math.inf:
        raise DomainError("pl_curve needs finite alpha > 1")
    if t >= d.x_star:
        raise DomainError("pl_curve needs t below the top of the support")
    lower = d.partial_moment(t, alpha - 1.0)
    upper = d.partial_moment(t, alpha)
    return math.exp(alpha * math.log(lower) - (alpha - 1.0) * math.log(upper))


def lower_quantile(d: Dist, p: float, alpha: float, xtol: float = 1e-13) -> LowerQuantileResult:
    """Largest minimizer t of B over t, together with B at that point."""
    alpha = check_alpha(alpha)
    p = check_p(p)
    if alpha < 1 or math.isinf(alpha):
        raise DomainError("lower_quantile needs 1 <= alpha < inf")
    if alpha == 1:
        t = d.quantile_upper(p)
        return LowerQuantileResult(t, cvar(d, p), Branch.QUANTILE)
    if d.is_constant or p <= d.p_star + PROB_EPS:
        return LowerQuantileResult(d.x_star, d.x_star, Branch.ATOM_TOP)
    # the root lies below the largest (1-p)-quantile, itself at most x_**
    hi = d.quantile_upper(p)

    def excess(t):
        return pl_curve(d, t, alpha) - p

    offset = 1.0
    lo = d.lower - offset
    while excess(lo) <= 0:
        offset *= 2.0
        lo = d.lower - offset
        if offset > 1e12:
            raise ToleranceNotReached("could not bracket the lower quantile from below")
    if excess(hi) >= 0:
        t = hi
    else:
        t = brentq(excess, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
    return LowerQuantileResult(t, float(_b_finite(d, p, alpha, t)), Branch.ROOT)


def cvar(d: Dist, p: float) -> float:
    """Q0 + E (X - Q0)_+ / p with Q0 the largest (1-p)-quantile."""
    p = check_p(p)
    q0 = d.quantile_upper(p)
    return q0 + float(d.partial_moment(q0, 1.0)) / p


def q_hat(d: Dist, p: float, alpha: float) -> float:
    """B evaluated at the mean: a closed-form majorant of the bound."""
    alpha = check_alpha(alpha)
    if not 0 < alpha < math.inf:
        raise DomainError("q_hat needs finite alpha > 0")
    return float(_b_finite(d, check_p(p), alpha, d.mean))


def q_hat_less(d: Dist, p: float, alpha, tol: float = DEFAULT_TOL) -> float:
    """Infimum of B over t no larger than the mean (t in (0, mean] at alpha = inf)."""
    alpha = check_alpha(alpha)
    p = check_p(p)
    if alpha == 0:
        raise DomainError("q_hat_less needs alpha > 0")
    mean = d.mean
    if d.is_constant:
        return d.x_star
    if math.isinf(alpha):
        if mean <= 0:
            raise DomainError("at alpha = inf the search range (0, mean] is empty")
        return golden_section(lambda t: _b_exp(d, p, t), 0.0, mean, tol)[1]
    t_min, _ = bracket_t(d, p, alpha)
    lo = min(t_min, d.lower)
    if alpha >= 1:
        return golden_section(lambda t: float(_b_finite(d, p, alpha, t)), lo, mean, tol)[1]
    scale = p ** (-1.0 / alpha)

    def parts(t):
        return t, scale * np.power(np.atleast_1d(d.partial_moment(t, alpha)), 1.0 / alpha)
    return interval_minimize(parts, lo, mean, tol).value
