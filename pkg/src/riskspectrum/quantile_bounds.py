"""Quantile bounds as minima of a one-parameter family of majorants.

For p in (0, 1) and finite alpha > 0,

    B(t) = t + p^(-1/alpha) * (E (X - t)_+^alpha)^(1/alpha),

and the bound is the infimum of B over t. At alpha = inf the family is
B(t) = t * log(E exp(X/t) / p) for t > 0, extended by B(0+) = max support.
At alpha = 0 the bound is the largest (1-p)-quantile.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import DiscreteDist, Dist, PROB_EPS, check_alpha
from .errors import DomainError
from .optimize import MinimizeResult, golden_section, interval_minimize
from .tail_bounds import DEFAULT_TOL, tail_bound

T_GROWTH_CAP = 1e9
T_ATTAIN_FLOOR = 1e-12


@dataclass(frozen=True)
class QuantileQuery:
    p: float
    alpha: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        check_p(self.p)
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if not self.tol > 0:
            raise DomainError("tol must be positive")


def check_p(p: float) -> float:
    p = float(p)
    if not 0 < p < 1:
        raise DomainError("p must lie strictly inside (0, 1), got %r" % (p,))
    return p


def _b_finite(d: Dist, p: float, alpha: float, t):
    pm = np.asarray(d.partial_moment(t, alpha), dtype=float)
    return np.asarray(t, dtype=float) + p ** (-1.0 / alpha) * pm ** (1.0 / alpha)


def _b_exp(d: Dist, p: float, t: float) -> float:
    if t == 0:
        return d.x_star
    return t * (float(d.log_mgf(1.0 / t)) - math.log(p))


def b_curve(d: Dist, p: float, alpha, t: float) -> float:
    """The majorant B(t) whose infimum over t is the alpha-quantile bound."""
    alpha = check_alpha(alpha)
    if alpha == 0:
        raise DomainError("B is not defined at alpha = 0")
    p = check_p(p)
    if math.isinf(alpha):
        if not t > 0:
            raise DomainError("the exponential member needs t > 0")
        return _b_exp(d, p, float(t))
    return float(_b_finite(d, p, alpha, float(t)))


def quantile_q0(d: Dist, p: float) -> float:
    """inf{x : P(X >= x) < p}: the largest (1-p)-quantile."""
    return d.quantile_upper(check_p(p))


def default_p_tilde(p: float) -> float:
    return (1.0 + p) / 2.0 if p >= 0.1 else 2.0 * p


def bracket_t(d: Dist, p: float, alpha: float, s: float | None = None,
              p_tilde: float | None = None) -> tuple[float, float]:
    """(t_min, t_max) enclosing every minimizer of B for finite alpha > 0.

    t_max = B(s) for any s; the lower end combines the (1-p_tilde)-quantile
    t0 with the chord estimate ((p_tilde/p)^(1/alpha) t0 - t_max) /
    ((p_tilde/p)^(1/alpha) - 1).
    """
    alpha = check_alpha(alpha)
    if alpha == 0 or math.isinf(alpha):
        raise DomainError("bracketing needs finite alpha > 0")
    p = check_p(p)
    s = d.mean if s is None else float(s)
    p_tilde = default_p_tilde(p) if p_tilde is None else float(p_tilde)
    if not p < p_tilde < 1:
        raise DomainError("p_tilde must lie in (p, 1)")
    t_max = float(_b_finite(d, p, alpha, s))
    t0 = d.quantile_upper(p_tilde)
    r = (p_tilde / p) ** (1.0 / alpha)
    t1 = (r * t0 - t_max) / (r - 1.0)
    return min(t0, t1), t_max


def quantile_bound(d: Dist, p: float, alpha, tol: float = DEFAULT_TOL) -> MinimizeResult:
    """The alpha-quantile bound with certified value accuracy ``tol``.

    At alpha = 1 the minimizers form the interval between the smallest and
    the largest (1-p)-quantile, reported as its two endpoints.
    """
    q = QuantileQuery(p, alpha, tol)
    p, alpha = q.p, q.alpha
    if alpha == 0:
        v = d.quantile_upper(p)
        return MinimizeResult(v, 0.0, [v], True)
    if d.is_constant:
        return MinimizeResult(d.x_star, 0.0, [d.x_star] if not math.isinf(alpha) else [], True)
    if p <= d.p_star + PROB_EPS:
        if math.isinf(alpha):
            return MinimizeResult(d.x_star, 0.0, [], False)
        return MinimizeResult(d.x_star, 0.0, [d.x_star], True)
    if math.isinf(alpha):
        return _exp_member(d, p, tol)
    t_min, t_max = bracket_t(d, p, alpha)
    if alpha >= 1:
        t, value, err = golden_section(lambda v: float(_b_finite(d, p, alpha, v)),
                                       t_min, t_max, tol)
        if alpha == 1:
            lo_q, hi_q = d.quantile_lower(p), d.quantile_upper(p)
            return MinimizeResult(value, err, [lo_q] if lo_q == hi_q else [lo_q, hi_q], True)
        return MinimizeResult(value, err, [t], True)
    scale = p ** (-1.0 / alpha)
    inv = 1.0 / alpha

    def parts(t):
        return t, scale * np.power(np.atleast_1d(d.partial_moment(t, alpha)), inv)
    return interval_minimize(parts, t_min, t_max, tol)


def _exp_member(d: Dist, p: float, tol: float) -> MinimizeResult:
    def f(t):
        return _b_exp(d, p, t)

    t_hi = max(d.x_star - d.mean, 1.0)
    while f(2.0 * t_hi) <= f(t_hi) and t_hi < T_GROWTH_CAP:
        t_hi *= 2.0
    t, value, err = golden_section(f, 0.0, 2.0 * t_hi, tol)
    attained = t > T_ATTAIN_FLOOR
    return MinimizeResult(value, err, [t] if attained else [], attained)


def dual_check(d: Dist, p: float, alpha, tol: float = DEFAULT_TOL) -> float:
    """|P_alpha(X; Q_alpha(X; p)) - p|: how well the two bounds invert each other."""
    alpha = check_alpha(alpha)
    if alpha == 0:
        raise DomainError("the duality residual is defined for alpha > 0")
    p = check_p(p)
    if p <= d.p_star:
        raise DomainError("duality holds for p above the top atom mass")
    q = quantile_bound(d, p, alpha, tol).value
    return abs(tail_bound(d, q, alpha, tol).value - p)


def duality_map(x: float, alpha: float, lam: float) -> float:
    """t = x - alpha / lam: sends tail-bound minimizers to quantile-bound minimizers."""
    return x - alpha / lam


def is_discrete(d: Dist) -> bool:
    return isinstance(d, DiscreteDist)
