"""One-dimensional global minimization used by the bound computations.

``golden_section`` handles convex objectives and returns a certified lower
bound from chord extrapolation. ``interval_minimize`` handles objectives of
the form f = inc + dec with inc nondecreasing and dec nonincreasing, where on
[a, b] the value is sandwiched between inc(a) + dec(b) and inc(b) + dec(a).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ToleranceNotReached

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class MinimizeResult:
    """Outcome of a bound computation.

    ``value`` is the best value found, ``value_error_bound`` a certified gap
    between it and the true infimum, ``minimizers`` the located minimizers
    (one per cluster) and ``attained`` whether the infimum is a minimum.
    """

    value: float
    value_error_bound: float
    minimizers: list = field(default_factory=list)
    attained: bool = True

    def to_json(self) -> dict:
        return {"value": self.value, "value_error_bound": self.value_error_bound,
                "minimizers": list(self.minimizers), "attained": self.attained}


def _convex_lower(a, fa, c, fc, d, fd, b, fb) -> float:
    """Lower bound for min of a convex f on [a, b] from four samples a < c < d < b."""
    def line(x0, f0, x1, f1, x):
        return f0 + (f1 - f0) / (x1 - x0) * (x - x0)

    # outside [c, d] the secant through c and d is a minorant
    lows = [min(line(c, fc, d, fd, a), fc), min(line(c, fc, d, fd, b), fd)]
    # on [c, d] both outer secants are minorants; the max of them is smallest at their crossing
    s1 = (fc - fa) / (c - a)
    s2 = (fb - fd) / (b - d)
    if s2 > s1:
        x = (fd - fc + s1 * c - s2 * d) / (s1 - s2)
        x = min(max(x, c), d)
    else:
        x = d if s1 < 0 else c
    lows.append(max(fc + s1 * (x - c), fd + s2 * (x - d)))
    return min(lows)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float,
                   width_rtol: float = 1e-12, max_iter: int = 400):
    """Minimize a convex ``f`` on [lo, hi].

    Returns (x_best, f_best, error_bound). The search runs until the bracket
    is narrower than ``width_rtol * (1 + hi - lo)`` and the certified gap is
    at most ``tol``; ToleranceNotReached is raised if that cannot be met.
    """
    if hi < lo:
        lo, hi = hi, lo
    f_lo, f_hi = f(lo), f(hi)
    if hi - lo == 0:
        return lo, f_lo, 0.0
    width_target = width_rtol * (1.0 + (hi - lo))
    a, b, fa, fb = lo, hi, f_lo, f_hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_f = min(((lo, f_lo), (hi, f_hi), (c, fc), (d, fd)), key=lambda p: p[1])
    err = math.inf
    for _ in range(max_iter):
        if fc <= fd:
            b, fb, d, fd = d, fd, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, fa, c, fc = c, fc, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
        if not (a < c < d < b):
            err = max(best_f - min(fa, fb, fc, fd), 0.0) if b - a <= width_target else err
            break
        if b - a <= width_target:
            err = max(best_f - _convex_lower(a, fa, c, fc, d, fd, b, fb), 0.0)
            if err <= tol:
                break
    if not err <= tol:
        raise ToleranceNotReached(
            "golden-section search stalled with error bound %.3g > tol %.3g" % (err, tol))
    return best_x, best_f, err


def interval_minimize(parts: Callable, lo: float, hi: float, tol: float,
                      n_init: int = 64, loc_rtol: float = 1e-10, gap_rtol: float = 1e-4,
                      max_level: int = 120, max_intervals: int = 400_000) -> MinimizeResult:
    """Branch-and-bound for f = inc + dec on [lo, hi].

    ``parts(points)`` maps an array of points to the pair of arrays
    (inc(points), dec(points)), inc nondecreasing and dec nonincreasing.
    Every unsettled survivor is bisected per round; intervals whose lower
    bound exceeds the best sample by more than ``tol`` are pruned. The
    search ends once the best sample is within ``tol`` of every remaining
    lower bound and each survivor is either tight (upper minus lower bound
    within ``tol``) or narrower than ``loc_rtol * (hi - lo)``. Survivors
    separated by gaps wider than ``gap_rtol * (hi - lo)`` form distinct
    minimizer clusters; each reports its best sampled point.
    """
    span = hi - lo
    if span <= 0:
        i0, d0 = parts(np.array([lo]))
        v = float(i0[0] + d0[0])
        return MinimizeResult(v, 0.0, [lo], True)
    loc_tol = loc_rtol * span
    edges = np.linspace(lo, hi, n_init + 1)
    ie, de = parts(edges)
    a, b = edges[:-1], edges[1:]
    ia, ib, da, db = ie[:-1], ie[1:], de[:-1], de[1:]
    fe = ie + de
    k = int(np.argmin(fe))
    best_x, best_f = float(edges[k]), float(fe[k])

    for _ in range(max_level):
        m = ia + db
        big_m = ib + da
        keep = m <= best_f + tol
        a, b, ia, ib, da, db = a[keep], b[keep], ia[keep], ib[keep], da[keep], db[keep]
        m, big_m = m[keep], big_m[keep]
        gap = best_f - float(m.min())
        settled = (big_m - m <= tol) | (b - a <= loc_tol)
        if gap <= tol and settled.all():
            return MinimizeResult(best_f, max(gap, 0.0),
                                  _clusters(a, b, ia + da, ib + db, best_f, tol, gap_rtol * span),
                                  True)
        if a.size * 2 > max_intervals:
            break
        # split every unsettled survivor; settled ones are kept as they are
        s = ~settled | (m < best_f - tol)
        mid = 0.5 * (a[s] + b[s])
        im, dm = parts(mid)
        fm = im + dm
        j = int(np.argmin(fm))
        if fm[j] < best_f:
            best_x, best_f = float(mid[j]), float(fm[j])
        a = np.concatenate([a[~s], a[s], mid])
        b = np.concatenate([b[~s], mid, b[s]])
        ia = np.concatenate([ia[~s], ia[s], im])
        ib = np.concatenate([ib[~s], im, ib[s]])
        da = np.concatenate([da[~s], da[s], dm])
        db = np.concatenate([db[~s], dm, db[s]])
    raise ToleranceNotReached(
        "interval search did not certify tol %.3g (best %.17g at %.17g)" % (tol, best_f, best_x))


def _clusters(a, b, fa, fb, best_f, tol, gap):
    order = np.argsort(a)
    a, b, fa, fb = a[order], b[order], fa[order], fb[order]
    out = []
    start = 0
    for i in range(1, a.size + 1):
        if i == a.size or a[i] - b[i - 1] > gap:
            xs = np.concatenate([a[start:i], b[start:i]])
            fs = np.concatenate([fa[start:i], fb[start:i]])
            k = int(np.argmin(fs))
            if fs[k] <= best_f + 2 * tol:
                out.append(float(xs[k]))
            start = i
    return out
