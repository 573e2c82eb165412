"""Gini-type mean-risk measures, stochastic orders, Lorenz curves and a
finite falsification harness for the coherence axioms."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .dist import DiscreteDist, Dist, JointDiscreteDist
from .errors import InputError, NegativeSupport
from .lower_quantile import cvar
from .quantile_bounds import check_p

ORDER_TOL = 1e-12


@dataclass(frozen=True)
class LipschitzFn:
    """A function H on [0, inf) with a declared Lipschitz constant.

    ``is_linear_kappa`` marks H = kappa * id; construction then checks the
    claim on sample points.
    """

    eval: Callable
    declared_lipschitz: float
    is_linear_kappa: Optional[float] = None

    def __post_init__(self):
        if self.declared_lipschitz < 0:
            raise InputError("Lipschitz constant must be nonnegative")
        if self.is_linear_kappa is not None:
            u = np.linspace(0.0, 10.0, 41)
            if np.max(np.abs(self(u) - self.is_linear_kappa * u)) > 1e-12:
                raise InputError("H does not match kappa * id")

    def __call__(self, u):
        return np.asarray(self.eval(np.asarray(u, dtype=float)), dtype=float)

    @classmethod
    def linear(cls, kappa: float) -> "LipschitzFn":
        return cls(lambda u: kappa * u, abs(kappa), kappa)


def gini_mean_diff(d: DiscreteDist, H: LipschitzFn) -> float:
    """E H(|X - X'|) with X' an independent copy of X (exact double sum)."""
    gaps = np.abs(d.values[:, None] - d.values[None, :])
    return float(d.probs @ H(gaps) @ d.probs)


def mean_risk(d: DiscreteDist, H: LipschitzFn) -> float:
    return d.mean + gini_mean_diff(d, H)


def _union(d1: DiscreteDist, d2: DiscreteDist) -> np.ndarray:
    return np.union1d(d1.values, d2.values)


def dominance_st(d1: DiscreteDist, d2: DiscreteDist) -> bool:
    """First-order stochastic dominance d1 <= d2: every tail of d1 is below that of d2.

    Both tails are left-continuous steps that only move at support points,
    so comparing there is exact.
    """
    pts = _union(d1, d2)
    return bool(np.all(d1.tail(pts) <= d2.tail(pts) + ORDER_TOL))


def dominance_order2(d1: DiscreteDist, d2: DiscreteDist) -> bool:
    """Stop-loss order: E (X - t)_+ <= E (Y - t)_+ for all t.

    The difference of the two stop-loss transforms is piecewise linear with
    kinks at the union of the supports, and linear with slope 0 above and
    with equal slopes below it, so checking at the kinks is exact; midpoints
    are added as a guard.
    """
    pts = _union(d1, d2)
    pts = np.concatenate([pts, 0.5 * (pts[1:] + pts[:-1])])
    return bool(np.all(d1.partial_moment(pts, 1.0) <= d2.partial_moment(pts, 1.0) + ORDER_TOL))


def dominance_alpha(d1: Dist, d2: Dist, alpha: float, t_grid: Sequence[float]) -> bool:
    """E (X - t)_+^alpha <= E (Y - t)_+^alpha on the given grid.

    A necessary condition only: passing on a finite grid does not prove the
    order for all t.
    """
    t = np.asarray(t_grid, dtype=float)
    return bool(np.all(np.asarray(d1.partial_moment(t, alpha))
                       <= np.asarray(d2.partial_moment(t, alpha)) + ORDER_TOL))


def deviation_measure(risk: Callable[[DiscreteDist], float], d: DiscreteDist) -> float:
    """The risk functional applied to X - E X."""
    return float(risk(d.centered()))


def lorenz(d: DiscreteDist, p: float) -> float:
    """Integral over [0, p] of the left-continuous quantile function."""
    if d.lower < 0:
        raise NegativeSupport("the Lorenz curve needs nonnegative support")
    p = check_p(p)
    cum = np.cumsum(d.probs)
    below = np.concatenate([[0.0], cum[:-1]])
    weights = np.clip(np.minimum(cum, p) - below, 0.0, None)
    return float(weights @ d.values)


def lorenz_identity_residual(d: DiscreteDist, p: float) -> float:
    """|L(p) + p * CVaR_p(-X)|, zero up to rounding."""
    return abs(lorenz(d, p) + p * cvar(d.negate(), p))


# ---------------------------------------------------------------------------
# coherence harness

@dataclass
class CoherenceSuite:
    """Cases for the harness: single laws, st-ordered pairs and dependent pairs."""

    singles: list = field(default_factory=list)
    st_pairs: list = field(default_factory=list)
    joints: list = field(default_factory=list)
    shifts: tuple = (-2.5, 0.7, 3.0)
    factors: tuple = (0.5, 2.0, 3.7)


def build_suite(rng: np.random.Generator, n_cases: int = 200) -> CoherenceSuite:
    from .generators import coupled_pair, random_discrete, random_joint
    suite = CoherenceSuite()
    for _ in range(n_cases):
        suite.singles.append(random_discrete(rng))
        suite.st_pairs.append(coupled_pair(rng))
        suite.joints.append(random_joint(rng))
    return suite


def gini_witness_pair(p: float, x: float, y: float) -> tuple[DiscreteDist, DiscreteDist]:
    """X = -y and Y = -x with probability p, 0 otherwise (0 <= x < y), so X <= Y in law.

    With H = kappa * id the mean-risk gap is p (y - x)(2 kappa (1 - p) - 1),
    positive (a monotonicity violation) once kappa > 1 / (2 (1 - p)).
    """
    def two_point(v):
        if v == 0:
            return DiscreteDist.point(0.0)
        return DiscreteDist.from_atoms([-v, 0.0], [p, 1.0 - p])
    return two_point(y), two_point(x)


def _axiom(name: str, worst: float, witness: dict, tol: float) -> dict:
    return {"axiom": name, "pass": bool(worst <= tol), "worst_violation": float(worst),
            "witness": witness}


def coherence_harness(risk: Callable[[DiscreteDist], float], suite: CoherenceSuite,
                      tol: float = 1e-9) -> list[dict]:
    """Check translation invariance, positive homogeneity, monotonicity and
    subadditivity of ``risk`` on the suite; report the worst violation of each."""
    report = []

    worst, wit = 0.0, {}
    for i, d in enumerate(suite.singles):
        base = risk(d)
        for c in suite.shifts:
            gap = abs(risk(d.shift(c)) - base - c)
            if gap > worst:
                worst, wit = gap, {"case": i, "shift": c}
    report.append(_axiom("translation_invariance", worst, wit, tol))

    worst, wit = 0.0, {}
    for i, d in enumerate(suite.singles):
        base = risk(d)
        for k in suite.factors:
            gap = abs(risk(d.scale(k)) - k * base)
            if gap > worst:
                worst, wit = gap, {"case": i, "factor": k}
    report.append(_axiom("positive_homogeneity", worst, wit, tol))

    worst, wit = 0.0, {}
    for i, (lo, hi) in enumerate(suite.st_pairs):
        gap = risk(lo) - risk(hi)
        if gap > worst:
            worst, wit = gap, {"case": i, "smaller": lo.to_json(), "larger": hi.to_json()}
    report.append(_axiom("monotonicity", worst, wit, tol))

    worst, wit = 0.0, {}
    for i, j in enumerate(suite.joints):
        if isinstance(j, JointDiscreteDist):
            xd, yd = j.marginals()
            total = j.sum_dist()
        else:
            xd, yd, total = j
        gap = risk(total) - risk(xd) - risk(yd)
        if gap > worst:
            worst, wit = gap, {"case": i}
    report.append(_axiom("subadditivity", worst, wit, tol))
    return report


def all_pass(report: list[dict]) -> bool:
    return all(r["pass"] for r in report)


def axiom(report: list[dict], name: str) -> dict:
    return next(r for r in report if r["axiom"] == name)

