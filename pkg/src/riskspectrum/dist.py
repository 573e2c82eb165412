"""Distribution representations and the primitive functionals built on them.

Two kinds of random variable are supported:

* :class:`DiscreteDist` -- finite support, every functional is an exact sum.
* :class:`ContinuousTail` -- given by its tail function ``q(x) = P(X >= x)``
  on ``[lower_cut, upper_cut]`` and treated as truncated at ``upper_cut``;
  moments come from an analytic formula when supplied, otherwise from
  adaptive quadrature of the tail (Fubini).

The spectrum parameter alpha is a plain float in ``[0, inf]``; ``math.inf``
stands for the exponential end of the spectrum.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np
from scipy import special, stats

from . import quadrature
from .errors import DomainError, InputError, NumericOverflow

PROB_TOL = 1e-12     # allowed |sum(probs) - 1|
MERGE_TOL = 1e-12    # atoms closer than this are merged
TAIL_FLOOR = 1e-15   # tail value at which a continuous law is truncated
PROB_EPS = 1e-14     # slack when comparing accumulated probabilities


def check_alpha(alpha) -> float:
    """Validate a spectrum parameter and return it as a float (inf allowed)."""
    a = float(alpha)
    if math.isnan(a) or a < 0:
        raise DomainError("alpha must lie in [0, inf], got %r" % (alpha,))
    return a


def parse_alpha(token) -> float:
    """Parse an alpha token: a decimal literal, ``0`` or ``inf``."""
    if isinstance(token, (int, float)):
        return check_alpha(token)
    text = str(token).strip().lower()
    if text in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise InputError("bad alpha token %r" % (token,)) from None
    if math.isinf(value):
        return math.inf
    return check_alpha(value)


@dataclass(frozen=True, eq=False)
class DiscreteDist:
    """A finitely supported distribution.

    ``values`` are strictly increasing and ``probs`` strictly positive with
    total mass 1 (to within ``PROB_TOL``). Use :meth:`from_atoms` to build one
    from unsorted or repeated values.
    """

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        probs = np.array(self.probs, dtype=float).ravel()
        if values.size == 0 or values.size != probs.size:
            raise InputError("values and probs must be nonempty and of equal length")
        if not np.all(np.isfinite(values)):
            raise InputError("support points must be finite")
        if values.size > 1 and not np.all(np.diff(values) > 0):
            raise InputError("values must be strictly increasing")
        if not np.all(probs > 0):
            raise InputError("probabilities must be strictly positive")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise InputError("probabilities sum to %.17g, not 1" % probs.sum())
        values.flags.writeable = False
        probs.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_atoms(cls, values, probs, normalize: bool = False) -> "DiscreteDist":
        """Sort atoms, merge values closer than ``MERGE_TOL`` and drop null masses."""
        values = np.asarray(values, dtype=float).ravel()
        probs = np.asarray(probs, dtype=float).ravel()
        if values.size != probs.size or values.size == 0:
            raise InputError("values and probs must be nonempty and of equal length")
        if np.any(probs < 0):
            raise InputError("probabilities must be nonnegative")
        order = np.argsort(values, kind="stable")
        values, probs = values[order], probs[order]
        # start a new group whenever the gap to the previous value exceeds the tolerance
        starts = np.concatenate([[True], np.diff(values) > MERGE_TOL])
        group = np.cumsum(starts) - 1
        merged_p = np.bincount(group, weights=probs)
        merged_x = values[starts]
        keep = merged_p > 0
        merged_x, merged_p = merged_x[keep], merged_p[keep]
        if normalize:
            merged_p = merged_p / merged_p.sum()
        return cls(merged_x, merged_p)

    @classmethod
    def point(cls, c: float) -> "DiscreteDist":
        return cls(np.array([float(c)]), np.array([1.0]))

    # support statistics -------------------------------------------------
    @property
    def x_star(self) -> float:
        return float(self.values[-1])

    @property
    def p_star(self) -> float:
        return float(self.probs[-1])

    @property
    def x_star2(self) -> float:
        return float(self.values[-2]) if self.values.size > 1 else -math.inf

    @property
    def lower(self) -> float:
        return float(self.values[0])

    @property
    def is_constant(self) -> bool:
        return self.values.size == 1

    @cached_property
    def mean(self) -> float:
        return float(math.fsum(self.values * self.probs))

    @cached_property
    def _suffix(self) -> np.ndarray:
        # P(X >= values[k])
        return np.cumsum(self.probs[::-1])[::-1]

    # functionals --------------------------------------------------------
    def tail(self, x):
        """P(X >= x), vectorized over ``x``."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.values, x, side="left")
        ext = np.concatenate([self._suffix, [0.0]])
        out = ext[idx]
        return float(out) if out.ndim == 0 else out

    def tail_strict(self, x):
        """P(X > x), vectorized over ``x``."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.values, x, side="right")
        ext = np.concatenate([self._suffix, [0.0]])
        out = ext[idx]
        return float(out) if out.ndim == 0 else out

    def partial_moment(self, t, alpha: float):
        """E (X - t)_+^alpha, vectorized over ``t``; alpha = 0 gives P(X > t)."""
        alpha = float(alpha)
        t_arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t_arr).ravel()
        out = np.empty(flat.size)
        # chunking keeps the (len(t), len(values)) work array small
        step = max(1, 4_000_000 // self.values.size)
        for i in range(0, flat.size, step):
            excess = np.clip(self.values[None, :] - flat[i:i + step, None], 0.0, None)
            if alpha == 0:
                powered = (excess > 0).astype(float)
            elif alpha == 1:
                powered = excess
            else:
                powered = excess ** alpha
            out[i:i + step] = powered @ self.probs
        return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)

    def log_mgf(self, lam):
        """log E exp(lam X), vectorized over ``lam``."""
        lam_arr = np.asarray(lam, dtype=float)
        flat = np.atleast_1d(lam_arr).ravel()
        out = special.logsumexp(flat[:, None] * self.values[None, :], axis=1,
                                b=self.probs[None, :])
        return float(out[0]) if lam_arr.ndim == 0 else out.reshape(lam_arr.shape)

    def quantile_upper(self, p: float) -> float:
        """inf{x : P(X >= x) < p}, the largest (1-p)-quantile."""
        k = np.nonzero(self._suffix >= p - PROB_EPS)[0]
        return float(self.values[k[-1]])

    def quantile_lower(self, p: float) -> float:
        """inf{x : P(X > x) <= p}, the smallest (1-p)-quantile."""
        strict = np.concatenate([self._suffix[1:], [0.0]])
        k = np.nonzero(strict <= p + PROB_EPS)[0]
        return float(self.values[k[0]])

    # transformations ----------------------------------------------------
    def shift(self, c: float) -> "DiscreteDist":
        return DiscreteDist.from_atoms(self.values + c, self.probs)

    def scale(self, k: float) -> "DiscreteDist":
        if k < 0:
            raise DomainError("scale factor must be nonnegative")
        if k == 0:
            return DiscreteDist.point(0.0)
        return DiscreteDist.from_atoms(self.values * k, self.probs)

    def negate(self) -> "DiscreteDist":
        return DiscreteDist(-self.values[::-1], self.probs[::-1].copy())

    def centered(self) -> "DiscreteDist":
        return self.shift(-self.mean)

    def same_as(self, other: "DiscreteDist", tol: float = 1e-12) -> bool:
        return (self.values.size == other.values.size
                and np.allclose(self.values, other.values, rtol=0, atol=tol)
                and np.allclose(self.probs, other.probs, rtol=0, atol=tol))

    def to_json(self) -> dict:
        return {"type": "discrete", "values": self.values.tolist(),
                "probs": self.probs.tolist()}

    def __repr__(self):
        return "DiscreteDist(values=%s, probs=%s)" % (self.values.tolist(), self.probs.tolist())


@dataclass(frozen=True, eq=False)
class JointDiscreteDist:
    """Finitely many (x, y, p) atoms describing a dependent pair (X, Y)."""

    atoms: np.ndarray

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=float)
        if atoms.ndim != 2 or atoms.shape[1] != 3 or atoms.shape[0] == 0:
            raise InputError("joint atoms must be a nonempty list of [x, y, p] triples")
        if not np.all(np.isfinite(atoms)):
            raise InputError("joint atoms must be finite")
        if np.any(atoms[:, 2] <= 0):
            raise InputError("joint probabilities must be strictly positive")
        if abs(atoms[:, 2].sum() - 1.0) > PROB_TOL:
            raise InputError("joint probabilities sum to %.17g, not 1" % atoms[:, 2].sum())
        atoms.flags.writeable = False
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def independent(cls, d1: DiscreteDist, d2: DiscreteDist) -> "JointDiscreteDist":
        xs, ys = np.meshgrid(d1.values, d2.values, indexing="ij")
        ps = np.outer(d1.probs, d2.probs)
        return cls(np.column_stack([xs.ravel(), ys.ravel(), ps.ravel()]))

    @property
    def x(self) -> np.ndarray:
        return self.atoms[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.atoms[:, 1]

    @property
    def p(self) -> np.ndarray:
        return self.atoms[:, 2]

    def marginals(self) -> tuple[DiscreteDist, DiscreteDist]:
        return (DiscreteDist.from_atoms(self.x, self.p, normalize=True),
                DiscreteDist.from_atoms(self.y, self.p, normalize=True))

    def sum_dist(self) -> DiscreteDist:
        return DiscreteDist.from_atoms(self.x + self.y, self.p, normalize=True)

    def to_json(self) -> dict:
        return {"type": "joint", "atoms": self.atoms.tolist()}


def _fubini_integral(tail, t, alpha, lo, hi, breakpoints=()):
    """E (X - t)_+^alpha restricted to [lo, hi] via  int alpha (z-t)^(alpha-1) q(z) dz.

    For alpha < 1 the substitution u = (z - t)^alpha removes the endpoint
    singularity; the integrand becomes q(t + u^(1/alpha)).
    """
    lo = max(lo, t)
    if hi <= lo:
        return 0.0
    if alpha < 1:
        inv = 1.0 / alpha
        u0, u1 = (lo - t) ** alpha, (hi - t) ** alpha
        bps = [(b - t) ** alpha for b in breakpoints if lo < b < hi]
        return quadrature.integrate(lambda u: tail(t + u ** inv), u0, u1, bps)
    if alpha == 1:
        return quadrature.integrate(tail, lo, hi, breakpoints)
    return quadrature.integrate(
        lambda z: alpha * (z - t) ** (alpha - 1) * tail(z), lo, hi, breakpoints)


@dataclass(frozen=True, eq=False)
class ContinuousTail:
    """A distribution given by its tail ``q(x) = P(X >= x)``.

    ``tail`` must be vectorized and nonincreasing with ``tail(lower_cut) = 1``.
    The law is truncated at ``upper_cut`` (tail treated as 0 from there on),
    so ``x_star = upper_cut`` and ``p_star = 0``. ``partial_moment_fn(t, alpha)``
    may return an exact E (X-t)_+^alpha, or None to fall back to quadrature.
    """

    tail_fn: Callable
    lower_cut: float
    upper_cut: float
    partial_moment_fn: Optional[Callable] = None
    breakpoints: tuple = ()
    name: str = ""

    def __post_init__(self):
        lo, hi = float(self.lower_cut), float(self.upper_cut)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise InputError("need finite lower_cut < upper_cut")
        object.__setattr__(self, "lower_cut", lo)
        object.__setattr__(self, "upper_cut", hi)
        if abs(float(self.tail_fn(np.array([lo]))[0]) - 1.0) > PROB_TOL:
            raise InputError("tail(lower_cut) must equal 1")
        if float(self.tail_fn(np.array([hi]))[0]) > TAIL_FLOOR:
            raise InputError("tail(upper_cut) must not exceed %g" % TAIL_FLOOR)
        grid = np.linspace(lo, hi, 257)
        vals = np.asarray(self.tail_fn(grid), dtype=float)
        if np.any(np.diff(vals) > 1e-14) or np.any(vals < 0) or np.any(vals > 1 + PROB_TOL):
            raise InputError("tail must be nonincreasing with values in [0, 1]")

    @property
    def x_star(self) -> float:
        return self.upper_cut

    @property
    def p_star(self) -> float:
        return 0.0

    @property
    def x_star2(self) -> float:
        return self.upper_cut

    @property
    def lower(self) -> float:
        return self.lower_cut

    @property
    def is_constant(self) -> bool:
        return False

    def tail(self, x):
        x_arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x_arr).ravel()
        out = np.zeros(flat.size)
        below = flat <= self.lower_cut
        inside = (~below) & (flat < self.upper_cut)
        out[below] = 1.0
        if inside.any():
            out[inside] = np.clip(self.tail_fn(flat[inside]), 0.0, 1.0)
        return float(out[0]) if x_arr.ndim == 0 else out.reshape(x_arr.shape)

    tail_strict = tail  # no atoms

    def _partial_moment_scalar(self, t: float, alpha: float) -> float:
        if t >= self.upper_cut:
            return 0.0
        value = None
        if self.partial_moment_fn is not None:
            value = self.partial_moment_fn(t, alpha)
        if value is None:
            if alpha == 0:
                value = float(self.tail(t))
            else:
                below = max(self.lower_cut - t, 0.0) ** alpha
                value = below + _fubini_integral(self.tail, t, alpha, self.lower_cut,
                                                 self.upper_cut, self.breakpoints)
        return value

    def partial_moment(self, t, alpha: float):
        alpha = float(alpha)
        t_arr = np.asarray(t, dtype=float)
        if t_arr.ndim == 0:
            return self._partial_moment_scalar(float(t_arr), alpha)
        return np.array([self._partial_moment_scalar(float(v), alpha)
                         for v in t_arr.ravel()]).reshape(t_arr.shape)

    @cached_property
    def mean(self) -> float:
        return self.lower_cut + self._partial_moment_scalar(self.lower_cut, 1.0)

    def _log_mgf_scalar(self, lam: float) -> float:
        if lam == 0:
            return 0.0
        lo, hi = self.lower_cut, self.upper_cut
        # E e^{lam X} = e^{lam lo} + int_lo^hi lam e^{lam z} q(z) dz, factored by e^{lam hi}
        body = quadrature.integrate(
            lambda z: lam * np.exp(lam * (z - hi)) * self.tail(z), lo, hi, self.breakpoints)
        return lam * hi + math.log(math.exp(lam * (lo - hi)) + body)

    def log_mgf(self, lam):
        lam_arr = np.asarray(lam, dtype=float)
        if lam_arr.ndim == 0:
            return self._log_mgf_scalar(float(lam_arr))
        return np.array([self._log_mgf_scalar(float(v)) for v in lam_arr.ravel()]
                        ).reshape(lam_arr.shape)

    def _bisect(self, pred) -> float:
        # smallest x in [lower_cut, upper_cut] with pred(x) true; pred is monotone
        lo, hi = self.lower_cut, self.upper_cut
        for _ in range(400):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if pred(mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    def quantile_upper(self, p: float) -> float:
        return self._bisect(lambda x: self.tail(x) < p)

    def quantile_lower(self, p: float) -> float:
        return self._bisect(lambda x: self.tail(x) <= p)

    def shift(self, c: float) -> "ContinuousTail":
        pm = self.partial_moment_fn
        return ContinuousTail(
            lambda x: self.tail_fn(np.asarray(x) - c), self.lower_cut + c, self.upper_cut + c,
            None if pm is None else (lambda t, a: pm(t - c, a)),
            tuple(b + c for b in self.breakpoints), self.name)

    def scale(self, k: float) -> "ContinuousTail":
        if k <= 0:
            raise DomainError("continuous tails can only be scaled by k > 0")
        pm = self.partial_moment_fn

        def scaled_pm(t, a):
            v = pm(t / k, a)
            return None if v is None else v * k ** a
        return ContinuousTail(
            lambda x: self.tail_fn(np.asarray(x) / k), self.lower_cut * k, self.upper_cut * k,
            None if pm is None else scaled_pm,
            tuple(b * k for b in self.breakpoints), self.name)


Dist = Union[DiscreteDist, ContinuousTail]


# ---------------------------------------------------------------------------
# module-level functional API

def tail_prob(d: Dist, x: float) -> float:
    """P(X >= x)."""
    return float(d.tail(float(x)))


def partial_moment(d: Dist, t: float, alpha: float) -> float:
    """E (X - t)_+^alpha for alpha > 0."""
    alpha = float(alpha)
    if not alpha > 0 or math.isinf(alpha):
        raise DomainError("partial moments need 0 < alpha < inf")
    return float(d.partial_moment(float(t), alpha))


def mgf(d: DiscreteDist, lam: float) -> float:
    """E exp(lam X), computed in log space; overflow raises NumericOverflow."""
    log_value = float(d.log_mgf(float(lam)))
    if log_value > 709.78:
        raise NumericOverflow("MGF overflows at lambda=%g (log value %g)" % (lam, log_value))
    return math.exp(log_value)


def support_stats(d: Dist) -> tuple[float, float, float]:
    """(x_star, p_star, x_star2): top of the support, its mass, next support point."""
    return d.x_star, d.p_star, d.x_star2


def convolve(d1: DiscreteDist, d2: DiscreteDist) -> DiscreteDist:
    """Distribution of X + Y for independent X ~ d1, Y ~ d2."""
    sums = np.add.outer(d1.values, d2.values).ravel()
    probs = np.outer(d1.probs, d2.probs).ravel()
    return DiscreteDist.from_atoms(sums, probs, normalize=True)


def joint_sum(j: JointDiscreteDist) -> DiscreteDist:
    return j.sum_dist()


def joint_marginals(j: JointDiscreteDist) -> tuple[DiscreteDist, DiscreteDist]:
    return j.marginals()


def as_continuous(d: DiscreteDist) -> ContinuousTail:
    """The step tail of ``d`` wrapped as a ContinuousTail (no analytic moments).

    The cut sits one unit above the top atom, so quadrature over the stored
    step tail can be checked against the exact sums.
    """
    return ContinuousTail(lambda x: d.tail(np.asarray(x)), d.lower, d.x_star + 1.0,
                          None, tuple(d.values.tolist()), "discrete-step")


# ---------------------------------------------------------------------------
# standard families

def two_point_zero_mean(a: float, b: float) -> DiscreteDist:
    """The zero-mean law on {-a, b}."""
    if not (a > 0 and b > 0):
        raise DomainError("two-point law needs a > 0 and b > 0")
    return DiscreteDist(np.array([-a, b]), np.array([b / (a + b), a / (a + b)]))


def pareto(a: float, beta: float, p_min: Optional[float] = None) -> ContinuousTail:
    """Pareto law with tail (a/x)^beta for x >= a, truncated far in the tail.

    The cut is placed where the tail equals ``min(TAIL_FLOOR, 1e-12 * p_min)``.
    For t >= a the partial moments are exact:
    a^beta t^(alpha-beta) Gamma(alpha+1) Gamma(beta-alpha) / Gamma(beta).
    """
    if not (a > 0 and beta > 0):
        raise DomainError("pareto needs a > 0 and beta > 0")
    floor = TAIL_FLOOR if p_min is None else min(TAIL_FLOOR, 1e-12 * p_min)
    upper = a * floor ** (-1.0 / beta) * (1.0 + 1e-9)

    def tail_fn(x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= a, 1.0, (a / np.maximum(x, a)) ** beta)

    def pm(t, alpha):
        if alpha >= beta:
            return None
        if t >= a:
            log_c = (special.gammaln(alpha + 1) + special.gammaln(beta - alpha)
                     - special.gammaln(beta))
            return math.exp(beta * math.log(a) + (alpha - beta) * math.log(t) + log_c)
        if alpha == 1 and beta > 1:
            return a * beta / (beta - 1) - t
        return None

    return ContinuousTail(tail_fn, a, upper, pm, (), "pareto(a=%g, beta=%g)" % (a, beta))


def gamma(shape: float, scale: float = 1.0) -> ContinuousTail:
    """Gamma law as a ContinuousTail (tail from the regularized incomplete gamma)."""
    if not (shape > 0 and scale > 0):
        raise DomainError("gamma needs positive shape and scale")
    law = stats.gamma(shape, scale=scale)
    upper = float(law.isf(TAIL_FLOOR)) * 1.0001
    return ContinuousTail(lambda x: law.sf(np.asarray(x, dtype=float)), 0.0, upper,
                          None, (), "gamma(shape=%g, scale=%g)" % (shape, scale))


def quantile_atoms(ppf: Callable, n: int) -> DiscreteDist:
    """Equiprobable discretization: n atoms at the quantiles (k - 1/2)/n."""
    u = (np.arange(1, n + 1) - 0.5) / n
    return DiscreteDist.from_atoms(ppf(u), np.full(n, 1.0 / n), normalize=True)


def gamma_atoms(shape: float, scale: float = 1.0, n: int = 1000) -> DiscreteDist:
    return quantile_atoms(stats.gamma(shape, scale=scale).ppf, n)


def normal_atoms(mu: float, sigma: float, n: int = 2001) -> DiscreteDist:
    return quantile_atoms(stats.norm(mu, sigma).ppf, n)


# ---------------------------------------------------------------------------
# JSON ingestion

def _num(v) -> float:
    if isinstance(v, bool):
        raise InputError("expected a number, got %r" % (v,))
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return float(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise InputError("expected a number or a fraction string, got %r" % (v,))


def dist_from_json(obj) -> Union[DiscreteDist, JointDiscreteDist, ContinuousTail]:
    """Build a distribution from its JSON description (see README for the schema)."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError("distribution JSON must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "discrete":
            values = [_num(v) for v in obj["values"]]
            probs = [_num(p) for p in obj["probs"]]
            if len(values) != len(probs):
                raise InputError("values and probs differ in length")
            if any(p <= 0 for p in probs):
                raise InputError("probabilities must be strictly positive")
            if abs(math.fsum(probs) - 1.0) > PROB_TOL:
                raise InputError("probabilities must sum to 1")
            return DiscreteDist.from_atoms(values, probs, normalize=True)
        if kind == "joint":
            return JointDiscreteDist([[_num(v) for v in atom] for atom in obj["atoms"]])
        if kind == "pareto":
            p_min = obj.get("p_min")
            return pareto(_num(obj["a"]), _num(obj["beta"]),
                          None if p_min is None else _num(p_min))
        if kind == "two_point_zero_mean":
            return two_point_zero_mean(_num(obj["a"]), _num(obj["b"]))
        if kind == "gamma":
            shape, scale = _num(obj["shape"]), _num(obj.get("scale", 1.0))
            atoms = obj.get("atoms")
            if atoms is not None:
                return gamma_atoms(shape, scale, int(atoms))
            return gamma(shape, scale)
    except KeyError as exc:
        raise InputError("missing field %s for type %r" % (exc, kind)) from None
    except DomainError as exc:
        raise InputError(str(exc)) from None
    raise InputError("unknown distribution type %r" % (kind,))


def read_dist(path: str):
    """Load a distribution JSON file."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from None
    return dist_from_json(obj)
