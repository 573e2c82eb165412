"""Heavy-tail limit of the ratio between the alpha-bound and the plain quantile."""
from __future__ import annotations

import math
from typing import Iterable

from .dist import check_alpha, pareto
from .errors import DomainError
from .quantile_bounds import check_p, quantile_bound


def k_constant(r: float, alpha: float) -> float:
    """Limit of Q_alpha / Q_0 as p -> 0 for tails decaying like x^(-r).

    K = c^(1/r), c = G(alpha+1) G(r-alpha) / G(r) * r^r / (alpha^alpha (r-alpha)^(r-alpha)),
    and K = 1 for r = inf (light tails).
    """
    r = float(r)
    alpha = check_alpha(alpha)
    if not r > 0:
        raise DomainError("the tail exponent r must be positive")
    if math.isinf(r):
        return 1.0
    if not 0 < alpha < r:
        raise DomainError("need 0 < alpha < r, got alpha=%g, r=%g" % (alpha, r))
    log_c = (math.lgamma(alpha + 1.0) + math.lgamma(r - alpha) - math.lgamma(r)
             + r * math.log(r) - alpha * math.log(alpha) - (r - alpha) * math.log(r - alpha))
    return math.exp(log_c / r)


def pareto_ratio(a: float, beta: float, alpha: float, p_list: Iterable[float],
                 tol: float = 1e-9) -> list[float]:
    """Q_alpha / Q_0 for the Pareto tail (a/x)^beta at each p in ``p_list``."""
    alpha = check_alpha(alpha)
    ps = [check_p(p) for p in p_list]
    if alpha == 0:
        return [1.0 for _ in ps]
    if not alpha < beta:
        raise DomainError("need alpha < beta for finite moments")
    law = pareto(a, beta, p_min=min(ps))
    return [quantile_bound(law, p, alpha, tol).value / (a * p ** (-1.0 / beta)) for p in ps]
