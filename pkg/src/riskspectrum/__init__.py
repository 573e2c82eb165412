"""Tail-probability and quantile bounds over the spectrum of moment functions
h_alpha, with Gini-type risk measures and stochastic-order checks."""
from .dist import (ContinuousTail, DiscreteDist, JointDiscreteDist, convolve, dist_from_json,
                   gamma, joint_marginals, joint_sum, mgf, parse_alpha, pareto, partial_moment,
                   read_dist, support_stats, tail_prob, two_point_zero_mean)
from .errors import (DomainError, InputError, InvalidRegion, NegativeSupport, NumericOverflow,
                     QuadratureNonConvergent, RiskSpectrumError, ToleranceNotReached)
from .lower_quantile import cvar, lower_quantile, pl_curve, q_hat, q_hat_less
from .optimize import MinimizeResult
from .quantile_bounds import b_curve, bracket_t, dual_check, quantile_bound, quantile_q0
from .tail_bounds import lambda_max, moment_curve, tail_bound, x_alpha

__version__ = "0.1.0"
