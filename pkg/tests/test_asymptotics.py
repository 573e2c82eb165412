import math

import numpy as np
import pytest

from riskspectrum.asymptotics import k_constant, pareto_ratio
from riskspectrum.errors import DomainError

# reference values computed with mpmath at 30 digits
FROZEN = [
    (5.0, 1.0, 1.25),
    (5.0, 0.5, 1.1688999279159391584),
    (5.0, 2.0, 1.3697931912643548019),
    (3.0, 2.5, 2.2493133617892008491),
    (10.0, 1.0, 1.1111111111111111111),
    (2.5, 0.3, 1.2821789123757572152),
]


@pytest.mark.parametrize("r,alpha,expected", FROZEN)
def test_k_constant_reference(r, alpha, expected):
    assert k_constant(r, alpha) == pytest.approx(expected, rel=1e-13)


def test_alpha_one_closed_form():
    for r in (1.5, 2.0, 7.0, 40.0):
        assert k_constant(r, 1.0) == pytest.approx(r / (r - 1), rel=1e-13)


def test_domain():
    with pytest.raises(DomainError):
        k_constant(3.0, 3.0)
    with pytest.raises(DomainError):
        k_constant(3.0, 0.0)
    with pytest.raises(DomainError):
        k_constant(-1.0, 0.5)
    assert k_constant(math.inf, 4.0) == 1.0


def test_shape():
    for r in (1.5, 3.0, 8.0):
        ks = [k_constant(r, a) for a in np.linspace(0.05, r - 0.05, 30)]
        assert all(k >= 1 for k in ks)
        assert np.all(np.diff(ks) > 0)
    big = [k_constant(r, 2.0) for r in (10.0, 100.0, 1000.0, 1e5)]
    assert np.all(np.diff(big) < 0) and big[-1] - 1 < 1e-3


def test_pareto_ratio_equals_limit():
    ratios = pareto_ratio(1.0, 5.0, 1.0, [1e-1, 1e-2, 1e-3])
    assert ratios == pytest.approx([1.25] * 3, rel=1e-7)
    ratios = pareto_ratio(2.0, 3.0, 2.0, [0.05, 0.01])
    assert ratios == pytest.approx([k_constant(3.0, 2.0)] * 2, rel=1e-6)


def test_pareto_ratio_domain():
    assert pareto_ratio(1.0, 2.0, 0.0, [0.1, 0.2]) == [1.0, 1.0]
    with pytest.raises(DomainError):
        pareto_ratio(1.0, 2.0, 2.0, [0.1])
