import math

import numpy as np
import pytest

from riskspectrum import quadrature
from riskspectrum.errors import QuadratureNonConvergent


class TestRule:
    def test_kronrod_exact_to_degree_22(self):
        est, err = quadrature.gk15(lambda x: x ** 22, np.array([0.0]), np.array([1.0]))
        assert est[0] == pytest.approx(1 / 23, rel=1e-14)

    def test_gauss_part_error_visible_above_degree_13(self):
        _, err = quadrature.gk15(lambda x: x ** 20, np.array([0.0]), np.array([1.0]))
        assert err[0] > 1e-12


class TestIntegrate:
    def test_smooth(self):
        assert quadrature.integrate(np.exp, 0.0, 1.0) == pytest.approx(math.e - 1, rel=1e-13)

    def test_reversed_limits(self):
        assert quadrature.integrate(np.sin, math.pi, 0.0) == pytest.approx(-2.0, rel=1e-13)

    def test_step_with_breakpoint(self):
        f = lambda x: np.where(x < 0.3, 1.0, 0.0)
        assert quadrature.integrate(f, 0.0, 1.0, breakpoints=[0.3]) == pytest.approx(0.3, abs=1e-14)

    def test_step_without_breakpoint_still_converges(self):
        f = lambda x: np.where(x < 1 / 3, 1.0, 0.0)
        assert quadrature.integrate(f, 0.0, 1.0) == pytest.approx(1 / 3, abs=1e-9)

    def test_integrable_singularity(self):
        f = lambda x: 1 / np.sqrt(np.maximum(x, 1e-300))
        assert quadrature.integrate(f, 0.0, 1.0) == pytest.approx(2.0, rel=1e-8)

    def test_nonfinite_integrand_raises(self):
        with pytest.raises(QuadratureNonConvergent):
            quadrature.integrate(lambda x: np.full_like(x, np.nan), 0.0, 1.0)
