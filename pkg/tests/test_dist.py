import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riskspectrum.dist import (ContinuousTail, DiscreteDist, JointDiscreteDist, as_continuous,
                               convolve, dist_from_json, gamma, joint_marginals, joint_sum, mgf,
                               pareto, parse_alpha, partial_moment, support_stats, tail_prob,
                               two_point_zero_mean)
from riskspectrum.errors import DomainError, InputError, NumericOverflow
from riskspectrum.generators import random_discrete

X13 = two_point_zero_mean(1.0, 3.0)
THREE = DiscreteDist.from_atoms([-27 / 11, -1.0, 2.0], [0.25, 0.25, 0.5])


@st.composite
def discrete(draw, max_atoms=6):
    n = draw(st.integers(1, max_atoms))
    values = draw(st.lists(st.floats(-10, 10), min_size=n, max_size=n))
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    w = np.array(weights)
    return DiscreteDist.from_atoms(values, w / w.sum(), normalize=True)


class TestConstruction:
    def test_two_point_law(self):
        np.testing.assert_allclose(X13.values, [-1, 3])
        np.testing.assert_allclose(X13.probs, [0.75, 0.25])
        assert X13.mean == 0.0

    def test_merges_near_duplicates(self):
        d = DiscreteDist.from_atoms([1.0, 1.0 + 1e-13, 2.0], [0.2, 0.3, 0.5])
        np.testing.assert_allclose(d.probs, [0.5, 0.5])

    def test_rejects_bad_mass(self):
        with pytest.raises(InputError):
            DiscreteDist([0.0, 1.0], [0.5, 0.6])
        with pytest.raises(InputError):
            DiscreteDist([1.0, 0.0], [0.5, 0.5])
        with pytest.raises(InputError):
            DiscreteDist([0.0, 1.0], [1.0, 0.0])

    def test_immutable(self):
        with pytest.raises(ValueError):
            X13.values[0] = 5.0

    def test_alpha_tokens(self):
        assert parse_alpha("inf") == math.inf
        assert parse_alpha("0") == 0.0
        assert parse_alpha("0.25") == 0.25
        with pytest.raises(InputError):
            parse_alpha("half")
        with pytest.raises(DomainError):
            parse_alpha("-1")


class TestPrimitives:
    def test_tail_prob(self):
        assert tail_prob(X13, 0.0) == 0.25
        assert tail_prob(X13, -100.0) == 1.0
        c = DiscreteDist.point(5.0)
        assert tail_prob(c, 5.0) == 1.0
        assert tail_prob(c, 5.0001) == 0.0

    def test_partial_moment(self):
        assert partial_moment(X13, 0.0, 1.0) == 0.75
        assert partial_moment(X13, 3.0, 0.5) == 0.0
        assert partial_moment(X13, -1.0, 2.0) == pytest.approx(0.25 * 16)

    def test_pareto_partial_moment(self):
        assert partial_moment(pareto(1.0, 2.0), 1.0, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_mgf(self):
        assert mgf(DiscreteDist.point(0.0), 3.0) == 1.0
        coin = DiscreteDist([0.0, 1.0], [0.5, 0.5])
        assert mgf(coin, math.log(2)) == pytest.approx(1.5, rel=1e-15)
        assert mgf(X13, 0.0) == 1.0

    def test_mgf_overflow(self):
        with pytest.raises(NumericOverflow):
            mgf(DiscreteDist.point(1000.0), 1.0)

    def test_support_stats(self):
        assert support_stats(X13) == (3.0, 0.25, -1.0)
        assert support_stats(THREE) == (2.0, 0.5, -1.0)
        assert support_stats(DiscreteDist.point(7.0)) == (7.0, 1.0, -math.inf)

    def test_quantiles(self):
        assert X13.quantile_upper(0.2) == 3.0
        assert X13.quantile_upper(0.5) == -1.0
        assert X13.quantile_lower(0.25) == -1.0
        assert X13.quantile_upper(0.25) == 3.0


class TestConvolution:
    def test_coins(self):
        coin = DiscreteDist([0.0, 1.0], [0.5, 0.5])
        s = convolve(coin, coin)
        np.testing.assert_allclose(s.values, [0, 1, 2])
        np.testing.assert_allclose(s.probs, [0.25, 0.5, 0.25])

    def test_constant_shifts(self):
        assert convolve(DiscreteDist.point(2.5), THREE).same_as(THREE.shift(2.5))

    def test_brute_force(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            a = random_discrete(rng, n_atoms=4)
            b = random_discrete(rng, n_atoms=4)
            acc = {}
            for x, px in zip(a.values, a.probs):
                for y, py in zip(b.values, b.probs):
                    acc[x + y] = acc.get(x + y, 0.0) + px * py
            keys = sorted(acc)
            expect = DiscreteDist.from_atoms(keys, [acc[k] for k in keys], normalize=True)
            assert convolve(a, b).same_as(expect)

    def test_joint(self):
        j = JointDiscreteDist([[0, 1, 0.5], [1, 0, 0.5]])
        assert joint_sum(j).same_as(DiscreteDist.point(1.0))
        x, y = joint_marginals(j)
        assert x.same_as(DiscreteDist([0.0, 1.0], [0.5, 0.5]))
        assert y.same_as(x)

    def test_independent_joint_matches_convolution(self):
        rng = np.random.default_rng(7)
        a, b = random_discrete(rng), random_discrete(rng)
        assert JointDiscreteDist.independent(a, b).sum_dist().same_as(convolve(a, b))

    @given(discrete(), discrete())
    @settings(max_examples=50, deadline=None)
    def test_mean_additive(self, a, b):
        assert convolve(a, b).mean == pytest.approx(a.mean + b.mean, abs=1e-12)


class TestProperties:
    @given(discrete(), st.floats(0.2, 4.0))
    @settings(max_examples=60, deadline=None)
    def test_partial_moment_monotone_and_convex(self, d, alpha):
        t = np.linspace(d.lower - 1, d.x_star + 1, 201)
        m = d.partial_moment(t, alpha)
        assert np.all(np.diff(m) <= 1e-12)
        if alpha >= 1:
            assert np.all(np.diff(m, 2) >= -1e-9)

    @given(discrete())
    @settings(max_examples=60, deadline=None)
    def test_tail_shape(self, d):
        grid = np.linspace(d.lower - 1, d.x_star + 1, 101)
        assert np.all(np.diff(d.tail(grid)) <= 0)
        assert d.tail(d.x_star) == pytest.approx(d.p_star)
        assert d.tail(d.x_star + 1e-9) == 0.0

    def test_step_tail_quadrature_matches_sum(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            d = random_discrete(rng)
            c = as_continuous(d)
            for alpha in (0.3, 1.0, 2.5):
                for t in np.linspace(d.lower - 0.5, d.x_star - 0.1, 5):
                    assert c.partial_moment(t, alpha) == pytest.approx(
                        d.partial_moment(t, alpha), abs=1e-8)


class TestContinuous:
    def test_gamma_partial_moment_against_frozen_value(self):
        # mpmath quad of sqrt(x-3) x^1.5 e^-x / Gamma(2.5) over [3, inf)
        assert gamma(2.5).partial_moment(3.0, 0.5) == pytest.approx(0.32518448837589578412, rel=1e-9)

    def test_gamma_mean_and_mgf(self):
        g = gamma(2.0, 1.5)
        assert g.mean == pytest.approx(3.0, rel=1e-9)
        assert math.exp(g.log_mgf(0.25)) == pytest.approx((1 - 0.375) ** -2, rel=1e-9)

    def test_pareto_fallback_below_scale(self):
        law = pareto(1.0, 3.0)
        assert law.partial_moment(0.5, 1.0) == pytest.approx(1.5 - 0.5, rel=1e-12)
        # below the scale alpha = 1.5 falls back to quadrature; mpmath value, truncation ~3e-8
        assert law.partial_moment(0.5, 1.5) == pytest.approx(1.1865939414979674335, rel=1e-7)

    def test_pareto_quantile(self):
        assert pareto(2.0, 4.0).quantile_upper(1e-4) == pytest.approx(20.0, rel=1e-12)

    def test_rejects_bad_tail(self):
        with pytest.raises(InputError):
            ContinuousTail(lambda x: np.full_like(np.asarray(x, float), 0.5), 0.0, 1.0)


class TestJson:
    def test_fraction_strings(self):
        d = dist_from_json({"type": "discrete", "values": ["-27/11", -1, 2], "probs": [0.25, 0.25, 0.5]})
        assert d.same_as(THREE)

    def test_two_point(self):
        assert dist_from_json({"type": "two_point_zero_mean", "a": 1, "b": 3}).same_as(X13)

    def test_pareto_and_joint(self):
        assert isinstance(dist_from_json({"type": "pareto", "a": 1, "beta": 2}), ContinuousTail)
        j = dist_from_json({"type": "joint", "atoms": [[0, 0, 0.5], [1, 2, 0.5]]})
        assert isinstance(j, JointDiscreteDist)

    @pytest.mark.parametrize("obj", [
        {"values": [1], "probs": [1]},
        {"type": "discrete", "values": [1, 2], "probs": [0.5]},
        {"type": "discrete", "values": [1, 2], "probs": [0.5, 0.6]},
        {"type": "weird"},
        {"type": "pareto", "a": 1},
        {"type": "pareto", "a": -1, "beta": 2},
    ])
    def test_rejects(self, obj):
        with pytest.raises(InputError):
            dist_from_json(obj)
