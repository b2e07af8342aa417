import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from twopiece.core import TwoPieceNormal
from twopiece.errors import DomainError, InvalidParameters
from twopiece.families import split_normal
from twopiece.numerics import std_normal_cdf, std_normal_quantile

from conftest import SIGMA_GRID, quad

GRID = list(itertools.product(SIGMA_GRID, SIGMA_GRID))
MEDIAN_012 = 2.0 * std_normal_quantile(0.625)


def moment_oracle(d, k, centre):
    scale = max(d.sigma1, d.sigma2, 1.0)
    return quad(lambda x: (x - centre) ** k * d.pdf(x), points=[d.mu], abs_tol=1e-13 * scale ** k)


class TestConstruction:
    @pytest.mark.parametrize("args", [(0, 0, 1), (0, 1, 0), (0, -1, 1), (math.inf, 1, 1), (0, math.nan, 1)])
    def test_rejects_invalid(self, args):
        with pytest.raises(InvalidParameters):
            TwoPieceNormal(*args)

    def test_immutable(self):
        d = TwoPieceNormal(0, 1, 2)
        with pytest.raises(AttributeError):
            d.mu = 3.0


class TestPdf:
    def test_standard_normal_case(self):
        assert TwoPieceNormal(0, 1, 1).pdf(0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)

    def test_peak_matches_normalization(self):
        d = TwoPieceNormal(0, 1, 2)
        unnormalized = quad(lambda x: np.exp(-0.5 * (x / np.where(x <= 0, 1.0, 2.0)) ** 2), points=[0.0])
        assert d.pdf(0.0) == pytest.approx(1.0 / unnormalized, rel=1e-12)
        assert d.pdf(0.0) == pytest.approx(0.2659615202676218, rel=1e-14)

    def test_one_sd_each_side(self):
        d = TwoPieceNormal(0, 1, 2)
        assert d.pdf(-1.0) == d.pdf(2.0) == pytest.approx(d.peak * math.exp(-0.5), rel=1e-15)

    @pytest.mark.parametrize("s1,s2", GRID)
    def test_normalization(self, s1, s2):
        assert abs(quad(TwoPieceNormal(0.3, s1, s2).pdf, points=[0.3]) - 1.0) <= 1e-10

    def test_continuity_at_mode(self):
        d = TwoPieceNormal(1.0, 0.5, 3.0)
        for eps in (1e-4, 1e-8, 1e-12):
            assert abs(d.pdf(1.0 - eps) - d.pdf(1.0 + eps)) < 10 * eps
        assert d.pdf(1.0) == d.peak

    @pytest.mark.parametrize("mu", [0.0, 1.5, -3.0])
    def test_mirror_exact(self, mu):
        d = TwoPieceNormal(mu, 0.5, 2.0)
        x = np.arange(-40, 41) / 8.0
        np.testing.assert_array_equal(d.pdf(x), d.mirror().pdf(2 * mu - x))

    def test_maximum_at_mode(self):
        d = TwoPieceNormal(2.0, 0.3, 1.7)
        x = np.linspace(-5, 9, 10001)
        assert np.all(d.pdf(x) <= d.peak)


class TestCdf:
    def test_mass_at_mode(self):
        assert TwoPieceNormal(0, 1, 2).cdf(0.0) == pytest.approx(1 / 3, abs=1e-15)

    def test_normal_case(self):
        assert TwoPieceNormal(0, 1, 1).cdf(1.0) == pytest.approx(std_normal_cdf(1.0), abs=1e-16)

    def test_median_example(self):
        d = TwoPieceNormal(0, 1, 2)
        oracle = quad(d.pdf, -math.inf, MEDIAN_012, points=[0.0])
        assert oracle == pytest.approx(0.5, abs=1e-12)
        assert d.cdf(MEDIAN_012) == pytest.approx(0.5, abs=1e-8)
        # the six-digit value quoted for the median is itself rounded
        assert d.cdf(0.637279) == pytest.approx(0.5, abs=1e-7)

    @pytest.mark.parametrize("x", [-3.0, -0.4, 0.0, 0.9, 5.0])
    def test_against_quadrature(self, x):
        d = TwoPieceNormal(0.2, 0.7, 1.9)
        assert d.cdf(x) == pytest.approx(quad(d.pdf, -math.inf, x, points=[0.2]), abs=1e-12)

    def test_branches_agree_at_mode(self):
        d = TwoPieceNormal(0.5, 1.3, 0.4)
        eps = 1e-12
        assert d.cdf(0.5 - eps) == pytest.approx(d.cdf(0.5 + eps), abs=1e-11)

    def test_sf_complements(self):
        d = TwoPieceNormal(0, 1, 2)
        x = np.linspace(-6, 12, 50)
        np.testing.assert_allclose(d.cdf(x) + d.sf(x), 1.0, atol=1e-15)

    def test_half_normal_collapse(self):
        assert TwoPieceNormal(0.0, 1e-8, 1.0).cdf(0.0) <= 1e-7


class TestQuantile:
    def test_boundary_is_mode(self):
        d = TwoPieceNormal(2.0, 1.0, 3.0)
        assert d.quantile(0.25) == 2.0

    def test_median_formula(self):
        d = TwoPieceNormal(0, 1, 2)
        # right-piece median with sigma1 < sigma2: sigma2 z(1 - (s1+s2)/(4 s2)) + mu
        assert d.quantile(0.5) == pytest.approx(2.0 * std_normal_quantile(1 - 3 / 8), abs=1e-12)
        assert d.quantile(0.5) == pytest.approx(0.637279, abs=1e-6)

    def test_normal_case(self):
        assert TwoPieceNormal(5, 2, 2).quantile(0.975) == pytest.approx(5 + 2 * 1.959963984540054, abs=1e-12)

    @pytest.mark.parametrize("s1,s2", GRID)
    def test_round_trip(self, s1, s2):
        d = TwoPieceNormal(-1.0, s1, s2)
        p = np.array([0.001, 0.01] + [k / 10 for k in range(1, 10)] + [0.99, 0.999])
        assert np.max(np.abs(d.cdf(d.quantile(p)) - p)) <= 1e-9

    def test_left_piece_formula(self):
        d = TwoPieceNormal(1.0, 0.5, 2.0)
        alpha = 0.1
        beta = alpha * (0.5 + 2.0) / (2 * 0.5)
        assert d.quantile(alpha) == pytest.approx(0.5 * std_normal_quantile(beta) + 1.0, abs=1e-14)

    def test_right_piece_upper_tail_formula(self):
        d = TwoPieceNormal(1.0, 0.5, 2.0)
        alpha = 0.05
        delta = alpha * (0.5 + 2.0) / (2 * 2.0)
        assert d.quantile(1 - alpha) == pytest.approx(2.0 * std_normal_quantile(1 - delta) + 1.0, abs=1e-13)

    @pytest.mark.parametrize("p", [0.0, 1.0, 2.0])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            TwoPieceNormal().quantile(p)


class TestMoments:
    def test_symmetric(self):
        m = TwoPieceNormal(1.5, 2.0, 2.0).moments()
        assert (m.mean, m.variance, m.third_central_moment, m.kurtosis) == (1.5, 4.0, 0.0, 3.0)

    def test_example_values(self):
        d = TwoPieceNormal(0, 1, 2)
        assert d.mean() == pytest.approx(0.797884560802865, abs=1e-14)
        assert d.variance() == pytest.approx(2.363380227632418, abs=1e-14)
        assert d.mean() == pytest.approx(moment_oracle(d, 1, 0.0), abs=1e-10)

    @pytest.mark.parametrize("s1,s2", GRID)
    def test_closed_forms_against_quadrature(self, s1, s2):
        d = TwoPieceNormal(0.4, s1, s2)
        mean = d.mean()
        scale = max(s1, s2)
        assert abs(moment_oracle(d, 1, 0.0) - mean) <= 1e-8 * max(1, scale)
        assert abs(moment_oracle(d, 2, mean) - d.variance()) <= 1e-8 * max(1, scale ** 2)
        assert abs(moment_oracle(d, 3, mean) - d.third_central_moment()) <= 1e-8 * max(1, scale ** 3)
        mu4 = moment_oracle(d, 4, mean)
        assert abs(mu4 / d.variance() ** 2 - d.kurtosis()) <= 1e-8

    def test_half_normal_kurtosis_limit(self):
        assert TwoPieceNormal(0, 1e-7, 1).kurtosis() == pytest.approx(3.8692, abs=1e-3)

    @pytest.mark.parametrize("s1,s2", GRID)
    def test_kurtosis_bounds(self, s1, s2):
        beta2 = TwoPieceNormal(0, s1, s2).kurtosis()
        assert 3.0 <= beta2 <= 3.8692
        if s1 == s2:
            assert abs(beta2 - 3.0) <= 1e-12
        else:
            assert beta2 > 3.0 + 1e-12

    @pytest.mark.parametrize("s1,s2", [(1, 2), (0.1, 10), (3, 0.5)])
    def test_fourth_moment_against_raw_moments(self, s1, s2):
        d = TwoPieceNormal(0, s1, s2)
        m1, m2, m3, m4 = (d.raw_moment_about_mode(k) for k in (1, 2, 3, 4))
        expanded = m4 - 4 * m1 * m3 + 6 * m1 * m1 * m2 - 3 * m1 ** 4
        assert d.fourth_central_moment() == pytest.approx(expanded, rel=1e-12)

    def test_summary_fields(self):
        m = TwoPieceNormal(0, 1, 3).moments()
        assert m.mass_left == 0.25
        assert m.skew_ratio == 0.5


class TestCentralValues:
    def test_example(self):
        mean, median, mode = TwoPieceNormal(0, 1, 2).central_values()
        assert mean == pytest.approx(0.797885, abs=1e-6)
        assert median == pytest.approx(0.637279, abs=1e-6)
        assert mode == 0.0

    def test_mirror_negates(self):
        a = TwoPieceNormal(0, 1, 2).central_values()
        b = TwoPieceNormal(0, 2, 1).central_values()
        np.testing.assert_allclose(b, [-v for v in a], atol=1e-15)

    def test_symmetric(self):
        assert TwoPieceNormal(3, 1, 1).central_values() == (3.0, 3.0, 3.0)

    @pytest.mark.parametrize("s1,s2", GRID)
    def test_ordering(self, s1, s2):
        mean, median, mode = TwoPieceNormal(0.0, s1, s2).central_values()
        tol = 1e-12 * max(s1, s2)
        if s1 < s2:
            assert mean > median + tol and median > mode + tol
        elif s1 > s2:
            assert mean < median - tol and median < mode - tol
        else:
            assert abs(mean - mode) <= tol and abs(median - mode) <= tol


class TestSample:
    def test_empty(self, rng):
        assert TwoPieceNormal().sample(rng, 0).shape == (0,)

    def test_deterministic(self):
        d = TwoPieceNormal(0, 1, 2)
        a = d.sample(np.random.Generator(np.random.Philox(7)), 50)
        b = d.sample(np.random.Generator(np.random.Philox(7)), 50)
        np.testing.assert_array_equal(a, b)

    def test_normal_case_ks(self, rng):
        d = TwoPieceNormal(0, 1, 1)
        x = d.sample(rng, 10 ** 5)
        assert stats.kstest(x, d.cdf).pvalue > 0.01

    def test_skewed_ks(self, rng):
        d = TwoPieceNormal(1, 0.5, 2)
        assert stats.kstest(d.sample(rng, 10 ** 5), d.cdf).pvalue > 0.01

    def test_left_fraction(self, rng):
        x = TwoPieceNormal(0, 1, 2).sample(rng, 10 ** 5)
        assert np.mean(x < 0) == pytest.approx(1 / 3, abs=0.005)

    def test_matches_inverse_cdf_sampling(self, rng):
        d = TwoPieceNormal(0, 0.5, 2)
        direct = d.sample(rng, 20000)
        inverse = d.quantile(rng.random(20000))
        assert stats.ks_2samp(direct, inverse).pvalue > 0.01

    def test_negative_n(self, rng):
        with pytest.raises(DomainError):
            TwoPieceNormal().sample(rng, -1)


class TestSplitParameterization:
    def test_symmetric(self):
        assert TwoPieceNormal(0, 3, 3).to_split_parameterization() == (3.0, 1.0)

    def test_examples(self):
        assert TwoPieceNormal(0, 1, 4).to_split_parameterization() == (2.0, 2.0)
        assert TwoPieceNormal(0, 4, 1).to_split_parameterization() == (2.0, 0.5)

    @given(st.floats(-5, 5), st.floats(0.05, 20), st.floats(0.05, 20))
    def test_pointwise_agreement(self, mu, s1, s2):
        d = TwoPieceNormal(mu, s1, s2)
        scale, gamma = d.to_split_parameterization()
        x = mu + np.linspace(-4 * s1, 4 * s2, 100)
        np.testing.assert_allclose(split_normal(gamma, mu, scale).pdf(x), d.pdf(x), rtol=1e-12)
