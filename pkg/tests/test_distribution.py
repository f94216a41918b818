import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from ixgd import DomainError, HazardOverflowError, Ixgd, MomentNotFiniteError, OrderSpec, Xgd
from ixgd.distribution import MAX_ORDER_N

# high-precision (mpmath, 30 digits) evaluations of the closed forms at theta=2, x=1
PDF_2_1 = 0.36089408863096717838  # 8 / (3 e^2)
CDF_2_1 = 0.31578232755209628109  # 7 / (3 e^2)
SURV_2_1 = 0.68421767244790371891
HAZARD_2_1 = 0.52745508215215769161

thetas = st.floats(min_value=1e-2, max_value=1e2)
xs = st.floats(min_value=1e-2, max_value=1e3)


def quad_pos(f):
    """Adaptive quadrature over (0, inf) split at 1."""
    a, _ = integrate.quad(f, 0, 1, limit=200, epsabs=1e-14, epsrel=1e-12)
    b, _ = integrate.quad(f, 1, np.inf, limit=200, epsabs=1e-14, epsrel=1e-12)
    return a + b


class TestConstruction:
    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan, "x"])
    def test_rejects_bad_theta(self, bad):
        with pytest.raises(DomainError):
            Ixgd(bad)

    def test_mixture_weights(self):
        w1, w2 = Xgd(3.0).weights
        assert w1 == pytest.approx(0.75)
        assert w1 + w2 == pytest.approx(1.0, abs=1e-15)
        assert w1 >= 0 and w2 >= 0


class TestDensity:
    def test_pdf_value(self):
        assert Ixgd(2).pdf(1.0) == pytest.approx(PDF_2_1, rel=1e-13)

    def test_pdf_near_zero_underflows(self):
        assert Ixgd(1).pdf(1e-8) == pytest.approx(0.0, abs=1e-300)

    def test_pdf_far_tail_asymptote(self):
        # exp(-theta/x) -> 1 and the inner factor -> 1 leaves theta^2/((1+theta) x^2)
        assert Ixgd(1).pdf(1e6) == pytest.approx(5.0e-13, rel=1e-3)

    def test_nonpositive_is_zero(self):
        np.testing.assert_array_equal(Ixgd(1).pdf(np.array([0.0, -3.0])), [0.0, 0.0])

    @pytest.mark.parametrize("bad", [math.nan, math.inf])
    def test_nonfinite_errors(self, bad):
        with pytest.raises(DomainError):
            Ixgd(1).pdf(bad)

    @pytest.mark.parametrize("theta", [0.1, 0.5, 1.0, 1.5, 10.0])
    def test_normalization(self, theta):
        d = Ixgd(theta)
        assert quad_pos(d.pdf) == pytest.approx(1.0, abs=1e-8)

    def test_vectorised_shape(self):
        x = np.linspace(0.1, 5, 12).reshape(3, 4)
        assert Ixgd(1).pdf(x).shape == (3, 4)
        assert isinstance(Ixgd(1).pdf(0.5), float)


class TestCdf:
    def test_value(self):
        assert Ixgd(2).cdf(1.0) == pytest.approx(CDF_2_1, rel=1e-13)

    def test_value_by_quadrature(self):
        d = Ixgd(2)
        area, _ = integrate.quad(d.pdf, 0, 1, epsabs=1e-14, epsrel=1e-13)
        assert d.cdf(1.0) == pytest.approx(area, rel=1e-10)

    def test_limits(self):
        d = Ixgd(1)
        assert d.cdf(math.inf) == 1.0
        assert d.cdf(0.0) == 0.0
        assert d.cdf(-5.0) == 0.0

    def test_nan_errors(self):
        with pytest.raises(DomainError):
            Ixgd(1).cdf(math.nan)

    def test_parent_identity_example(self):
        assert Ixgd(0.5).cdf(0.1) == pytest.approx(1.0 - Xgd(0.5).cdf(10.0), abs=1e-12)

    @given(thetas, xs)
    def test_parent_identity(self, theta, x):
        assert abs(Ixgd(theta).cdf(x) - (1.0 - Xgd(theta).cdf(1.0 / x))) <= 1e-12

    @pytest.mark.parametrize("theta", [0.1, 1.0, 10.0])
    def test_monotone(self, theta):
        x = np.geomspace(1e-3, 1e4, 2000)
        assert np.all(np.diff(Ixgd(theta).cdf(x)) >= 0)

    @pytest.mark.parametrize("theta", [0.1, 1.0, 5.0])
    def test_derivative_is_pdf(self, theta):
        d = Ixgd(theta)
        x = np.geomspace(theta / 20, theta * 200, 25)
        h = x * 1e-5
        fd = (d.cdf(x + h) - d.cdf(x - h)) / (2 * h)
        np.testing.assert_allclose(fd, d.pdf(x), rtol=1e-6)


class TestReliability:
    def test_survival_value(self):
        assert Ixgd(2).survival(1.0) == pytest.approx(SURV_2_1, rel=1e-13)

    def test_survival_limits(self):
        d = Ixgd(1)
        assert d.survival(1e-9) == 1.0
        assert d.survival(math.inf) == 0.0

    @given(thetas, xs)
    def test_survival_complements_cdf(self, theta, x):
        d = Ixgd(theta)
        assert d.survival(x) + d.cdf(x) == pytest.approx(1.0, abs=1e-13)

    def test_survival_upper_tail_keeps_precision(self):
        # 1 - F ~ theta^2 / ((1+theta) x) for large x; the naive complement has no digits left
        d = Ixgd(1.0)
        assert d.survival(1e12) == pytest.approx(0.5e-12, rel=1e-6)

    def test_hazard_value(self):
        assert Ixgd(2).hazard(1.0) == pytest.approx(HAZARD_2_1, rel=1e-12)

    def test_hazard_ratio_of_oracles(self):
        assert Ixgd(2).hazard(1.0) == pytest.approx(PDF_2_1 / SURV_2_1, rel=1e-12)

    def test_hazard_limits(self):
        d = Ixgd(1)
        assert d.hazard(1e-3) == pytest.approx(0.0, abs=1e-300)
        # H(t) ~ 1/t in the upper tail
        assert d.hazard(1e8) == pytest.approx(1e-8, rel=1e-6)

    def test_hazard_at_infinity_signals(self):
        with pytest.raises(HazardOverflowError):
            Ixgd(1).hazard(math.inf)

    @pytest.mark.parametrize("theta", [0.1, 0.5, 1.0, 1.5, 10.0])
    def test_hazard_unimodal(self, theta):
        t = np.geomspace(theta / 100, theta * 1e5, 4000)
        dh = np.diff(Ixgd(theta).hazard(t))
        signs = np.sign(dh[dh != 0])
        assert np.count_nonzero(np.diff(signs)) == 1
        assert signs[0] > 0 and signs[-1] < 0

    def test_reverse_hazard_value(self):
        assert Ixgd(2).reverse_hazard(1.0) == pytest.approx(16.0 / 14.0, rel=1e-14)
        assert Ixgd(2).reverse_hazard(1.0) == pytest.approx(PDF_2_1 / CDF_2_1, rel=1e-12)

    def test_reverse_hazard_tail(self):
        assert Ixgd(1).reverse_hazard(1e9) == pytest.approx(0.0, abs=1e-17)

    @given(thetas, st.floats(min_value=0.05, max_value=1e3))
    def test_reverse_hazard_identity(self, theta, t):
        # pdf and cdf both go subnormal once theta/t passes ~700; the ratio is then noise
        if theta / t > 500:
            return
        d = Ixgd(theta)
        assert d.reverse_hazard(t) == pytest.approx(d.pdf(t) / d.cdf(t), rel=1e-10)

    def test_reverse_hazard_domain(self):
        with pytest.raises(DomainError):
            Ixgd(1).reverse_hazard(0.0)


class TestQuantile:
    @pytest.mark.parametrize("theta", [0.1, 1.0, 10.0])
    def test_round_trip(self, theta):
        p = np.linspace(0.01, 0.99, 99)
        d = Ixgd(theta)
        np.testing.assert_allclose(d.cdf(d.quantile(p)), p, atol=1e-10, rtol=0)

    def test_inverse_of_cdf_example(self):
        assert Ixgd(2).quantile(CDF_2_1) == pytest.approx(1.0, rel=1e-10)
        # the rounded probability in the design notes lands close to 1 as well
        assert Ixgd(2).quantile(0.315805) == pytest.approx(1.0, abs=1e-3)

    def test_extreme_upper(self):
        d = Ixgd(1)
        x = d.quantile(1 - 1e-6)
        assert math.isfinite(x)
        assert d.cdf(x) >= 1 - 2e-6

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, math.nan])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            Ixgd(1).quantile(p)


class TestSampler:
    def test_deterministic(self):
        assert Ixgd(1).sample(1, seed=99)[0] == Ixgd(1).sample(1, seed=99)[0]
        np.testing.assert_array_equal(Ixgd(3).sample(50, 5), Ixgd(3).sample(50, 5))

    def test_positive(self):
        assert (Ixgd(0.3).sample(1000, 1) > 0).all()

    @pytest.mark.parametrize("bad", [0, -1, 2.5, True])
    def test_bad_n(self, bad):
        with pytest.raises(DomainError):
            Ixgd(1).sample(bad, 1)

    def test_ks_distance(self):
        n = 100_000
        x = Ixgd(1).sample(n, seed=2024)
        d = stats.kstest(x, Ixgd(1).cdf).statistic
        assert d < 1.36 / math.sqrt(n) * 1.5

    def test_reciprocal_mean(self):
        n = 100_000
        y = 1.0 / Ixgd(1).sample(n, seed=7)
        se = y.std(ddof=1) / math.sqrt(n)
        assert abs(y.mean() - 2.0) < 3 * se

    def test_parent_sampler_matches_parent_cdf(self):
        y = Xgd(1.5).sample(20_000, seed=3)
        assert stats.kstest(y, Xgd(1.5).cdf).pvalue > 0.01


class TestMoments:
    @pytest.mark.parametrize("theta", [0.1, 1.0, 7.0])
    def test_raw_moment_zero(self, theta):
        assert Ixgd(theta).raw_moment(0) == pytest.approx(1.0, rel=1e-14)

    def test_raw_moment_half(self):
        # 1/2 Gamma(1/2) + 1/4 Gamma(5/2) = 1.2185620224975...
        assert Ixgd(1).raw_moment(0.5) == pytest.approx(1.2185620224975423, rel=1e-13)

    @pytest.mark.parametrize("theta,r", [(1.0, 0.5), (0.5, 0.25), (3.0, -0.5), (2.0, -2.5), (0.7, 0.9)])
    def test_raw_moment_quadrature(self, theta, r):
        d = Ixgd(theta)
        assert d.raw_moment(r) == pytest.approx(quad_pos(lambda x: x**r * d.pdf(x)), rel=1e-6)

    @pytest.mark.parametrize("r", [1, 1.5, 3])
    def test_raw_moment_nonexistent(self, r):
        with pytest.raises(MomentNotFiniteError):
            Ixgd(1).raw_moment(r)

    def test_negative_raw_moment_is_inverse_moment(self):
        d = Ixgd(1.7)
        for r in (1, 2, 3, 4):
            assert d.raw_moment(-r) == pytest.approx(d.inverse_moment(r), rel=1e-12)

    def test_inverse_moment_values(self):
        assert Ixgd(1).inverse_moment(1) == 2.0
        assert Ixgd(2).inverse_moment(1) == pytest.approx(5 / 6, rel=1e-15)
        assert Ixgd(1).inverse_moment(2) == pytest.approx(7.0, rel=1e-15)

    @pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_inverse_moment_quadrature(self, theta, r):
        d = Ixgd(theta)
        assert d.inverse_moment(r) == pytest.approx(quad_pos(lambda x: x**-r * d.pdf(x)), rel=1e-8)

    @pytest.mark.parametrize("r", [0, 5, 1.5, -1])
    def test_inverse_moment_domain(self, r):
        with pytest.raises(DomainError):
            Ixgd(1).inverse_moment(r)

    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_harmonic_mean_formula(self, theta):
        d = Ixgd(theta)
        assert d.reciprocal_mean() == pytest.approx(d.inverse_moment(1), rel=1e-12)
        assert d.harmonic_mean() * d.reciprocal_mean() == pytest.approx(1.0)


class TestStochasticOrder:
    @settings(max_examples=60)
    @given(
        st.floats(min_value=0.05, max_value=20),
        st.floats(min_value=0.05, max_value=20),
    )
    def test_likelihood_ratio_order(self, a, b):
        if abs(a - b) < 1e-3 * max(a, b):
            return
        big, small = max(a, b), min(a, b)
        x = np.geomspace(0.05, 50, 400)
        ratio = Ixgd(big).logpdf(x) - Ixgd(small).logpdf(x)
        # larger theta is larger in likelihood-ratio order, hence stochastically larger
        assert np.all(np.diff(ratio) > 0)
        assert np.all(Ixgd(big).cdf(x) <= Ixgd(small).cdf(x))


def binomial_tail(F, n, r):
    return math.fsum(math.comb(n, j) * F**j * (1 - F) ** (n - j) for j in range(r, n + 1))


class TestOrderStatistics:
    def test_spec_validation(self):
        for n, r in [(0, 1), (3, 0), (3, 4)]:
            with pytest.raises(DomainError):
                OrderSpec(n, r)
        with pytest.raises(DomainError):
            OrderSpec(MAX_ORDER_N + 1, 1)

    def test_single_observation(self):
        d = Ixgd(1.3)
        x = np.array([0.2, 1.0, 4.0])
        np.testing.assert_allclose(d.order_stat_pdf(OrderSpec(1, 1), x), d.pdf(x), rtol=1e-14)

    def test_maximum_pdf(self):
        d = Ixgd(1)
        expected = 3 * d.cdf(2.0) ** 2 * d.pdf(2.0)
        assert d.order_stat_pdf(OrderSpec(3, 3), 2.0) == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(0.16215886333540979, rel=1e-13)

    def test_pdf_normalisation(self):
        d = Ixgd(1)
        spec = OrderSpec(5, 2)
        assert quad_pos(lambda x: d.order_stat_pdf(spec, x)) == pytest.approx(1.0, abs=1e-6)

    def test_min_max_cdf(self):
        d = Ixgd(1)
        x = np.array([0.3, 1.0, 3.0])
        F = d.cdf(x)
        np.testing.assert_allclose(d.order_stat_cdf(OrderSpec(4, 1), x), 1 - (1 - F) ** 4, atol=1e-13)
        np.testing.assert_allclose(d.order_stat_cdf(OrderSpec(4, 4), x), F**4, atol=1e-13)

    def test_cdf_example(self):
        d = Ixgd(0.5)
        assert d.order_stat_cdf(OrderSpec(6, 3), 1.7) == pytest.approx(
            binomial_tail(d.cdf(1.7), 6, 3), abs=1e-10
        )

    def test_cdf_matches_binomial_tail_everywhere(self):
        rng = np.random.default_rng(11)
        for _ in range(150):
            theta = float(np.exp(rng.uniform(np.log(0.05), np.log(20))))
            x = float(np.exp(rng.uniform(np.log(0.01), np.log(100))))
            n = int(rng.integers(1, 9))
            r = int(rng.integers(1, n + 1))
            d = Ixgd(theta)
            got = d.order_stat_cdf(OrderSpec(n, r), x)
            assert abs(got - binomial_tail(d.cdf(x), n, r)) <= 1e-10

    def test_pdf_is_derivative_of_cdf(self):
        d = Ixgd(2.0)
        spec = OrderSpec(7, 4)
        x = np.geomspace(0.3, 30, 15)
        h = x * 1e-5
        fd = (d.order_stat_cdf(spec, x + h) - d.order_stat_cdf(spec, x - h)) / (2 * h)
        np.testing.assert_allclose(d.order_stat_pdf(spec, x), fd, rtol=1e-5, atol=1e-10)

    def test_pdf_nonnegative(self):
        d = Ixgd(1)
        x = np.geomspace(1e-2, 1e4, 200)
        assert (d.order_stat_pdf(OrderSpec(12, 3), x) >= 0).all()
