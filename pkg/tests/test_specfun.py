import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gammaln

from corankvol.specfun import (LogValue, ln_binomial, ln_gamma, ln_gamma_ratio,
                               ln_sphere_volume)


class TestLnGamma:
    def test_trivial_values(self):
        assert ln_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
        assert ln_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-13)
        assert ln_gamma(10.0) == pytest.approx(math.log(362880.0), rel=1e-13)

    @pytest.mark.parametrize("x", [0.5, 0.77, 1.0, 2.5, 17.0, 123.456, 1e3, 1e4, 1e6])
    def test_against_library_oracle(self, x):
        # two independent oracles: C stdlib lgamma and scipy
        assert ln_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-13)
        assert ln_gamma(x) == pytest.approx(float(gammaln(x)), rel=1e-13, abs=1e-13)

    def test_vectorized(self):
        xs = np.array([0.5, 1.0, 2.0, 50.0])
        out = ln_gamma(xs)
        assert out.shape == xs.shape
        for x, v in zip(xs, out):
            assert v == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-13)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            ln_gamma(bad)

    def test_duplication_identity(self):
        # Gamma(x) Gamma(x+1/2) = 2^(1-2x) sqrt(pi) Gamma(2x)
        for x in np.arange(0.5, 50.5, 0.5):
            lhs = ln_gamma(x) + ln_gamma(x + 0.5)
            rhs = 0.5 * math.log(math.pi) + (1 - 2 * x) * math.log(2.0) + ln_gamma(2 * x)
            assert abs(lhs - rhs) < 1e-11

    @given(st.floats(min_value=0.5, max_value=1e4))
    def test_recurrence(self, x):
        assert abs(ln_gamma(x + 1.0) - ln_gamma(x) - math.log(x)) < 1e-12 * max(1.0, abs(ln_gamma(x)))


class TestLnGammaRatio:
    def test_trivial(self):
        assert ln_gamma_ratio(1.0, 1.0, 0.0) == pytest.approx(0.0, abs=1e-14)
        assert ln_gamma_ratio(2.0, 2.0, 1.0) == pytest.approx(math.log(3.0), rel=1e-13)

    def test_asymptotic_branch_matches_exact_at_large_z(self):
        n = 10 ** 6
        exact = ln_gamma_ratio(n / 2.0, 0.5, 0.0)
        asym = ln_gamma_ratio(n / 2.0, 0.5, 0.0, asymptotic=True)
        assert asym == pytest.approx(0.5 * math.log(n / 2.0), rel=1e-15)
        assert exact == pytest.approx(asym, rel=1e-6)

    def test_domain(self):
        with pytest.raises(ValueError):
            ln_gamma_ratio(1.0, -2.0, 0.0)


class TestLnBinomial:
    def test_trivial(self):
        assert ln_binomial(4, 2) == pytest.approx(math.log(6.0), rel=1e-13)
        assert ln_binomial(7, 0) == 0.0
        assert ln_binomial(7, 7) == 0.0

    def test_big_integer_oracle(self):
        exact = math.comb(100, 50)
        assert ln_binomial(100, 50) == pytest.approx(math.log(exact), rel=1e-12)

    @given(st.integers(min_value=0, max_value=300), st.integers(min_value=0, max_value=300))
    def test_matches_exact_comb(self, n, k):
        if k > n:
            with pytest.raises(ValueError):
                ln_binomial(n, k)
        else:
            assert ln_binomial(n, k) == pytest.approx(math.log(math.comb(n, k)), rel=1e-12, abs=1e-12)


class TestSphereVolume:
    def test_known_values(self):
        assert ln_sphere_volume(0).value == pytest.approx(2.0, rel=1e-13)
        assert ln_sphere_volume(1).value == pytest.approx(2 * math.pi, rel=1e-13)
        assert ln_sphere_volume(2).value == pytest.approx(4 * math.pi, rel=1e-13)

    def test_recursion(self):
        # |S^d| = 2 pi |S^(d-2)| / (d - 1)
        for d in range(2, 200):
            lhs = ln_sphere_volume(d).ln_value
            rhs = math.log(2 * math.pi) + ln_sphere_volume(d - 2).ln_value - math.log(d - 1.0)
            assert abs(lhs - rhs) < 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            ln_sphere_volume(-1)


class TestLogValue:
    @given(st.floats(min_value=1e-300, max_value=1e300),
           st.floats(min_value=1e-300, max_value=1e300))
    def test_mul_is_log_add(self, a, b):
        x = LogValue.from_value(a) * LogValue.from_value(b)
        assert x.ln_value == pytest.approx(math.log(a) + math.log(b), rel=1e-12, abs=1e-12)

    def test_div_and_pow(self):
        x = LogValue.from_value(8.0) / LogValue.from_value(2.0)
        assert x.value == pytest.approx(4.0, rel=1e-14)
        assert (LogValue.from_value(3.0) ** 2).value == pytest.approx(9.0, rel=1e-13)

    def test_overflow_is_flagged_infinity(self):
        assert LogValue(1e4).value == math.inf

    def test_from_value_domain(self):
        with pytest.raises(ValueError):
            LogValue.from_value(0.0)
        with pytest.raises(ValueError):
            LogValue.from_value(-3.0)
