import math

import pytest

from corankvol.asymptotics import (fit_exponent, square_root_phenomenon,
                                   verify_growth)
from corankvol.closed_form import SpaceKind
from corankvol.specfun import LogValue


class TestFitExponent:
    def test_pure_power(self):
        pairs = [(n, LogValue(2.0 * math.log(n))) for n in (10, 20, 40, 80, 160)]
        fit = fit_exponent(pairs)
        assert fit.exponent == pytest.approx(2.0, abs=1e-9)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_constant_data(self):
        pairs = [(n, LogValue(1.234)) for n in (10, 20, 40, 80, 160)]
        assert fit_exponent(pairs).exponent == pytest.approx(0.0, abs=1e-9)

    def test_log_correction_tolerance(self):
        # n^3 / ln n over [100, 1000] fits an exponent slightly below 3
        pairs = [(n, LogValue(3 * math.log(n) - math.log(math.log(n))))
                 for n in (100, 200, 400, 700, 1000)]
        e = fit_exponent(pairs).exponent
        assert 2.8 < e < 3.0

    def test_needs_five_points(self):
        with pytest.raises(ValueError, match="5"):
            fit_exponent([(10, LogValue(1.0))] * 4)

    def test_needs_increasing_n(self):
        pairs = [(n, LogValue(float(n))) for n in (10, 20, 15, 40, 80)]
        with pytest.raises(ValueError, match="increasing"):
            fit_exponent(pairs)


class TestVerifyGrowth:
    def test_real_mu1_exponent_and_constant(self):
        report = verify_growth(SpaceKind.REAL_GENERAL, 1, n_min=100, n_max=2000)
        assert report.passed
        assert report.exponent == pytest.approx(0.5, abs=0.05)
        assert report.constant_at_nmax == pytest.approx(math.sqrt(math.pi / 2), rel=0.01)
        assert report.constant_normalized

    def test_sym_mu2_constant_under_example_branch(self):
        report = verify_growth(SpaceKind.REAL_SYMMETRIC, 2, n_min=101, n_max=2001,
                               constant="example")
        assert report.passed
        assert report.exponent == pytest.approx(1.5, abs=0.05)
        assert report.constant_at_nmax == pytest.approx(math.sqrt(2 / (9 * math.pi)), rel=0.01)
        # every admissible n keeps n - mu odd
        assert all((n - 2) % 2 == 1 for n in report.ns)

    def test_complex_mu2(self):
        report = verify_growth(SpaceKind.COMPLEX_GENERAL, 2, n_min=50, n_max=500)
        assert report.passed
        assert report.exponent == pytest.approx(4.0, abs=0.05)

    def test_placeholder_constant_flagged(self):
        report = verify_growth(SpaceKind.REAL_GENERAL, 2, n_min=100, n_max=1000)
        assert report.passed  # exponent is constant-independent
        assert not report.constant_normalized

    @pytest.mark.parametrize("kind,mu,target", [
        (SpaceKind.REAL_GENERAL, 1, 0.5),
        (SpaceKind.REAL_GENERAL, 2, 2.0),
        (SpaceKind.REAL_GENERAL, 3, 4.5),
        (SpaceKind.REAL_SYMMETRIC, 1, 0.5),
        (SpaceKind.REAL_SYMMETRIC, 2, 1.5),
        (SpaceKind.REAL_SYMMETRIC, 3, 3.0),
        (SpaceKind.COMPLEX_GENERAL, 1, 1.0),
        (SpaceKind.COMPLEX_GENERAL, 2, 4.0),
        (SpaceKind.COMPLEX_GENERAL, 3, 9.0),
        (SpaceKind.COMPLEX_SYMMETRIC, 1, 1.0),
        (SpaceKind.COMPLEX_SYMMETRIC, 2, 3.0),
        (SpaceKind.COMPLEX_SYMMETRIC, 3, 6.0),
    ])
    def test_exponent_matrix(self, kind, mu, target):
        report = verify_growth(kind, mu, n_min=200, n_max=2000)
        assert report.target == target
        assert report.passed, (report.exponent, target)


class TestSquareRootPhenomenon:
    @pytest.mark.parametrize("mu", [1, 2, 3])
    @pytest.mark.parametrize("symmetric", [False, True])
    def test_real_is_half_complex(self, mu, symmetric):
        rel = square_root_phenomenon(mu, symmetric, n_min=200, n_max=2000)
        assert rel.passed, rel
