import math

import numpy as np
import pytest
from scipy import stats

from corankvol.applications import (PencilCount, count_real_roots_pencil,
                                    expected_betti_leading, expected_pencil_real_roots,
                                    expected_singular_points, mc_pencil_experiment,
                                    surface_singularity_report)
from corankvol.closed_form import sym_volume_ratio
from corankvol.rmt import sample_goe

SEED = 1618


def bisection_root_count(Q0, Q1, lo=-1e4, hi=1e4, base_grid=4096):
    """Independent root counter: sign changes of det(Q0 + t Q1) on a dense
    grid with adaptive refinement near each sign change.  No companion
    matrices, no Sturm chains."""
    def p(t):
        return np.linalg.det(Q0 + t * Q1)

    # tan-spaced grid covers large |t| without favoring the origin
    theta = np.linspace(math.atan(lo), math.atan(hi), base_grid)
    ts = np.tan(theta)
    vals = np.array([p(t) for t in ts])
    signs = np.sign(vals)
    count = 0
    for i in range(len(ts) - 1):
        if signs[i] == 0.0:
            continue
        if signs[i] * signs[i + 1] < 0:
            count += 1
    return count


class TestExpectedFormulas:
    def test_singular_points_n3(self):
        assert expected_singular_points(3).value == pytest.approx(1.0, rel=1e-12)

    def test_singular_points_matches_example_branch_ratio(self):
        # identical to the mu=2 symmetric stratum volume under the printed
        # constant; the ball branch is 2/3 of it
        for n in range(3, 100, 2):
            lhs = expected_singular_points(n).ln_value
            rhs = sym_volume_ratio(n, 2, constant="example").value.ln_value
            assert abs(lhs - rhs) < 1e-9

    def test_singular_points_asymptote(self):
        n = 1001
        ratio = expected_singular_points(n).value / n ** 1.5
        assert ratio == pytest.approx(math.sqrt(2 / (9 * math.pi)), rel=0.01)

    def test_singular_points_even_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            expected_singular_points(4)

    def test_pencil_roots_small_n(self):
        assert expected_pencil_real_roots(2).value == pytest.approx(math.sqrt(2), rel=1e-12)
        # 1x1 pencils have exactly one projective root, but the stratum
        # formula evaluates below 1: the degenerate boundary case
        assert expected_pencil_real_roots(1).value == pytest.approx(0.9003, rel=1e-3)

    def test_pencil_roots_asymptote(self):
        n = 100_000
        assert expected_pencil_real_roots(n).value / math.sqrt(n) == pytest.approx(
            2 / math.sqrt(math.pi), rel=1e-3)

    def test_betti_leading(self):
        assert expected_betti_leading(4) == pytest.approx(4 + 4 / math.sqrt(math.pi), rel=1e-12)
        assert expected_betti_leading(100) == pytest.approx(100 + 20 / math.sqrt(math.pi), rel=1e-12)
        for n in (1, 7, 50):
            assert (expected_betti_leading(n) - n) / math.sqrt(n) == pytest.approx(
                2 / math.sqrt(math.pi), rel=1e-12)

    def test_surface_report(self):
        report = surface_singularity_report(3)
        assert report["complex_count"] == 4
        assert report["expected_real"].value == pytest.approx(1.0, rel=1e-12)


class TestCountRealRoots:
    def test_split_diagonal_pencil(self):
        # det(diag(1,-1) + t I) = (1+t)(t-1): two real roots
        res = count_real_roots_pencil(np.diag([1.0, -1.0]), np.eye(2))
        assert res == PencilCount(n=2, real_roots=2, degenerate=False)

    def test_swap_pencil(self):
        # det([[0,1],[1,0]] + t I) = t^2 - 1: two real roots
        res = count_real_roots_pencil(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(2))
        assert res.real_roots == 2 and not res.degenerate

    def test_definite_q1_all_real(self):
        # with Q1 positive definite all generalized eigenvalues are real
        rng = np.random.default_rng(0)
        for _ in range(20):
            A = sample_goe(4, rng)
            B = sample_goe(4, rng)
            Q1 = B @ B.T + 0.5 * np.eye(4)
            res = count_real_roots_pencil(A, Q1)
            assert res.real_roots == 4

    def test_singular_q1_flagged_degenerate(self):
        Q1 = np.diag([1.0, 0.0])
        res = count_real_roots_pencil(np.eye(2), Q1)
        assert res.degenerate

    def test_multiple_root_flagged_degenerate(self):
        # det(-I + t I) = (t-1)^n: a maximally multiple root
        res = count_real_roots_pencil(-np.eye(3), np.eye(3))
        assert res.degenerate

    def test_parity_invariant(self):
        rng = np.random.default_rng(1)
        for n in (2, 3, 5, 8):
            for _ in range(50):
                res = count_real_roots_pencil(sample_goe(n, rng), sample_goe(n, rng))
                if not res.degenerate:
                    assert res.real_roots % 2 == n % 2
                    assert 0 <= res.real_roots <= n

    def test_orthogonal_invariance_exact(self):
        rng = np.random.default_rng(2)
        n = 5
        O = stats.ortho_group.rvs(n, random_state=7)
        for _ in range(10):
            Q0, Q1 = sample_goe(n, rng), sample_goe(n, rng)
            a = count_real_roots_pencil(Q0, Q1)
            b = count_real_roots_pencil(O @ Q0 @ O.T, O @ Q1 @ O.T)
            assert a.real_roots == b.real_roots

    def test_scale_invariance_exact(self):
        rng = np.random.default_rng(3)
        Q0, Q1 = sample_goe(4, rng), sample_goe(4, rng)
        base = count_real_roots_pencil(Q0, Q1).real_roots
        for c in (0.125, -2.0, 17.0):
            assert count_real_roots_pencil(c * Q0, c * Q1).real_roots == base

    def test_discriminant_oracle_2x2(self):
        # p(t) = det(Q0 + t Q1) is quadratic: root count from the discriminant
        rng = np.random.default_rng(4)
        for _ in range(1000):
            Q0, Q1 = sample_goe(2, rng), sample_goe(2, rng)
            a = np.linalg.det(Q1)
            b = Q0[0, 0] * Q1[1, 1] + Q1[0, 0] * Q0[1, 1] - 2 * Q0[0, 1] * Q1[0, 1]
            c = np.linalg.det(Q0)
            disc = b * b - 4 * a * c
            res = count_real_roots_pencil(Q0, Q1)
            if res.degenerate:
                continue
            assert res.real_roots == (2 if disc > 0 else 0)

    def test_sturm_vs_bisection_oracle(self):
        # a thousand random instances at n <= 8 against the grid counter
        rng = np.random.default_rng(5)
        trials = {n: 0 for n in (2, 3, 5, 8)}
        for n in trials:
            count = 300 if n <= 5 else 150
            for _ in range(count):
                Q0, Q1 = sample_goe(n, rng), sample_goe(n, rng)
                res = count_real_roots_pencil(Q0, Q1)
                if res.degenerate:
                    continue
                assert res.real_roots == bisection_root_count(Q0, Q1), (n, Q0, Q1)
                trials[n] += 1
        assert all(v > 0 for v in trials.values())

    def test_sturm_vs_generalized_eigensolver(self):
        # LAPACK route: real eigenvalues of -Q1^{-1} Q0
        rng = np.random.default_rng(6)
        for n in (10, 20):
            for _ in range(40):
                Q0, Q1 = sample_goe(n, rng), sample_goe(n, rng)
                res = count_real_roots_pencil(Q0, Q1)
                if res.degenerate:
                    continue
                ev = np.linalg.eigvals(np.linalg.solve(Q1, -Q0))
                ref = int(np.sum(np.abs(ev.imag) < 1e-8 * np.maximum(1.0, np.abs(ev.real))))
                assert res.real_roots == ref

    def test_exact_mode_matches_float(self):
        rng = np.random.default_rng(7)
        for n in (2, 4, 6):
            for _ in range(10):
                Q0, Q1 = sample_goe(n, rng), sample_goe(n, rng)
                a = count_real_roots_pencil(Q0, Q1)
                b = count_real_roots_pencil(Q0, Q1, exact=True)
                assert a.real_roots == b.real_roots

    def test_shape_validation(self):
        with pytest.raises(ValueError, match="square"):
            count_real_roots_pencil(np.eye(3), np.eye(2))


class TestPencilExperiment:
    def test_n1_every_sample_has_one_root(self):
        res = mc_pencil_experiment(1, 2_000, seed=SEED)
        assert res.estimate.mean == 1.0
        assert res.estimate.stderr == 0.0
        assert res.degenerate == 0

    def test_n2_matches_sqrt2(self):
        res = mc_pencil_experiment(2, 20_000, seed=SEED)
        assert abs(res.estimate.mean - math.sqrt(2)) <= 3 * res.estimate.stderr
        assert res.convention == "projective"

    def test_n5_matches_formula(self):
        res = mc_pencil_experiment(5, 10_000, seed=SEED)
        assert abs(res.estimate.mean - res.expected) <= 3 * res.estimate.stderr
        assert res.convention == "projective"

    def test_reproducible(self):
        a = mc_pencil_experiment(3, 2_000, seed=11)
        b = mc_pencil_experiment(3, 2_000, seed=11)
        assert a.estimate == b.estimate
