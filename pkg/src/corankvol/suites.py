"""Named validation suites: every Monte Carlo oracle against its closed form.

Each suite returns a list of CheckResult rows; the CLI renders them as JSON
or CSV and exits nonzero if any check failed.  Sample counts default to
quick interactive sizes; the acceptance tests pass the full budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import applications, closed_form, geometry, rmt, structure_constants
from .closed_form import MatrixSpace, SpaceKind
from .specfun import ln_binomial


@dataclass(frozen=True)
class CheckResult:
    suite: str
    check: str
    estimate: float
    stderr: float
    expected: float
    tolerance: str
    passed: bool

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "check": self.check,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "estimate_provenance": "monte-carlo",
            "expected": self.expected,
            "expected_provenance": "closed-form",
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _check(suite, name, est, stderr, expected, sigmas=3.0, rel_slack=0.0):
    tol = sigmas * stderr + rel_slack * abs(expected)
    passed = abs(est - expected) <= tol
    desc = f"{sigmas:g}*stderr" + (f" + {rel_slack:.0%}" if rel_slack else "")
    return CheckResult(suite=suite, check=name, estimate=est, stderr=stderr,
                       expected=expected, tolerance=desc, passed=passed)


def suite_moments(samples: int = 100_000, seed: int = 0, workers=None) -> list[CheckResult]:
    """GOE |det|^mu Monte Carlo vs the odd-size closed form."""
    rows = []
    for k, mu in ((1, 1), (1, 2), (3, 1), (3, 2), (5, 2)):
        est = rmt.estimate_abs_det_moment(k, mu, samples, seed=seed, workers=workers)
        expected = closed_form.goe_abs_det_moment(k, mu).value
        rows.append(_check("moments", f"E|det GOE({k})|^{mu}",
                           est.mean, est.stderr, expected))
    return rows


def suite_selberg(samples: int = 100_000, seed: int = 0, workers=None) -> list[CheckResult]:
    """Selberg normalization integrals: MC/closed-form ratios should be 1."""
    rows = []
    for n in (1, 2, 3):
        est = rmt.selberg_mc_check(rmt.SpectrumKind.EIGENVALUES, n, samples,
                                   seed=seed, workers=workers)
        rows.append(_check("selberg", f"eigenvalue C1({n}) ratio", est.mean, est.stderr, 1.0))
    for n in (2, 3):
        est = rmt.selberg_mc_check(rmt.SpectrumKind.SINGULAR_VALUES, n, samples,
                                   seed=seed, workers=workers)
        rows.append(_check("selberg", f"singular-value C({n}) ratio", est.mean, est.stderr, 1.0))
    return rows


_SMALLBALL_GRID = (0.3, 0.2, 0.14, 0.1, 0.07, 0.05)


def _smallball_expected(kind: SpaceKind, n: int, mu: int) -> float:
    if kind is SpaceKind.REAL_GENERAL:
        g, _ = closed_form.real_g_limit(n, mu)
    else:
        constant = "ball" if mu == 2 else None
        g, _ = closed_form.sym_g_limit(n, mu, constant=constant)
    return math.exp(g.ln_value + ln_binomial(n, mu))


def suite_smallball(samples: int = 200_000, seed: int = 0, workers=None) -> list[CheckResult]:
    """Small-ball probability limits vs C(n, mu) times the closed-form g-limit."""
    rows = []
    configs = (
        (SpaceKind.REAL_GENERAL, 3, 1),
        (SpaceKind.REAL_SYMMETRIC, 4, 1),
        (SpaceKind.REAL_SYMMETRIC, 3, 2),
    )
    for kind, n, mu in configs:
        space = MatrixSpace(kind, n)
        fit = rmt.estimate_limit_ratio(space, mu, _SMALLBALL_GRID, samples,
                                       seed=seed, workers=workers)
        expected = _smallball_expected(kind, n, mu)
        rows.append(_check("smallball", f"{kind.value} n={n} mu={mu} intercept",
                           fit.intercept.mean, fit.intercept.stderr, expected,
                           rel_slack=0.05))
        rows.append(CheckResult(suite="smallball",
                                check=f"{kind.value} n={n} mu={mu} slope",
                                estimate=fit.slope, stderr=0.0,
                                expected=float(fit.codim), tolerance="+-0.1",
                                passed=abs(fit.slope - fit.codim) <= 0.1))
    return rows


def suite_tube(samples: int = 200_000, seed: int = 0, workers=None) -> list[CheckResult]:
    """Tube-volume extrapolation vs the closed-form normalized volumes."""
    rows = []
    configs = (
        (SpaceKind.REAL_GENERAL, 2, 1, closed_form.real_volume_ratio(2, 1).value.value),
        (SpaceKind.REAL_SYMMETRIC, 2, 1, closed_form.sym_volume_ratio(2, 1).value.value),
    )
    for kind, n, mu, expected in configs:
        space = MatrixSpace(kind, n)
        est = geometry.intrinsic_volume_via_tube(space, mu, samples, seed=seed,
                                                 workers=workers)
        rows.append(_check("tube", f"{kind.value} n={n} mu={mu} volume",
                           est.estimate.mean, est.estimate.stderr, expected,
                           rel_slack=0.05))
    return rows


def suite_conefactor(samples: int = 300_000, seed: int = 0, eps: float = 0.02,
                     workers=None) -> list[CheckResult]:
    """Empirical cone/cylinder probability ratio vs 2^(c/2) Gamma(N/2)/Gamma((N-c)/2)."""
    space = MatrixSpace(SpaceKind.REAL_SYMMETRIC, 2)
    res = geometry.cone_cylinder_mc(space, 1, eps, samples, seed=seed, workers=workers)
    return [_check("conefactor", f"sym n=2 mu=1 cone/cylinder at eps={eps}",
                   res.ratio.mean, res.ratio.stderr, res.closed.value,
                   rel_slack=0.10)]


def suite_pencil(samples: int = 2_000, seed: int = 0, ns=(5, 10), workers=None) -> list[CheckResult]:
    """Mean pencil root counts vs the integral-geometry prediction."""
    rows = []
    for n in ns:
        exp_result = applications.mc_pencil_experiment(n, samples, seed=seed,
                                                       workers=workers)
        rows.append(_check("pencil", f"mean real roots n={n} ({exp_result.convention})",
                           exp_result.estimate.mean, exp_result.estimate.stderr,
                           exp_result.expected))
    return rows


def suite_constants(samples: int = 1_000_000, seed: int = 0, points: int = 2000,
                    workers=None) -> list[CheckResult]:
    """Structure-constant MC vs the deterministic quadrature oracle."""
    rows = []
    i2 = structure_constants.I_mu(2, samples, seed=seed, workers=workers)
    rows.append(_check("constants", "I_2 MC vs quadrature", i2.mean, i2.stderr,
                       structure_constants.I_mu_quadrature(2, points)))
    arb = structure_constants.arbitrate_I12(samples=samples, seed=seed,
                                            points=points, workers=workers)
    rows.append(_check("constants", f"I_1,2 MC vs quadrature (supports {arb.supported})",
                       arb.mc.mean, arb.mc.stderr, arb.quadrature))
    return rows


SUITES = {
    "smallball": suite_smallball,
    "tube": suite_tube,
    "moments": suite_moments,
    "selberg": suite_selberg,
    "conefactor": suite_conefactor,
    "pencil": suite_pencil,
    "constants": suite_constants,
}
