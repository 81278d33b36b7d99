"""Vandermonde-type integrals over the unit ball.

Two families of structure constants enter the volume formulas:

    I_mu   = pi^(mu/2) 2^(-mu^2/2) * integral over B(0,1) in the positive
             orthant of prod_{i<j} |x_i^2 - x_j^2|
    I_1mu  = 2^(-mu) * integral over the full ball B(0,1) in R^mu of
             prod_{i<j} |x_i - x_j|

Only small-mu values are known in closed form; the rest are estimated by
Monte Carlo with a deterministic midpoint-grid quadrature oracle (mu <= 3)
as the independent cross-check.

The mu=2 symmetric constant is contested: the worked determinantal-surface
example in the literature prints sqrt(2)/2, but its polar-coordinate
intermediate drops the Jacobian factor r; the defining integral evaluates
to sqrt(2)/3.  Both candidates are exported and `arbitrate_I12` lets the
numerics decide.  Nothing in this package silently adopts either value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .montecarlo import MCEstimate, estimate_from_sums, run_batches

I1_EXACT = math.sqrt(math.pi / 2.0)  # I_1: empty Vandermonde product, pi^(1/2)/2^(1/2)
I11_EXACT = 1.0                      # I_{1,1}: 2^-1 * length of [-1,1]
I12_EXAMPLE = math.sqrt(2.0) / 2.0   # printed value in the worked example
I12_BALL = math.sqrt(2.0) / 3.0      # value of the defining ball integral

MIN_SAMPLES = 100
_QUADRATURE_MAX_MU = 3


def unit_ball_volume(dim: int) -> float:
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)


def sample_unit_ball(dim: int, rng: np.random.Generator, size: int | None = None,
                     positive_orthant: bool = False, coord_order=None) -> np.ndarray:
    """Uniform points in the unit ball of R^dim, shape (size, dim).

    Gaussian direction times U^(1/dim) radius; the positive orthant is
    reached by taking absolute values, which is measure-preserving because
    the ball is sign-symmetric.  Rejection sampling is avoided on purpose:
    its acceptance rate decays like the ball/cube volume ratio.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    m = 1 if size is None else size
    g = rng.standard_normal((m, dim))
    if coord_order is not None:
        g = g[:, list(coord_order)]
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    radii = rng.random((m, 1)) ** (1.0 / dim)
    x = g / norms * radii
    if positive_orthant:
        np.abs(x, out=x)
    return x[0] if size is None else x


def vandermonde_abs(x: np.ndarray, squares: bool = False) -> np.ndarray:
    """prod_{i<j} |x_i - x_j| (or of the squared coordinates) along the last axis."""
    x = np.atleast_2d(x)
    cols = x * x if squares else x
    out = np.ones(x.shape[0])
    for i, j in combinations(range(x.shape[1]), 2):
        out = out * np.abs(cols[:, i] - cols[:, j])
    return out


def _mc_ball_vandermonde(mu, samples, seed, squares, positive_orthant, prefactor_ln,
                         workers=None, antithetic=False, coord_order=None):
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples={samples} is below the statistical floor of {MIN_SAMPLES}")
    domain_volume = unit_ball_volume(mu) / (2 ** mu if positive_orthant else 1)
    scale = domain_volume * math.exp(prefactor_ln)
    signs = np.array(list(product((1.0, -1.0), repeat=mu))) if antithetic else None

    def batch(rng, count):
        x = sample_unit_ball(mu, rng, size=count, positive_orthant=positive_orthant,
                             coord_order=coord_order)
        if signs is None:
            f = vandermonde_abs(x, squares=squares)
        else:
            f = np.zeros(count)
            for s in signs:
                f += vandermonde_abs(x * s, squares=squares)
            f /= len(signs)
        f = f * scale
        return float(f.sum()), float((f * f).sum()), count

    parts = run_batches(samples, seed, batch, workers=workers)
    return estimate_from_sums(sum(p[0] for p in parts), sum(p[1] for p in parts),
                              sum(p[2] for p in parts), seed)


def I_mu(mu: int, samples: int = 1_000_000, seed: int = 0,
         workers: int | None = None) -> MCEstimate:
    """Monte Carlo estimate of I_mu; mu=1 is returned exactly with stderr 0."""
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples={samples} is below the statistical floor of {MIN_SAMPLES}")
    if mu == 1:
        return MCEstimate(mean=I1_EXACT, stderr=0.0, samples=samples, seed=seed)
    prefactor_ln = (mu / 2.0) * math.log(math.pi) - (mu * mu / 2.0) * math.log(2.0)
    return _mc_ball_vandermonde(mu, samples, seed, squares=True, positive_orthant=True,
                                prefactor_ln=prefactor_ln, workers=workers)


def I_1mu(mu: int, samples: int = 1_000_000, seed: int = 0, workers: int | None = None,
          antithetic: bool = False, coord_order=None) -> MCEstimate:
    """Monte Carlo estimate of I_{1,mu}; mu=1 is returned exactly with stderr 0."""
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples={samples} is below the statistical floor of {MIN_SAMPLES}")
    if mu == 1:
        return MCEstimate(mean=I11_EXACT, stderr=0.0, samples=samples, seed=seed)
    return _mc_ball_vandermonde(mu, samples, seed, squares=False, positive_orthant=False,
                                prefactor_ln=-mu * math.log(2.0), workers=workers,
                                antithetic=antithetic, coord_order=coord_order)


def ball_quadrature(mu: int, points: int, squares: bool = False,
                    positive_orthant: bool = False) -> float:
    """Midpoint tensor-grid quadrature of the Vandermonde integrand over the ball.

    Deterministic anti-hallucination reference for mu <= 3; the grid never
    places a node exactly on the sphere, so the ball indicator is unambiguous.
    """
    if not (1 <= mu <= _QUADRATURE_MAX_MU):
        raise ValueError(f"quadrature oracle covers 1 <= mu <= {_QUADRATURE_MAX_MU}, got {mu}")
    if points < 2:
        raise ValueError("need at least 2 points per axis")
    lo = 0.0 if positive_orthant else -1.0
    h = (1.0 - lo) / points
    axis = lo + h * (np.arange(points) + 0.5)
    cell = h ** mu
    total = 0.0
    if mu == 1:
        x = axis[:, None]
        inside = np.abs(axis) <= 1.0
        f = vandermonde_abs(x, squares=squares)
        total = float(f[inside].sum()) * cell
        return total
    # chunk over the leading axis to bound memory
    rest = np.stack([g.ravel() for g in np.meshgrid(*([axis] * (mu - 1)), indexing="ij")], axis=1)
    rest_sq = (rest * rest).sum(axis=1)
    for a in axis:
        r2 = a * a + rest_sq
        inside = r2 <= 1.0
        if not inside.any():
            continue
        pts = np.concatenate([np.full((inside.sum(), 1), a), rest[inside]], axis=1)
        total += float(vandermonde_abs(pts, squares=squares).sum())
    return total * cell


def I_mu_quadrature(mu: int, points: int = 2000) -> float:
    if mu == 1:
        return I1_EXACT
    prefactor = math.exp((mu / 2.0) * math.log(math.pi) - (mu * mu / 2.0) * math.log(2.0))
    return prefactor * ball_quadrature(mu, points, squares=True, positive_orthant=True)


def I_1mu_quadrature(mu: int, points: int = 2000) -> float:
    if mu == 1:
        return I11_EXACT
    return 2.0 ** (-mu) * ball_quadrature(mu, points, squares=False, positive_orthant=False)


@dataclass(frozen=True)
class I12Arbitration:
    """Outcome of the I_{1,2} branch arbitration."""

    mc: MCEstimate
    quadrature: float
    example_value: float
    ball_value: float
    mc_quadrature_agree: bool
    supported: str  # "ball" or "example"

    def statement(self) -> str:
        lines = [
            f"I_1,2 Monte Carlo: {self.mc.mean:.6f} +- {self.mc.stderr:.2g} "
            f"({self.mc.samples} samples, seed {self.mc.seed})",
            f"I_1,2 quadrature oracle: {self.quadrature:.6f}",
            f"candidates: printed example sqrt(2)/2 = {self.example_value:.6f}, "
            f"ball integral sqrt(2)/3 = {self.ball_value:.6f}",
            "MC and quadrature agree within 3 stderr"
            if self.mc_quadrature_agree else "MC and quadrature DISAGREE beyond 3 stderr",
            f"supported branch: {self.supported} "
            f"({'sqrt(2)/3' if self.supported == 'ball' else 'sqrt(2)/2'})",
        ]
        return "\n".join(lines)


def arbitrate_I12(samples: int = 10_000_000, seed: int = 0, points: int = 4000,
                  workers: int | None = None) -> I12Arbitration:
    """Estimate I_{1,2} by MC, cross-check against the quadrature oracle and
    report which closed-form candidate the numbers support."""
    mc = I_1mu(2, samples, seed=seed, workers=workers)
    quad = I_1mu_quadrature(2, points=points)
    agree = mc.compatible_with(quad, sigmas=3.0)
    dist_example = abs(mc.mean - I12_EXAMPLE)
    dist_ball = abs(mc.mean - I12_BALL)
    supported = "ball" if dist_ball <= dist_example else "example"
    return I12Arbitration(mc=mc, quadrature=quad, example_value=I12_EXAMPLE,
                          ball_value=I12_BALL, mc_quadrature_agree=agree,
                          supported=supported)
