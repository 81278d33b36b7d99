"""Tube geometry of the corank strata.

Distances to the corank-mu cone (generalized Eckart-Young), the fraction of
the sphere covered by the eps-tube, the cone/cylinder comparison factor,
and the Monte Carlo route that recovers the normalized stratum volume from
tube fractions by extrapolating eps -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_form import MatrixSpace, SpaceKind
from .montecarlo import MCEstimate, fraction_estimator, run_batches
from .rmt import (InsufficientSamplesError, corank_statistics, intercept_from_counts,
                  jacobi_eigh, small_ball_counts)
from .specfun import LN_2, LogValue, ln_gamma, ln_sphere_volume

DEFAULT_EPS_GRID = tuple(np.geomspace(0.3, 0.05, 6))


class RegressionError(RuntimeError):
    pass


@dataclass(frozen=True)
class TubeQuery:
    """One tube question: which space, which corank, which radius.

    Radii are capped at 1: the cone condition dist^2 <= eps^2 ||Q||^2 is
    vacuous beyond that, and every eps -> 0 statement lives well below it.
    """

    space: MatrixSpace
    mu: int
    eps: float

    def __post_init__(self):
        self.space.check_mu(self.mu)
        if not (0.0 < self.eps <= 1.0):
            raise ValueError(f"eps must be in (0, 1], got {self.eps}")


def dist_to_corank(Q: np.ndarray, mu: int, space: MatrixSpace) -> float:
    """Frobenius distance from Q to the cone of matrices with corank >= mu.

    General matrices: square root of the sum of the mu smallest squared
    singular values.  Symmetric matrices: the mu smallest squared
    eigenvalues -- the symmetric-constrained minimizer zeroes eigenvalues,
    not singular values, although the resulting distance value coincides.
    """
    Q = np.asarray(Q, dtype=float)
    space.check_mu(mu)
    if Q.shape != (space.n, space.n):
        raise ValueError(f"matrix shape {Q.shape} does not match space n={space.n}")
    if space.kind is SpaceKind.REAL_GENERAL:
        w = np.clip(jacobi_eigh(Q.T @ Q), 0.0, None)
        sq = w
    elif space.kind is SpaceKind.REAL_SYMMETRIC:
        lam = jacobi_eigh(Q)
        sq = np.sort(lam * lam)
    else:
        raise ValueError(f"distance is defined for the real spaces only, got {space.kind}")
    return float(math.sqrt(sq[:mu].sum()))


def tube_fraction(query: TubeQuery, samples: int, seed: int = 0,
                  workers: int | None = None) -> MCEstimate:
    """Fraction of the unit sphere inside the eps-tube of the corank cone.

    Estimated as P{dist^2 <= eps^2 ||Q||^2} over Gaussian samples; the
    indicator is 0-homogeneous, so the Gaussian measure and the uniform
    sphere measure agree and the estimate is scale-free by construction.
    """
    eps_sq = query.eps ** 2

    def hits(rng, count):
        T, norm_sq = corank_statistics(query.space, query.mu, rng, count)
        return int(np.count_nonzero(T <= eps_sq * norm_sq))

    return fraction_estimator(samples, seed, hits, workers=workers)


def cone_cylinder_factor(N: int, c: int) -> LogValue:
    """2^(c/2) Gamma(N/2) / Gamma((N-c)/2): the eps->0 ratio between the
    cone probability P{dist^2 <= eps^2 ||Q||^2} and the cylinder
    probability P{dist^2 <= eps^2}."""
    if not (0 < c < N):
        raise ValueError(f"need 0 < c < N, got N={N}, c={c}")
    return LogValue((c / 2.0) * LN_2 + ln_gamma(N / 2.0) - ln_gamma((N - c) / 2.0))


@dataclass(frozen=True)
class ConeCylinderCheck:
    cone: MCEstimate
    cylinder: MCEstimate
    ratio: MCEstimate
    closed: LogValue


def cone_cylinder_mc(space: MatrixSpace, mu: int, eps: float, samples: int,
                     seed: int = 0, workers: int | None = None) -> ConeCylinderCheck:
    """Joint estimate of cone and cylinder probabilities on common random
    numbers, with the per-batch ratio aggregated by batch means."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    space.check_mu(mu)
    eps_sq = eps * eps

    def batch(rng, count):
        T, norm_sq = corank_statistics(space, mu, rng, count)
        cone_hits = int(np.count_nonzero(T <= eps_sq * norm_sq))
        cyl_hits = int(np.count_nonzero(T <= eps_sq))
        return cone_hits, cyl_hits, count

    parts = run_batches(samples, seed, batch, workers=workers)
    cone_hits = np.array([p[0] for p in parts], dtype=float)
    cyl_hits = np.array([p[1] for p in parts], dtype=float)
    ns = np.array([p[2] for p in parts], dtype=float)
    total = ns.sum()
    if np.any(cyl_hits == 0):
        raise InsufficientSamplesError(
            f"a batch saw no cylinder hits at eps={eps}; increase samples "
            f"(pooled cylinder probability {cyl_hits.sum() / total:.3e})")

    def binom(hits):
        p = hits.sum() / total
        return MCEstimate(mean=p, stderr=math.sqrt(max(p * (1 - p), 0.0) / total),
                          samples=int(total), seed=seed)

    ratios = cone_hits / cyl_hits
    ratio = MCEstimate(mean=float(ratios.mean()),
                       stderr=float(ratios.std(ddof=1) / math.sqrt(len(ratios))),
                       samples=int(total), seed=seed)
    N = space.ambient_dim
    c = space.codim(mu)
    return ConeCylinderCheck(cone=binom(cone_hits), cylinder=binom(cyl_hits),
                             ratio=ratio, closed=cone_cylinder_factor(N, c))


@dataclass(frozen=True)
class TubeVolumeEstimate:
    """Normalized stratum volume recovered from tube fractions."""

    estimate: MCEstimate
    codim: int
    eps_grid: tuple
    fractions: tuple
    counts: tuple


def intrinsic_volume_via_tube(space: MatrixSpace, mu: int, samples: int,
                              eps_grid=None, seed: int = 0,
                              workers: int | None = None) -> TubeVolumeEstimate:
    """|Sigma^mu|/|S^(N-c-1)| from the eps -> 0 limit of tube fractions.

    Fits P{cone}(eps) = a eps^c (1 + b eps) on the grid -- the tube
    expansion guarantees exactly an O(eps^(c+1)) first correction -- and
    converts a into the normalized volume via
    a * |S^(N-1)| / (|S^(c-1)| |S^(N-c-1)|).
    """
    space.check_mu(mu)
    eps = np.asarray(DEFAULT_EPS_GRID if eps_grid is None else eps_grid, dtype=float)
    if eps.size < 4 or np.any(eps <= 0) or np.any(np.diff(eps) >= 0) or eps.max() > 0.5:
        raise ValueError("eps_grid must be >= 4 strictly decreasing points in (0, 0.5]")
    c = space.codim(mu)
    N = space.ambient_dim
    counts, ns = small_ball_counts(space, mu, eps, samples, seed=seed,
                                   workers=workers, cone=True)
    total = counts.sum(axis=0)
    n_total = int(ns.sum())
    if total[-1] == 0:
        per_eps = ", ".join(f"eps={e:g}: {int(t)} hits" for e, t in zip(eps, total))
        raise RegressionError(
            f"regression is ill-conditioned, the smallest radius saw no hits "
            f"({n_total} samples; {per_eps}); smaller eps needs samples growing "
            f"like eps^(-{c})")
    intercept = intercept_from_counts(counts, ns, eps, c, seed)
    ln_convert = (ln_sphere_volume(N - 1).ln_value - ln_sphere_volume(c - 1).ln_value
                  - ln_sphere_volume(N - c - 1).ln_value)
    convert = math.exp(ln_convert)
    estimate = MCEstimate(mean=intercept.mean * convert,
                          stderr=intercept.stderr * convert,
                          samples=intercept.samples, seed=seed)
    return TubeVolumeEstimate(estimate=estimate, codim=c, eps_grid=tuple(eps),
                              fractions=tuple(total / n_total),
                              counts=tuple(int(v) for v in total))
