"""Random-matrix samplers, a batched Jacobi eigensolver, and spectral
Monte Carlo estimators.

Scale convention: Ginibre entries are i.i.d. N(0,1); GOE matrices have
N(0,1) diagonal and N(0,1/2) off-diagonal entries.  These are exactly the
normalizations under which the singular-value density
C(n) exp(-|sigma|^2/2) prod|sigma_i^2-sigma_j^2| and the eigenvalue density
C1(n) exp(-|lambda|^2/2) prod|lambda_i-lambda_j| hold verbatim, so every
closed form in `closed_form` applies without rescaling.  Cone and sphere
normalized quantities are scale-free anyway; raw small-ball values are not,
which is why the convention is pinned here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import closed_form
from .closed_form import MatrixSpace, SpaceKind
from .montecarlo import (MCEstimate, estimate_from_sums, fraction_estimator,
                         run_batches)

_MAX_CHUNK = 1 << 18  # per-batch sub-chunk cap, bounds transient memory


class JacobiConvergenceError(RuntimeError):
    pass


class InsufficientSamplesError(RuntimeError):
    pass


class SpectrumKind(Enum):
    SINGULAR_VALUES = "singular"
    EIGENVALUES = "eigen"


@dataclass(frozen=True)
class Spectrum:
    """Ordered spectrum of one matrix with provenance.

    Singular values are nonnegative and ascending; eigenvalues are ascending
    with sign.  The sum of squares equals the squared Frobenius norm of the
    source matrix up to roundoff.
    """

    values: np.ndarray
    kind: SpectrumKind
    n: int
    source: str = "input"

    @property
    def sum_sq(self) -> float:
        return float(np.sum(self.values ** 2))


def sample_ginibre(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Real Ginibre matrices: i.i.d. standard normal entries, shape (size, n, n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    m = 1 if size is None else size
    out = rng.standard_normal((m, n, n))
    return out[0] if size is None else out


def sample_goe(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """GOE matrices: diagonal N(0,1), off-diagonal N(0,1/2), symmetric."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    m = 1 if size is None else size
    a = rng.standard_normal((m, n, n))
    out = 0.5 * (a + np.transpose(a, (0, 2, 1)))
    return out[0] if size is None else out


def jacobi_eigh(Q, tol: float = 1e-12, max_sweeps: int = 50, vectors: bool = False):
    """Cyclic Jacobi diagonalization of a symmetric matrix or a stack of them.

    Eigenvalues come back ascending per matrix; with vectors=True the
    rotation product V satisfies Q = V diag(w) V^T.  The sweep loop stops
    once every matrix has off-diagonal Frobenius norm below tol * ||Q||;
    exceeding max_sweeps raises with per-matrix residual diagnostics.
    """
    A = np.array(Q, dtype=float, copy=True)
    single = A.ndim == 2
    if single:
        A = A[None]
    m, n, n2 = A.shape
    if n != n2:
        raise ValueError(f"matrices must be square, got shape {A.shape[1:]}")
    fro = np.sqrt(np.sum(A * A, axis=(1, 2)))
    thresh = tol * np.maximum(fro, np.finfo(float).tiny)
    V = np.broadcast_to(np.eye(n), (m, n, n)).copy() if vectors else None
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    converged = n < 2
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * sum(A[:, p, q] ** 2 for p, q in pairs)) if pairs else np.zeros(m)
        if np.all(off <= thresh):
            converged = True
            break
        for p, q in pairs:
            apq = A[:, p, q]
            app = A[:, p, p]
            aqq = A[:, q, q]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                tau = (aqq - app) / (2.0 * apq)
                # sign(0) must act as +1 here or the 45-degree rotation of an
                # equal-diagonal pair degenerates to a no-op
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                t = sgn / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(apq == 0.0, 0.0, t)
            t = np.where(np.isfinite(t), t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            app_new = app - t * apq
            aqq_new = aqq + t * apq
            rp = A[:, p, :].copy()
            rq = A[:, q, :].copy()
            A[:, p, :] = c[:, None] * rp - s[:, None] * rq
            A[:, q, :] = s[:, None] * rp + c[:, None] * rq
            cp = A[:, :, p].copy()
            cq = A[:, :, q].copy()
            A[:, :, p] = c[:, None] * cp - s[:, None] * cq
            A[:, :, q] = s[:, None] * cp + c[:, None] * cq
            A[:, p, p] = app_new
            A[:, q, q] = aqq_new
            A[:, p, q] = 0.0
            A[:, q, p] = 0.0
            if vectors:
                vp = V[:, :, p].copy()
                vq = V[:, :, q].copy()
                V[:, :, p] = c[:, None] * vp - s[:, None] * vq
                V[:, :, q] = s[:, None] * vp + c[:, None] * vq
    if not converged:
        off = np.sqrt(2.0 * sum(A[:, p, q] ** 2 for p, q in pairs))
        worst = int(np.argmax(off / np.maximum(thresh, np.finfo(float).tiny)))
        raise JacobiConvergenceError(
            f"Jacobi failed to converge in {max_sweeps} sweeps: "
            f"worst matrix {worst} has off-diagonal norm {off[worst]:.3e} "
            f"(threshold {thresh[worst]:.3e})")
    w = np.diagonal(A, axis1=1, axis2=2).copy()
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    if vectors:
        V = np.take_along_axis(V, order[:, None, :], axis=2)
        return (w[0], V[0]) if single else (w, V)
    return w[0] if single else w


def eigenvalues_sym(Q: np.ndarray, source: str = "input") -> Spectrum:
    """All eigenvalues of one symmetric matrix, ascending with sign."""
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {Q.shape}")
    if not np.allclose(Q, Q.T, atol=1e-12 * max(1.0, float(np.abs(Q).max(initial=0.0)))):
        raise ValueError("matrix is not symmetric")
    if not np.all(np.isfinite(Q)):
        raise ValueError("matrix has non-finite entries")
    w = jacobi_eigh(Q)
    return Spectrum(values=w, kind=SpectrumKind.EIGENVALUES, n=Q.shape[0], source=source)


def singular_values(Q: np.ndarray, source: str = "input") -> Spectrum:
    """Singular values of one square matrix via the Gram matrix Q^T Q, ascending."""
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {Q.shape}")
    if not np.all(np.isfinite(Q)):
        raise ValueError("matrix has non-finite entries")
    gram = Q.T @ Q
    w = jacobi_eigh(gram)
    sv = np.sqrt(np.clip(w, 0.0, None))
    return Spectrum(values=sv, kind=SpectrumKind.SINGULAR_VALUES, n=Q.shape[0], source=source)


# ----------------------------------------------------------------------
# spectral statistics for the small-ball / tube estimators

def _check_real_space(space: MatrixSpace) -> None:
    if space.kind not in (SpaceKind.REAL_GENERAL, SpaceKind.REAL_SYMMETRIC):
        raise ValueError(f"spectral estimators cover the real spaces only, got {space.kind}")


def corank_statistics(space: MatrixSpace, mu: int, rng: np.random.Generator,
                      count: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample `count` Gaussian matrices and return (T, norm_sq) where T is the
    sum of the mu smallest squared spectrum values and norm_sq = ||Q||_F^2."""
    _check_real_space(space)
    space.check_mu(mu)
    n = space.n
    T = np.empty(count)
    norm_sq = np.empty(count)
    done = 0
    while done < count:
        chunk = min(count - done, max(1, _MAX_CHUNK // (n * n)))
        if space.kind is SpaceKind.REAL_GENERAL:
            Q = sample_ginibre(n, rng, size=chunk)
            gram = np.matmul(np.transpose(Q, (0, 2, 1)), Q)
            w = np.clip(jacobi_eigh(gram), 0.0, None)  # ascending sigma^2
            sq = w
        else:
            Q = sample_goe(n, rng, size=chunk)
            lam = jacobi_eigh(Q)
            sq = np.sort(lam * lam, axis=1)
        T[done:done + chunk] = sq[:, :mu].sum(axis=1)
        norm_sq[done:done + chunk] = sq.sum(axis=1)
        done += chunk
    return T, norm_sq


def estimate_small_ball(space: MatrixSpace, mu: int, eps: float, samples: int,
                        seed: int = 0, workers: int | None = None) -> MCEstimate:
    """p_mu(eps): probability that the mu smallest squared spectrum values sum
    to at most eps^2, with binomial standard error."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    _check_real_space(space)
    space.check_mu(mu)
    eps_sq = eps * eps

    def hits(rng, count):
        T, _ = corank_statistics(space, mu, rng, count)
        return int(np.count_nonzero(T <= eps_sq))

    return fraction_estimator(samples, seed, hits, workers=workers)


def small_ball_counts(space: MatrixSpace, mu: int, eps_grid, samples: int,
                      seed: int = 0, workers: int | None = None,
                      cone: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Hit counts per (batch, eps) under common random numbers.

    The same sample serves every eps, which makes the empirical curve
    exactly monotone in eps and correlates the regression residuals down.
    With cone=True the threshold is eps^2 * ||Q||^2 instead of eps^2.
    """
    eps_sq = np.asarray(eps_grid, dtype=float) ** 2

    def batch(rng, count):
        T, norm_sq = corank_statistics(space, mu, rng, count)
        bound = eps_sq[None, :] * (norm_sq[:, None] if cone else 1.0)
        return (T[:, None] <= bound).sum(axis=0).astype(np.int64), count

    parts = run_batches(samples, seed, batch, workers=workers)
    counts = np.stack([p[0] for p in parts])
    ns = np.array([p[1] for p in parts], dtype=np.int64)
    return counts, ns


@dataclass(frozen=True)
class LimitRatioFit:
    """Extrapolated eps -> 0 limit of p_mu(eps)/eps^c from a decreasing grid."""

    intercept: MCEstimate
    slope: float
    codim: int
    eps_grid: tuple
    probabilities: tuple
    counts: tuple


def _validate_eps_grid(eps_grid) -> np.ndarray:
    eps = np.asarray(eps_grid, dtype=float)
    if eps.size < 4:
        raise ValueError(f"need at least 4 grid points, got {eps.size}")
    if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("eps_grid must be strictly decreasing and positive")
    if eps.max() > 0.5:
        raise ValueError(f"eps_grid max {eps.max()} is outside the asymptotic regime (<= 0.5)")
    return eps


def intercept_from_counts(counts: np.ndarray, ns: np.ndarray, eps: np.ndarray,
                          c: int, seed: int, x: np.ndarray | None = None) -> MCEstimate:
    """Per-batch weighted fit of p(eps)/eps^c = a (1 + b x), aggregated by batch means.

    x defaults to eps itself; weights come from the pooled binomial variances
    so that empty cells in single batches stay harmless.
    """
    if x is None:
        x = eps
    pooled = counts.sum(axis=0) / ns.sum()
    pooled = np.clip(pooled, 1e-12, 1.0 - 1e-12)
    n_b = ns.astype(float)
    var = pooled * (1.0 - pooled)
    design = np.stack([np.ones_like(x), x], axis=1)
    a_values = []
    for b in range(counts.shape[0]):
        y = counts[b] / n_b[b] / eps ** c
        w = eps ** (2 * c) * n_b[b] / var
        sw = np.sqrt(w)
        coef, *_ = np.linalg.lstsq(design * sw[:, None], y * sw, rcond=None)
        a_values.append(coef[0])
    a_values = np.asarray(a_values)
    mean = float(a_values.mean())
    stderr = float(a_values.std(ddof=1) / math.sqrt(len(a_values))) if len(a_values) > 1 else math.inf
    return MCEstimate(mean=mean, stderr=stderr, samples=int(ns.sum()), seed=seed)


def estimate_limit_ratio(space: MatrixSpace, mu: int, eps_grid, samples: int,
                         seed: int = 0, workers: int | None = None) -> LimitRatioFit:
    """Estimate lim p_mu(eps)/eps^c together with the log-log slope.

    The slope is a free weighted regression of ln p on ln eps and should
    land near the codimension c; the intercept fixes the exponent at c and
    fits the first-order correction, which is what the tube expansion
    guarantees exists.
    """
    eps = _validate_eps_grid(eps_grid)
    space.check_mu(mu)
    c = space.codim(mu)
    counts, ns = small_ball_counts(space, mu, eps, samples, seed=seed, workers=workers)
    total = counts.sum(axis=0)
    n_total = int(ns.sum())
    if total[-1] == 0:
        anchor = np.nonzero(total)[0]
        if anchor.size == 0:
            raise InsufficientSamplesError(
                f"no hits anywhere on the grid with {n_total} samples; "
                f"increase samples by >= 100x")
        k = anchor[-1]
        p_pred = (total[k] / n_total) * (eps[-1] / eps[k]) ** c
        needed = int(math.ceil(20.0 / max(p_pred, 1e-300)))
        raise InsufficientSamplesError(
            f"zero hits at eps={eps[-1]}: predicted probability {p_pred:.3e} "
            f"needs roughly {needed} samples (have {n_total})")
    p = total / n_total
    nz = p > 0
    var_ln = (1.0 - p[nz]) / (n_total * p[nz])
    w = 1.0 / var_ln
    X = np.stack([np.ones(nz.sum()), np.log(eps[nz])], axis=1)
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(X * sw[:, None], np.log(p[nz]) * sw, rcond=None)
    slope = float(coef[1])
    intercept = intercept_from_counts(counts, ns, eps, c, seed)
    return LimitRatioFit(intercept=intercept, slope=slope, codim=c,
                         eps_grid=tuple(eps), probabilities=tuple(p),
                         counts=tuple(int(v) for v in total))


def estimate_abs_det_moment(n: int, mu: int, samples: int, seed: int = 0,
                            workers: int | None = None) -> MCEstimate:
    """Sample mean of |det Q|^mu over GOE(n), via log-space eigenvalue products."""
    if n < 1 or mu < 1:
        raise ValueError(f"need n >= 1 and mu >= 1, got n={n}, mu={mu}")

    def batch(rng, count):
        total = 0.0
        total_sq = 0.0
        done = 0
        while done < count:
            chunk = min(count - done, max(1, _MAX_CHUNK // (n * n)))
            lam = jacobi_eigh(sample_goe(n, rng, size=chunk))
            with np.errstate(divide="ignore"):
                ln_det = np.sum(np.log(np.abs(lam)), axis=1)
            x = np.exp(mu * ln_det)
            total += float(x.sum())
            total_sq += float((x * x).sum())
            done += chunk
        return total, total_sq, count

    parts = run_batches(samples, seed, batch, workers=workers)
    return estimate_from_sums(sum(p[0] for p in parts), sum(p[1] for p in parts),
                              sum(p[2] for p in parts), seed)


_SELBERG_MAX_N = 6


def selberg_mc_check(kind: SpectrumKind, n: int, samples: int, seed: int = 0,
                     workers: int | None = None) -> MCEstimate:
    """Ratio of the Monte Carlo Selberg normalization integral to its closed form.

    Singular-value case estimates 1/C(n) as (2 pi)^(n/2) 2^(-n) E prod|x_i^2-x_j^2|
    over standard Gaussian vectors; the eigenvalue case drops the orthant
    factor and uses the plain Vandermonde.  A correct implementation returns
    1 within noise.  The Vandermonde variance explodes with n, hence the cap.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > _SELBERG_MAX_N:
        raise ValueError(
            f"n={n} rejected: the Vandermonde statistic's variance grows too fast "
            f"beyond n={_SELBERG_MAX_N} for a meaningful Monte Carlo check")
    from .structure_constants import vandermonde_abs
    if kind is SpectrumKind.SINGULAR_VALUES:
        ln_scale = (n / 2.0) * math.log(2.0 * math.pi) - n * math.log(2.0)
        ln_closed = -closed_form.selberg_C(n).ln_value
        squares = True
    else:
        ln_scale = (n / 2.0) * math.log(2.0 * math.pi)
        ln_closed = -closed_form.selberg_C1(n).ln_value
        squares = False
    scale = math.exp(ln_scale - ln_closed)

    def batch(rng, count):
        x = rng.standard_normal((count, n))
        f = vandermonde_abs(x, squares=squares) * scale
        return float(f.sum()), float((f * f).sum()), count

    parts = run_batches(samples, seed, batch, workers=workers)
    return estimate_from_sums(sum(p[0] for p in parts), sum(p[1] for p in parts),
                              sum(p[2] for p in parts), seed)
