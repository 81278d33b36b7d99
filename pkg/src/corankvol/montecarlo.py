"""Reproducible batched Monte Carlo execution.

Every estimator splits its sample budget into a fixed number of batches.
Batch b owns the counter-based RNG stream Philox(seed, spawn_key=(b,)) and
is processed sequentially inside one OS worker; batch results are reduced
in batch order.  Results are therefore bit-for-bit reproducible for a given
(seed, samples, batch count) and independent of how many OS workers the
batches were mapped onto.  The worker count comes from CORANK_WORKERS
(default: all cores) and is recorded in CLI output for provenance.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

WORKERS_ENV = "CORANK_WORKERS"
DEFAULT_BATCHES = 20


@dataclass(frozen=True)
class MCEstimate:
    """Mean, standard error, sample count and seed of one Monte Carlo run."""

    mean: float
    stderr: float
    samples: int
    seed: int

    def compatible_with(self, value: float, sigmas: float = 3.0, rel_slack: float = 0.0) -> bool:
        """|mean - value| <= sigmas*stderr + rel_slack*|value|."""
        return abs(self.mean - value) <= sigmas * self.stderr + rel_slack * abs(value)

    def combined_stderr(self, other: "MCEstimate") -> float:
        return math.hypot(self.stderr, other.stderr)

    @property
    def rel_stderr(self) -> float:
        return self.stderr / abs(self.mean) if self.mean != 0 else math.inf


def worker_count() -> int:
    """Workers from CORANK_WORKERS, default all cores; must be a positive integer."""
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {value}")
    return value


def batch_sizes(samples: int, n_batches: int = DEFAULT_BATCHES) -> np.ndarray:
    """Deterministic split of `samples` into `n_batches` near-equal parts."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    base, extra = divmod(samples, n_batches)
    sizes = np.full(n_batches, base, dtype=np.int64)
    sizes[:extra] += 1
    return sizes[sizes > 0]


def stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based RNG stream for one batch, keyed by (seed, batch index)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(seed=ss))


def run_batches(samples: int, seed: int, fn, n_batches: int = DEFAULT_BATCHES, workers: int | None = None) -> list:
    """Run fn(rng, count) over all batches, returning results in batch order.

    fn must be deterministic given its RNG stream; the thread pool only
    changes wall time, never the result.
    """
    sizes = batch_sizes(samples, n_batches)
    if workers is None:
        workers = worker_count()
    workers = min(workers, len(sizes))

    def one(index: int):
        return fn(stream(seed, index), int(sizes[index]))

    if workers <= 1:
        return [one(i) for i in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(len(sizes))))


def estimate_from_sums(total: float, total_sq: float, count: int, seed: int) -> MCEstimate:
    """Mean and stderr from accumulated sum and sum of squares."""
    mean = total / count
    if count > 1:
        var = max(total_sq - total * total / count, 0.0) / (count - 1)
        stderr = math.sqrt(var / count)
    else:
        stderr = math.inf
    return MCEstimate(mean=mean, stderr=stderr, samples=count, seed=seed)


def mean_estimator(samples: int, seed: int, batch_fn, n_batches: int = DEFAULT_BATCHES, workers: int | None = None) -> MCEstimate:
    """Estimate the mean of a statistic; batch_fn(rng, count) returns the sample values."""

    def partial(rng, count):
        x = np.asarray(batch_fn(rng, count), dtype=float)
        return float(x.sum()), float((x * x).sum()), x.size

    parts = run_batches(samples, seed, partial, n_batches=n_batches, workers=workers)
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    count = sum(p[2] for p in parts)
    return estimate_from_sums(total, total_sq, count, seed)


def fraction_estimator(samples: int, seed: int, hit_fn, n_batches: int = DEFAULT_BATCHES, workers: int | None = None) -> MCEstimate:
    """Estimate a probability; hit_fn(rng, count) returns the number of hits."""
    parts = run_batches(samples, seed, lambda rng, c: (int(hit_fn(rng, c)), c), n_batches=n_batches, workers=workers)
    hits = sum(p[0] for p in parts)
    count = sum(p[1] for p in parts)
    p = hits / count
    stderr = math.sqrt(max(p * (1.0 - p), 0.0) / count)
    return MCEstimate(mean=p, stderr=stderr, samples=count, seed=seed)
