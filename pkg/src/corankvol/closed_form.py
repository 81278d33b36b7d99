"""Closed-form degrees, volume ratios, normalization constants and moments.

All quantities describe the stratum of Frobenius-norm-one n x n matrices of
corank mu inside one of four ambient spaces (real, real symmetric, complex,
complex symmetric).  The complex cases are exact integers (degrees); the
real cases are Gamma products times a structure constant that is exact for
small mu and Monte Carlo estimated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as _np

from .montecarlo import MCEstimate
from .specfun import LN_2, LN_PI, LogValue, ln_binomial, ln_gamma, ln_sphere_volume
from .structure_constants import I1_EXACT, I11_EXACT, I12_BALL, I12_EXAMPLE

LN_2PI = math.log(2.0 * math.pi)
_LN_GAMMA_3_2 = ln_gamma(1.5)


class ParityError(ValueError):
    """Closed-form GOE determinant moments only exist here for odd size."""


class MomentUnavailableError(ValueError):
    """Raised when the symmetric formula needs a GOE moment that was not supplied."""


class SpaceKind(str, Enum):
    REAL_GENERAL = "real"
    REAL_SYMMETRIC = "sym"
    COMPLEX_GENERAL = "complex"
    COMPLEX_SYMMETRIC = "complex-sym"

    @property
    def is_complex(self) -> bool:
        return self in (SpaceKind.COMPLEX_GENERAL, SpaceKind.COMPLEX_SYMMETRIC)

    @property
    def is_symmetric(self) -> bool:
        return self in (SpaceKind.REAL_SYMMETRIC, SpaceKind.COMPLEX_SYMMETRIC)

    def ambient_dim(self, n: int) -> int:
        """Real dimension of the ambient matrix space."""
        if self is SpaceKind.REAL_GENERAL:
            return n * n
        if self is SpaceKind.REAL_SYMMETRIC:
            return n * (n + 1) // 2
        if self is SpaceKind.COMPLEX_GENERAL:
            return 2 * n * n
        return n * (n + 1)

    def codim(self, mu: int) -> int:
        """Real codimension of the corank-mu stratum; independent of n."""
        if self is SpaceKind.REAL_GENERAL:
            return mu * mu
        if self is SpaceKind.REAL_SYMMETRIC:
            return mu * (mu + 1) // 2
        if self is SpaceKind.COMPLEX_GENERAL:
            return 2 * mu * mu
        return mu * (mu + 1)

    def growth_exponent(self, mu: int) -> float:
        """Exponent of the n-growth of the normalized stratum volume (= codim/2)."""
        return self.codim(mu) / 2.0


@dataclass(frozen=True)
class MatrixSpace:
    kind: SpaceKind
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")

    @property
    def ambient_dim(self) -> int:
        return self.kind.ambient_dim(self.n)

    def codim(self, mu: int) -> int:
        self.check_mu(mu)
        return self.kind.codim(mu)

    def check_mu(self, mu: int) -> None:
        if not (1 <= mu <= self.n):
            raise ValueError(f"mu must satisfy 1 <= mu <= n={self.n}, got {mu}")


@dataclass(frozen=True)
class VolumeRatio:
    """Normalized stratum volume |Sigma^mu| / |S^(N-c-1)|.

    rel_stderr is None exactly when every input was closed form; otherwise
    it is the first-order relative standard error inherited from the Monte
    Carlo structure constant and/or moment.
    """

    value: LogValue
    space: MatrixSpace
    mu: int
    rel_stderr: float | None = None

    @property
    def stderr(self) -> float:
        if self.rel_stderr is None:
            return 0.0
        return self.rel_stderr * self.value.value


def _check_pair(n: int, mu: int) -> None:
    if not (1 <= mu <= n):
        raise ValueError(f"need 1 <= mu <= n, got n={n}, mu={mu}")


# ----------------------------------------------------------------------
# complex degrees (exact integers)

def complex_degree(n: int, mu: int) -> int:
    """Degree of the corank-mu stratum of complex n x n matrices.

    prod_{k=0}^{mu-1} (n+k)! k! / ((n-mu+k)! (mu+k)!), exact arithmetic.
    """
    _check_pair(n, mu)
    result = Fraction(1)
    for k in range(mu):
        result *= Fraction(math.factorial(n + k) * math.factorial(k),
                           math.factorial(n - mu + k) * math.factorial(mu + k))
    assert result.denominator == 1, f"complex degree not integral for n={n}, mu={mu}: {result}"
    assert result > 0
    return int(result)


def complex_sym_degree(n: int, mu: int) -> int:
    """Degree of the corank-mu stratum of complex symmetric n x n matrices.

    prod_{k=0}^{mu-1} C(n+k, mu-k) / C(2k+1, k), exact arithmetic.
    """
    _check_pair(n, mu)
    result = Fraction(1)
    for k in range(mu):
        result *= Fraction(math.comb(n + k, mu - k), math.comb(2 * k + 1, k))
    assert result.denominator == 1, f"complex symmetric degree not integral for n={n}, mu={mu}: {result}"
    assert result > 0
    return int(result)


def ln_complex_degree(n: int, mu: int) -> float:
    """Log of complex_degree via log-gamma; usable far beyond big-integer comfort."""
    _check_pair(n, mu)
    total = 0.0
    for k in range(mu):
        total += (ln_gamma(n + k + 1.0) + ln_gamma(k + 1.0)
                  - ln_gamma(n - mu + k + 1.0) - ln_gamma(mu + k + 1.0))
    return total


def ln_complex_sym_degree(n: int, mu: int) -> float:
    _check_pair(n, mu)
    total = 0.0
    for k in range(mu):
        total += ln_binomial(n + k, mu - k) - ln_binomial(2 * k + 1, k)
    return total


# ----------------------------------------------------------------------
# Selberg normalization constants

def selberg_C(n: int) -> LogValue:
    """Normalization of the Ginibre singular-value density on the positive orthant.

    1/C(n) = (2^(n^2/2) / pi^(n/2)) * prod_{j=1..n} Gamma(j/2) Gamma(j/2 + 1).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    half_j = _np.arange(1, n + 1) / 2.0
    terms = [(n * n / 2.0) * LN_2, -(n / 2.0) * LN_PI]
    terms.extend(ln_gamma(half_j))
    terms.extend(ln_gamma(half_j + 1.0))
    return LogValue(-math.fsum(terms))


def selberg_C1(n: int) -> LogValue:
    """Normalization of the GOE unordered-eigenvalue density.

    C1(n) = (2 pi)^(-n/2) * prod_{j=1..n} Gamma(3/2) / Gamma(1 + j/2); C1(0) = 1.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    terms = [-(n / 2.0) * LN_2PI, n * _LN_GAMMA_3_2]
    if n:
        terms.extend(-ln_gamma(1.0 + _np.arange(1, n + 1) / 2.0))
    return LogValue(math.fsum(terms))


# ----------------------------------------------------------------------
# GOE |det| moments (odd size only)

def goe_abs_det_moment(k: int, mu: int) -> LogValue:
    """E |det Q|^mu for Q in GOE(k), closed form for odd k = 2m + 1.

    Gamma((mu+1)/2) 2^((mu+1)/2) (2 pi)^(-1/2) prod_{i=0}^{m-1} Gamma(i+mu+3/2)/Gamma(i+3/2).
    The even case has no simple product form; use the Monte Carlo estimator.
    """
    if k < 1 or mu < 1:
        raise ValueError(f"need k >= 1 and mu >= 1, got k={k}, mu={mu}")
    if k % 2 == 0:
        raise ParityError(
            f"closed-form |det| moment needs odd k, got k={k}; "
            "use rmt.estimate_abs_det_moment for even sizes")
    m = (k - 1) // 2
    terms = [ln_gamma((mu + 1) / 2.0), ((mu + 1) / 2.0) * LN_2, -0.5 * LN_2PI]
    if m:
        i = _np.arange(m)
        terms.extend(ln_gamma(i + mu + 1.5))
        terms.extend(-ln_gamma(i + 1.5))
    return LogValue(math.fsum(terms))


# ----------------------------------------------------------------------
# structure-constant plumbing

def _constant_ln(constant, mu: int, symmetric: bool):
    """Resolve an injected structure constant into (ln value, rel stderr or None).

    None selects the hardwired exact value where one exists (mu = 1 for
    both families).  For the symmetric mu = 2 case the caller must choose a
    branch explicitly: the string "ball" (sqrt(2)/3, the defining integral,
    supported by the quadrature and MC oracles) or "example" (sqrt(2)/2, the
    printed example value).  Neither is adopted silently.
    """
    if constant is None:
        if mu == 1:
            return (math.log(I11_EXACT if symmetric else I1_EXACT), None)
        if symmetric and mu == 2:
            raise ValueError(
                "I_{1,2} is contested: pass constant='ball' (sqrt(2)/3, oracle-supported) "
                "or constant='example' (sqrt(2)/2), or a numeric value / MCEstimate")
        name = "I_{1,mu}" if symmetric else "I_mu"
        raise ValueError(
            f"no exact {name} for mu={mu}; pass an MCEstimate from structure_constants")
    if isinstance(constant, str):
        if not (symmetric and mu == 2):
            raise ValueError("branch names are only meaningful for the symmetric mu=2 constant")
        if constant == "ball":
            return (math.log(I12_BALL), None)
        if constant == "example":
            return (math.log(I12_EXAMPLE), None)
        raise ValueError(f"unknown I_(1,2) branch {constant!r}; use 'ball' or 'example'")
    if isinstance(constant, MCEstimate):
        if constant.mean <= 0:
            raise ValueError(f"structure constant must be positive, got {constant.mean}")
        rel = constant.stderr / constant.mean if constant.stderr > 0 else None
        return (math.log(constant.mean), rel)
    value = float(constant)
    if value <= 0:
        raise ValueError(f"structure constant must be positive, got {value}")
    return (math.log(value), None)


# ----------------------------------------------------------------------
# small-ball limits and volume ratios

def real_g_limit(n: int, mu: int, constant=None) -> tuple[LogValue, float | None]:
    """lim g_mu(eps)/eps^(mu^2) for the Ginibre ensemble:

    I_mu * prod_{j=1..n-mu} Gamma(j/2+1) Gamma(j/2+mu) / prod_{j=1..n} Gamma(j/2) Gamma(j/2+1).
    """
    _check_pair(n, mu)
    ln_i, rel = _constant_ln(constant, mu, symmetric=False)
    terms = [ln_i]
    if n > mu:
        half_j = _np.arange(1, n - mu + 1) / 2.0
        terms.extend(ln_gamma(half_j + 1.0))
        terms.extend(ln_gamma(half_j + mu))
    half_j = _np.arange(1, n + 1) / 2.0
    terms.extend(-ln_gamma(half_j))
    terms.extend(-ln_gamma(half_j + 1.0))
    return (LogValue(math.fsum(terms)), rel)


def sym_g_limit(n: int, mu: int, constant=None, moment=None) -> tuple[LogValue, float | None]:
    """lim g_mu(eps)/eps^(mu(mu+1)/2) for the GOE:

    2^mu I_{1,mu} * C1(n)/C1(n-mu) * E|det GOE(n-mu)|^mu.

    The 2^mu converts I_{1,mu} back into the full-ball Vandermonde integral
    that the eigenvalue-density factorization actually produces.  When
    n - mu is odd the moment is closed form; otherwise an MCEstimate must
    be supplied (an explicit error points there).
    """
    _check_pair(n, mu)
    ln_i, rel_i = _constant_ln(constant, mu, symmetric=True)
    k = n - mu
    rel_m = None
    if moment is None:
        if k % 2 == 0 and k > 0:
            raise MomentUnavailableError(
                f"n - mu = {k} is even: no closed-form GOE |det| moment; "
                "pass moment=rmt.estimate_abs_det_moment(n - mu, mu, ...)")
        ln_moment = 0.0 if k == 0 else goe_abs_det_moment(k, mu).ln_value
    elif isinstance(moment, MCEstimate):
        if moment.mean <= 0:
            raise ValueError(f"moment must be positive, got {moment.mean}")
        ln_moment = math.log(moment.mean)
        rel_m = moment.stderr / moment.mean if moment.stderr > 0 else None
    else:
        ln_moment = math.log(float(moment))
    ln_value = (mu * LN_2 + ln_i + selberg_C1(n).ln_value - selberg_C1(k).ln_value + ln_moment)
    rel = None
    if rel_i is not None or rel_m is not None:
        rel = math.hypot(rel_i or 0.0, rel_m or 0.0)
    return (LogValue(ln_value), rel)


def _assemble_ratio(space: MatrixSpace, mu: int, g_limit: LogValue, rel) -> VolumeRatio:
    # |Sigma^mu| / |S^(N-c-1)| = 2^(c/2 - 1) Gamma(c/2) C(n, mu) * lim g_mu/eps^c
    c = space.codim(mu)
    ln_value = ((c / 2.0 - 1.0) * LN_2 + ln_gamma(c / 2.0)
                + ln_binomial(space.n, mu) + g_limit.ln_value)
    return VolumeRatio(value=LogValue(ln_value), space=space, mu=mu, rel_stderr=rel)


def real_volume_ratio(n: int, mu: int, constant=None) -> VolumeRatio:
    """Normalized volume of the corank-mu stratum of real n x n matrices."""
    space = MatrixSpace(SpaceKind.REAL_GENERAL, n)
    g, rel = real_g_limit(n, mu, constant)
    return _assemble_ratio(space, mu, g, rel)


def sym_volume_ratio(n: int, mu: int, constant=None, moment=None) -> VolumeRatio:
    """Normalized volume of the corank-mu stratum of real symmetric matrices."""
    space = MatrixSpace(SpaceKind.REAL_SYMMETRIC, n)
    g, rel = sym_g_limit(n, mu, constant, moment)
    return _assemble_ratio(space, mu, g, rel)


def volume_ratio(space: MatrixSpace, mu: int, constant=None, moment=None) -> VolumeRatio:
    """Normalized stratum volume for any of the four ambient spaces.

    Complex cases are the exact degrees (integral geometry turns the degree
    into the normalized volume); real cases route through the Gamma-product
    formulas above.
    """
    space.check_mu(mu)
    if space.kind is SpaceKind.REAL_GENERAL:
        return real_volume_ratio(space.n, mu, constant)
    if space.kind is SpaceKind.REAL_SYMMETRIC:
        return sym_volume_ratio(space.n, mu, constant, moment)
    if space.kind is SpaceKind.COMPLEX_GENERAL:
        ln_value = ln_complex_degree(space.n, mu)
    else:
        ln_value = ln_complex_sym_degree(space.n, mu)
    return VolumeRatio(value=LogValue(ln_value), space=space, mu=mu, rel_stderr=None)


def absolute_volume(ratio: VolumeRatio) -> LogValue:
    """Intrinsic volume |Sigma^mu| = ratio * |S^(N-c-1)|."""
    d = ratio.space.ambient_dim - ratio.space.codim(ratio.mu) - 1
    if d < 0:
        raise ValueError(
            f"stratum is degenerate: sphere dimension N-c-1 = {d} < 0 "
            f"(kind={ratio.space.kind.value}, n={ratio.space.n}, mu={ratio.mu})")
    return LogValue(ratio.value.ln_value + ln_sphere_volume(d).ln_value)
