"""Intrinsic volumes of the strata of fixed-corank matrices of Frobenius
norm one, for four ambient spaces (real, real symmetric, complex, complex
symmetric), with random-matrix Monte Carlo oracles validating every closed
form."""

from .closed_form import (MatrixSpace, MomentUnavailableError, ParityError,
                          SpaceKind, VolumeRatio, absolute_volume, complex_degree,
                          complex_sym_degree, goe_abs_det_moment, real_volume_ratio,
                          selberg_C, selberg_C1, sym_volume_ratio, volume_ratio)
from .montecarlo import MCEstimate
from .specfun import LogValue, ln_binomial, ln_gamma, ln_gamma_ratio, ln_sphere_volume
from .structure_constants import (I1_EXACT, I11_EXACT, I12_BALL, I12_EXAMPLE,
                                  I_1mu, I_mu, arbitrate_I12)

__version__ = "0.1.0"

__all__ = [
    "I1_EXACT", "I11_EXACT", "I12_BALL", "I12_EXAMPLE", "I_1mu", "I_mu",
    "LogValue", "MCEstimate", "MatrixSpace", "MomentUnavailableError",
    "ParityError", "SpaceKind", "VolumeRatio", "absolute_volume",
    "arbitrate_I12", "complex_degree", "complex_sym_degree",
    "goe_abs_det_moment", "ln_binomial", "ln_gamma", "ln_gamma_ratio",
    "ln_sphere_volume", "real_volume_ratio", "selberg_C", "selberg_C1",
    "sym_volume_ratio", "volume_ratio",
]
