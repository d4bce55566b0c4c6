"""Birman-Schwinger analysis of a harmonic layer with Gaussian and delta-line impurities.

The free operator is ``-1/2 d_x^2 + x^2/2 - 1/2 d_y^2`` on the plane; the
impurities are ``lambda exp(-(x^2 + y^2))``, its scaled versions
``lambda n exp(-(n^2 x^2 + y^2))`` and the delta line
``lambda sqrt(pi) delta(x) exp(-y^2)``.
"""
__version__ = "0.1.0"

from ._backend import COMPILED
from .basis import (BasisConfig, QuadratureRule, gauss_hermite, gaussian_overlap_matrix,
                    hermite_fn, hermite_table, overlap_gaussian, phi2n_zero_sq, phi_zero,
                    scaled_overlap, wang_overlap_sq)
from .errors import (BracketFailure, BSGaussError, DiagonalSingularity, EigensolverFailure,
                     InvalidSpectralParameter, NoBoundState, NumericalFailure,
                     QuadratureUnderresolved, UnsupportedOrder)
from .green import SpectralParameter, green_kernel, green_tail_bound, truncation_for
from .heat import heat_traces
from .kernels import (bs_eval, delta_bs_eval, delta_hs_bound, delta_kernel, gaussian_kernel,
                      hs_bound_gaussian, hs_distance_scaled_to_delta, s1_bound, s2_bound,
                      scaled_kernel, trace_bs_squared, y_pair_integral)
from .lower_bound import (LowerBoundResult, asymptotic_large, asymptotic_small, klmn_bound_expr,
                          gaussian_bound_lhs, delta_bound_lhs, gaussian_lower_bound, delta_lower_bound)
from .spectral import (BoundStateResult, DiscretizedOperator, OracleResult, assemble_bs_matrix,
                       bound_states, fredholm_det2, oracle_ground_state, top_eigenvalues)

__all__ = [
    "COMPILED", "BasisConfig", "QuadratureRule", "gauss_hermite", "gaussian_overlap_matrix",
    "hermite_fn", "hermite_table", "overlap_gaussian", "phi2n_zero_sq", "phi_zero",
    "scaled_overlap", "wang_overlap_sq", "BracketFailure", "BSGaussError", "DiagonalSingularity",
    "EigensolverFailure", "InvalidSpectralParameter", "NoBoundState", "NumericalFailure",
    "QuadratureUnderresolved", "UnsupportedOrder", "SpectralParameter", "green_kernel",
    "green_tail_bound", "truncation_for", "heat_traces", "bs_eval", "delta_bs_eval",
    "delta_hs_bound", "delta_kernel", "gaussian_kernel", "hs_bound_gaussian",
    "hs_distance_scaled_to_delta", "s1_bound", "s2_bound", "scaled_kernel", "trace_bs_squared",
    "y_pair_integral", "LowerBoundResult", "asymptotic_large", "asymptotic_small",
    "klmn_bound_expr", "gaussian_bound_lhs", "delta_bound_lhs", "gaussian_lower_bound", "delta_lower_bound", "BoundStateResult",
    "DiscretizedOperator", "OracleResult", "assemble_bs_matrix", "bound_states", "fredholm_det2",
    "oracle_ground_state", "top_eigenvalues",
]
