"""Spectral analysis, reconstruction, and flows for Hankel symbols.

The spectral map sends a symbol to its interlaced singular values with
one Blaschke product each; the inverse is an explicit determinant
formula.  On top of the pair sit closed-form norm identities, best
rank-k Hankel approximation, and the cubic flow with its commuting
hierarchy, integrated both directly and through the spectral data.
"""

from .algebra import (CircleGrid, Poly, RationalFunction, conj_reflect,
                      grid_transform, interpolate, next_pow2,
                      polymatrix_det_minors, rational_fit, szego_project)
from .bateman import (IdentityReport, InterlacedValues, identity_residuals,
                      j_of_x, kappa_squares, kernel_criterion, tau_squares)
from .blaschke import BlaschkeProduct, blaschke_mul, from_zeros, is_schur_poly
from .errors import (AmbiguousClusterWarning, ConsistencyError,
                     DegreeMismatchError, FitError, HypothesisViolationError,
                     InputError, NotAnalyticError, NotInnerError,
                     NumericalError, SpectralInconsistencyError, StepSizeError,
                     SzegoError)
from .forward_map import (ForwardDetails, MultiplicityCluster, RealDiagnostics,
                          SpectralData, forward, real_diagnostics)
from .hankel import (HankelPair, Symbol, apply_H, apply_K, build_pair,
                     dense_hankel, hankel_matvec, hermitian_eigs,
                     resize_symbol, shift_symbol)
from .inverse_map import (CMatrix, RoundtripReport, SynthesisResult,
                          build_cmatrix, collapsed_fourvalue,
                          consistency_report, fourvalue_formula, roundtrip,
                          spectral_roundtrip, synthesize)
from .szego_flow import (ConservedRecord, FlowComparison, Trajectory,
                         TravelingWaveReport, compare_flows,
                         conserved_quantities, direct_evolve, exact_evolve,
                         hierarchy_exact_evolve, hierarchy_field,
                         recurrence_gap, szego_rhs, traveling_wave)
from .aak import (AAKCertificate, AAKResult, SchmidtVector, best_approx,
                  perturbation_sanity, ratio_certificate, schmidt_vector)
from .verify import VerifyCase, run as run_verify

__version__ = "0.1.0"

__all__ = [
    "AAKCertificate", "AAKResult", "AmbiguousClusterWarning",
    "BlaschkeProduct", "CMatrix", "CircleGrid", "ConservedRecord",
    "ConsistencyError", "DegreeMismatchError", "FitError", "FlowComparison",
    "ForwardDetails", "HankelPair", "HypothesisViolationError",
    "IdentityReport", "InputError", "InterlacedValues", "MultiplicityCluster",
    "NotAnalyticError", "NotInnerError", "NumericalError", "Poly",
    "RationalFunction", "RealDiagnostics", "RoundtripReport", "SchmidtVector",
    "SpectralData", "SpectralInconsistencyError", "StepSizeError", "Symbol",
    "SynthesisResult", "SzegoError", "Trajectory", "TravelingWaveReport",
    "VerifyCase", "apply_H", "apply_K", "best_approx", "blaschke_mul",
    "build_cmatrix", "build_pair", "collapsed_fourvalue", "compare_flows",
    "conj_reflect", "conserved_quantities", "consistency_report",
    "dense_hankel", "direct_evolve", "exact_evolve", "forward",
    "fourvalue_formula", "from_zeros", "grid_transform", "hankel_matvec",
    "hermitian_eigs", "hierarchy_exact_evolve", "hierarchy_field",
    "identity_residuals", "interpolate", "is_schur_poly", "j_of_x",
    "kappa_squares", "kernel_criterion", "next_pow2", "perturbation_sanity",
    "polymatrix_det_minors", "ratio_certificate", "rational_fit",
    "real_diagnostics", "recurrence_gap", "resize_symbol", "roundtrip",
    "run_verify", "schmidt_vector", "shift_symbol", "spectral_roundtrip",
    "synthesize", "szego_project", "szego_rhs", "tau_squares",
    "traveling_wave",
]
