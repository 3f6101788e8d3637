"""Chiral Gaussian beta-ensembles, their rank-one Hermitian and
anti-Hermitian perturbations, and numerical verification of the exact
finite-size eigenvalue laws."""

from .densities import (
    DensityParams,
    W_const,
    W_tilde,
    Z_const,
    Z_tilde,
    chi_l_logpdf,
    coeffs_from_spectral,
    h_const,
    hermitian_logdensity,
    nonhermitian_logdensity,
    spectral_logdensity,
)
from .eig import (
    CharPoly,
    ComplexConfig,
    HermitianConfig,
    SpectralMeasure,
    char_poly,
    eig_hermitian,
    eig_nonhermitian,
    reconstruct_jacobi,
    reconstruct_perturbed,
    spectral_measure,
)
from .jacobians import (
    compare_jacobians,
    jacobian_closed_form,
    jacobian_finite_difference,
    verify_jacobians,
)
from .models import (
    Bidiagonal,
    DenseChiral,
    EnsembleParams,
    JacobiMatrix,
    PerturbedJacobi,
    antibidiagonal_form,
    assemble_full,
    bidiagonalize,
    dense_reduction_check,
    permute_to_jacobi,
    perturb,
    sample_chiral_jacobi,
    sample_dense,
)
from .quaternion import QArray
from .rng import RngStream, ScalarField, sample_chi, sample_gaussian, sample_haar_unit_vector
from .stats import ks_one_sample, ks_two_sample, quad_nd

__version__ = "0.1.0"

__all__ = [
    "Bidiagonal",
    "CharPoly",
    "ComplexConfig",
    "DenseChiral",
    "DensityParams",
    "EnsembleParams",
    "HermitianConfig",
    "JacobiMatrix",
    "PerturbedJacobi",
    "QArray",
    "RngStream",
    "ScalarField",
    "SpectralMeasure",
    "W_const",
    "W_tilde",
    "Z_const",
    "Z_tilde",
    "antibidiagonal_form",
    "assemble_full",
    "bidiagonalize",
    "char_poly",
    "chi_l_logpdf",
    "coeffs_from_spectral",
    "compare_jacobians",
    "dense_reduction_check",
    "eig_hermitian",
    "eig_nonhermitian",
    "h_const",
    "hermitian_logdensity",
    "jacobian_closed_form",
    "jacobian_finite_difference",
    "ks_one_sample",
    "ks_two_sample",
    "nonhermitian_logdensity",
    "permute_to_jacobi",
    "perturb",
    "quad_nd",
    "reconstruct_jacobi",
    "reconstruct_perturbed",
    "sample_chi",
    "sample_chiral_jacobi",
    "sample_dense",
    "sample_gaussian",
    "sample_haar_unit_vector",
    "spectral_logdensity",
    "spectral_measure",
    "verify_jacobians",
]
