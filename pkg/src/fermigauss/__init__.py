"""Fermionic Gaussian operator basis.

Parametrisation, Pfaffian normalisation, moments, differential
identities and constructive positive decompositions of fermionic
density matrices, every formula verifiable against a brute-force
Fock-space oracle at small mode number.
"""

from . import errors
from .decompose import (
    Decomposition,
    LimitFamily,
    check_density_matrix,
    decompose,
    decompose_diagonal,
    decompose_two_mode,
    evaluate_family,
    limit_gaussian_squeezed,
    limit_gaussian_thermal,
    reconstruct,
)
from .fock import (
    NormalPolynomial,
    gaussian_unnormalized_dense,
    gaussian_unnormalized_poly,
    ladder_matrices,
    normal_order_monomial,
    normal_poly_multiply,
    poly_to_dense,
    trace_product,
)
from .gaussian import (
    GaussianParams,
    covariance_from_params,
    first_moments,
    hermitian_conjugate,
    materialize,
    mgf,
    moment_matrix,
    mu_from_sigma,
    normalization_constant,
    number_number_moment,
    number_triple_moment,
    number_variance,
    params_from_covariance,
    second_moment,
    third_moment,
    trace,
    two_mode_closed_form,
    two_mode_params,
)
from .identities import (
    ResidualReport,
    dlambda_dsigma,
    pfaffian_derivative_residual,
    quadratic_table,
    verify_all_identities,
    verify_antinormal_identity,
    verify_double_application,
    verify_mixed_identity,
    verify_normal_identity,
    verify_thermal_identities,
)
from .linalg import (
    antisymmetrize,
    antisymmetrize_dual,
    check_generalized_antisymmetry,
    constant_i,
    constant_x,
    pfaffian,
)
from .sampling import random_density_matrix, random_gaussian_params

__version__ = "0.1.0"

__all__ = [
    "Decomposition",
    "GaussianParams",
    "LimitFamily",
    "NormalPolynomial",
    "ResidualReport",
    "antisymmetrize",
    "antisymmetrize_dual",
    "check_density_matrix",
    "check_generalized_antisymmetry",
    "constant_i",
    "constant_x",
    "covariance_from_params",
    "decompose",
    "decompose_diagonal",
    "decompose_two_mode",
    "dlambda_dsigma",
    "errors",
    "evaluate_family",
    "first_moments",
    "gaussian_unnormalized_dense",
    "gaussian_unnormalized_poly",
    "hermitian_conjugate",
    "ladder_matrices",
    "limit_gaussian_squeezed",
    "limit_gaussian_thermal",
    "materialize",
    "mgf",
    "moment_matrix",
    "mu_from_sigma",
    "normal_order_monomial",
    "normal_poly_multiply",
    "normalization_constant",
    "number_number_moment",
    "number_triple_moment",
    "number_variance",
    "params_from_covariance",
    "pfaffian",
    "pfaffian_derivative_residual",
    "poly_to_dense",
    "quadratic_table",
    "random_density_matrix",
    "random_gaussian_params",
    "reconstruct",
    "second_moment",
    "third_moment",
    "trace",
    "trace_product",
    "two_mode_closed_form",
    "two_mode_params",
    "verify_all_identities",
    "verify_antinormal_identity",
    "verify_double_application",
    "verify_mixed_identity",
    "verify_normal_identity",
    "verify_thermal_identities",
]
