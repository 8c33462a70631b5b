"""Path-integral checks for loop-group representations and the loop Gamma functional."""

from ._core import (
    AccuracyError,
    CheckReport,
    DomainError,
    EvaluationError,
    MCEstimate,
    UsageError,
    bridge_mass,
    check_large_t_limit,
    check_prop22,
    check_recurrence,
    check_translation_point_char,
    cocycle,
    expect_exp_inner,
    fourier_wiener_check,
    gamma_classical,
    gamma_reg,
    gamma_reg_prime,
    gaussian_moment,
    grid_nodes,
    hat_gamma,
    heat_kernel,
    laplace_kernel_value,
    sample_path,
    translation_residual,
)

__all__ = [
    "AccuracyError",
    "CheckReport",
    "DomainError",
    "EvaluationError",
    "MCEstimate",
    "UsageError",
    "bridge_mass",
    "check_large_t_limit",
    "check_prop22",
    "check_recurrence",
    "check_translation_point_char",
    "cocycle",
    "expect_exp_inner",
    "fourier_wiener_check",
    "gamma_classical",
    "gamma_reg",
    "gamma_reg_prime",
    "gaussian_moment",
    "grid_nodes",
    "hat_gamma",
    "heat_kernel",
    "laplace_kernel_value",
    "sample_path",
    "translation_residual",
]
