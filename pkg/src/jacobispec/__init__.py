"""Spectral toolkit for trace-class perturbations of the half-line discrete Laplacian."""

from .operator import (
    JacobiCoefficients,
    PerturbationSummary,
    delta_sequence,
    from_json_dict,
    gauge_transform,
    load_operator,
    save_operator,
    step_operator,
    stripped,
    summarize,
    to_json_dict,
)
from .zhukovsky import (
    cassini_radius,
    dist_to_band,
    distortion_check,
    lambda_of_z,
    omega,
    z_of_lambda,
)
from .jost import (
    JostEvaluation,
    boundary_modulus_profile,
    determinant_bound_check,
    green_kernel,
    green_kernel_scaled,
    jost_backward,
    jost_function,
    jost_function_and_derivative,
    jost_function_grid,
    jost_volterra,
    t_tilde,
    volterra_bound_check,
)
from .spectrum import (
    DiscreteEigenvalue,
    ZeroSearchReport,
    birman_schwinger_ovals,
    blaschke_sum,
    cassini_enclosure_test,
    discrete_spectrum,
    empty_spectrum_certificate,
    find_determinant_zeros,
    lieb_thirring_sum,
    spectrum_report,
)
from .steppot import (
    AsymptoticsReport,
    StepOperator,
    StepRoot,
    all_roots,
    asymptotics_report,
    chebyshev_jost,
    eigenvector_residual,
    newton_step_roots,
    p_n,
    seed_roots,
    seed_roots_range,
    sharpness_sum,
    sharpness_sweep,
)
from .oracle import (
    ScaledDeterminant,
    TruncationPlan,
    char_det,
    confirm_eigenvalue,
    grid_zero_scan,
    truncation_plan,
)

__version__ = "0.1.0"
