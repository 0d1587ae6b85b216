from .quadrature import InnerRule, Truncation, gauss_unit, inner_rule, richardson, taylor_phase
from .decomposition import (
    GradientMethod,
    GradientReport,
    check_unit_speed,
    eps_sweep,
    extrapolated_remainders,
    h_gamma,
    h_tilde_direct,
    project_normal,
    project_tangent,
    q_eps,
    r1_eps,
    r2_eps,
    truncated_fields,
)
from .tangential import tangential_density, tangential_q_bht
from .kernels import r_kernel_form

__all__ = [
    'InnerRule', 'Truncation', 'gauss_unit', 'inner_rule', 'richardson', 'taylor_phase',
    'GradientMethod', 'GradientReport', 'check_unit_speed', 'eps_sweep', 'extrapolated_remainders', 'h_gamma',
    'h_tilde_direct', 'project_normal', 'project_tangent', 'q_eps', 'r1_eps', 'r2_eps', 'truncated_fields',
    'tangential_density', 'tangential_q_bht', 'r_kernel_form',
]
