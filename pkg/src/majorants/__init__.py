from .taylor import MultiSeries, TaylorSeries, ck_taylor_solve
from .engine import (
    AnalyticityFit,
    DecayFit,
    DerivativeLadder,
    DominanceReport,
    MajorantParams,
    analyticity_fit,
    banach_algebra_constant,
    derivative_ladder,
    dominance_check,
    fit_majorant_params,
    fourier_decay,
    majorant_ode_series,
    majorant_sequence,
)

__all__ = [
    'MultiSeries', 'TaylorSeries', 'ck_taylor_solve',
    'AnalyticityFit', 'DecayFit', 'DerivativeLadder', 'DominanceReport', 'MajorantParams', 'analyticity_fit',
    'banach_algebra_constant', 'derivative_ladder', 'dominance_check', 'fit_majorant_params', 'fourier_decay',
    'majorant_ode_series', 'majorant_sequence',
]
