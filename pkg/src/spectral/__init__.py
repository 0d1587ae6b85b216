from .multiplier import (
    CONSISTENT_PREFACTOR,
    LAMBDA_LIMIT,
    PRINTED_PREFACTOR,
    SI_SUP,
    CorollaryReport,
    MultiplierTable,
    apply_q_multiplier,
    build_table,
    c_tilde,
    corollary_bound_check,
    lambda_k,
    q_eps_symbol,
    resolve_prefactor,
    sine_integral,
    single_mode_ratio,
)
from .bilinear_hilbert import (
    BhtConstants,
    BhtMethod,
    BhtQuery,
    BoundReport,
    bht,
    bht_coefficients,
    bht_constants,
    bht_multiplier,
    bound_check,
    sobolev_lemma_check,
    sobolev_series_constant,
    young_check,
)

__all__ = [
    'CONSISTENT_PREFACTOR', 'LAMBDA_LIMIT', 'PRINTED_PREFACTOR', 'SI_SUP', 'CorollaryReport', 'MultiplierTable',
    'apply_q_multiplier', 'build_table', 'c_tilde', 'corollary_bound_check', 'lambda_k', 'q_eps_symbol',
    'resolve_prefactor', 'sine_integral', 'single_mode_ratio',
    'BhtConstants', 'BhtMethod', 'BhtQuery', 'BoundReport', 'bht', 'bht_coefficients', 'bht_constants',
    'bht_multiplier', 'bound_check', 'sobolev_lemma_check', 'sobolev_series_constant', 'young_check',
]
