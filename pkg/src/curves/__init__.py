from .fourier_curve import (
    CumulativeLength,
    FourierCurve,
    NormEquivalence,
    SampledGrid,
    SobolevOrder,
    analyze,
    compose,
    cumulative_length,
    curvature_squared,
    derivative,
    length,
    mode_sum,
    product,
    resolved_speed,
    shifted_samples,
    sobolev_norm,
    sobolev_w_norm,
    speed_profile,
    synthesize,
    translate,
    unit_speed_defect,
    w_h_equivalence,
    with_band,
)
from .reparametrize import arclength_reparametrize
from .io import curve_from_dict, curve_to_dict, read_curve, write_curve
from . import corpus

__all__ = [
    'CumulativeLength', 'FourierCurve', 'NormEquivalence', 'SampledGrid', 'SobolevOrder',
    'analyze', 'compose', 'cumulative_length', 'curvature_squared', 'derivative', 'length',
    'mode_sum', 'product', 'resolved_speed', 'shifted_samples', 'sobolev_norm', 'sobolev_w_norm', 'speed_profile',
    'synthesize', 'translate', 'unit_speed_defect', 'w_h_equivalence', 'with_band',
    'arclength_reparametrize', 'curve_from_dict', 'curve_to_dict', 'read_curve', 'write_curve',
    'corpus',
]
