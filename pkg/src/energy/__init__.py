from .moebius import (
    DiagonalRule,
    EnergyQuadrature,
    EnergyReport,
    evaluate_energy,
    intrinsic_distance,
    moebius_energy,
    variation_pairing,
)

__all__ = ['DiagonalRule', 'EnergyQuadrature', 'EnergyReport', 'evaluate_energy', 'intrinsic_distance',
           'moebius_energy', 'variation_pairing']
