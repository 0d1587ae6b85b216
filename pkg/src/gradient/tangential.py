"""Tangential part of Q^eps through the bilinear Hilbert transform.

For unit-speed curves <Q^eps gamma, gamma'> only involves products of
second derivatives:

    <Q^eps gamma, gamma'>(x) = 4 int_0^1 int_0^1 (1-t)(-t) sum_c H^eps_{t, st}(gamma''_c, gamma''_c)(x) ds dt
"""
from typing import Optional

import numpy as np

from ..curves.fourier_curve import FourierCurve, SampledGrid, derivative
from ..utils.config import config
from .decomposition import _resolve_size, _unit_tangent, check_unit_speed
from .quadrature import Truncation, gauss_unit


def tangential_density(curve: FourierCurve, trunc: Truncation, nodes: Optional[int] = None,
                       method: str = "spectral", n_samples: Optional[int] = None) -> FourierCurve:
    """The scalar <Q^eps gamma, gamma'> as a band-2K trigonometric polynomial."""
    from ..spectral.bilinear_hilbert import BhtQuery, bht, bht_coefficients

    nodes = nodes or int(config.get_or(24, "gradient", "tangential_nodes"))
    t_nodes, t_weights = gauss_unit(nodes)
    accel = derivative(curve, 2)
    band = 2 * curve.max_freq
    total = np.zeros(2 * band + 1, dtype=complex)
    for c in range(curve.dim):
        component = accel.component(c)
        for t, wt in zip(t_nodes, t_weights):
            for s, ws in zip(t_nodes, t_weights):
                weight = 4.0 * (1.0 - t) * (-t) * wt * ws
                if method == "spectral":
                    coeffs = bht_coefficients(component.coeffs[:, 0], component.coeffs[:, 0], t, s * t, trunc.eps)
                else:
                    query = BhtQuery(t, s * t, trunc.eps, method)
                    coeffs = bht(component, component, query, n_samples).coeffs[:, 0]
                total += weight * coeffs
    return FourierCurve.from_half(total[band:, None])


def tangential_q_bht(curve: FourierCurve, trunc: Truncation, n_samples: Optional[int] = None,
                     nodes: Optional[int] = None, method: str = "spectral") -> SampledGrid:
    """P^T Q^eps gamma = <Q^eps gamma, gamma'> gamma' on the grid."""
    check_unit_speed(curve)
    n_samples = _resolve_size(curve, n_samples, trunc)
    density = tangential_density(curve, trunc, nodes, method, n_samples)
    x = np.arange(n_samples) / n_samples
    scalar = density.evaluate(x)[:, 0]
    return SampledGrid(scalar[:, None] * _unit_tangent(curve, n_samples))
