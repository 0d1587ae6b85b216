"""P-perp R1^eps and P-perp R2^eps through their analytic kernels.

With a = int_0^1 gamma'(x + t w) dt and, for unit speed,

    1 - |a|^2 = (w^2 / 2) J,   J = int int (s1 - s2)^2 |v(s1, s2)|^2 ds1 ds2,
    v(s1, s2) = int_0^1 gamma''(x + s2 w + phi (s1 - s2) w) dphi,

the integrands become

    R2: -(1/|a|^2) J gamma''(x)
    R1:  2 (1/|a|^4 + 1/|a|^2) J z,   z = int_0^1 gamma''(x + t w) (1 - t) dt,

bounded in w and free of the chord singularity. Every parameter integral
uses tensor Gauss-Legendre nodes on [0, 1].
"""
from typing import Optional

import numpy as np

from ..curves.fourier_curve import FourierCurve, SampledGrid, derivative, shifted_samples
from ..utils.config import config
from ..utils.errors import DegeneracyError, InputError
from ..utils.logger import logger
from .decomposition import _resolve_size, check_unit_speed, project_normal
from .quadrature import Truncation, gauss_unit, inner_rule

MAX_CHUNK_VALUES = 8_000_000


def _kernel_integrand(which: str, velocity: FourierCurve, accel: FourierCurve, w: np.ndarray,
                      n_samples: int, nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    p = nodes.size
    dim = velocity.dim
    batch = w.size

    offsets = np.outer(w, nodes)
    a = np.einsum("nbpd,p->nbd", shifted_samples(velocity, offsets.ravel(), n_samples)
                  .reshape(n_samples, batch, p, dim), weights)
    a2 = np.sum(a * a, axis=2)
    threshold = config.get_or(1e-8, "gradient", "degeneracy_threshold")
    if np.min(a2) < threshold ** 2:
        raise DegeneracyError("kernel pole: |a| below threshold", {"min_abs_a": float(np.sqrt(np.min(a2)))})

    s1, s2, phi = np.meshgrid(nodes, nodes, nodes, indexing="ij")
    inner_offsets = w[:, None] * (s2 + phi * (s1 - s2)).ravel()[None, :]
    samples = shifted_samples(accel, inner_offsets.ravel(), n_samples).reshape(n_samples, batch, p, p, p, dim)
    v = np.einsum("nbijfd,f->nbijd", samples, weights)
    pair_weight = np.outer(weights, weights) * (nodes[:, None] - nodes[None, :]) ** 2
    J = np.einsum("nbijd,nbijd,ij->nb", v, v, pair_weight)

    if which == "R2":
        z = accel.evaluate(np.arange(n_samples) / n_samples)[:, None, :]
        return -(J / a2)[:, :, None] * z
    samples = shifted_samples(accel, offsets.ravel(), n_samples).reshape(n_samples, batch, p, dim)
    z = np.einsum("nbpd,p->nbd", samples, weights * (1.0 - nodes))
    return (2.0 * (1.0 / a2 ** 2 + 1.0 / a2) * J)[:, :, None] * z


def r_kernel_form(curve: FourierCurve, trunc: Truncation, which: str = "R2", n_samples: Optional[int] = None,
                  speed_tol: Optional[float] = None, nodes: Optional[int] = None) -> SampledGrid:
    """P-perp R^eps evaluated through the analytic kernel of R1 or R2."""
    which = which.upper()
    if which not in ("R1", "R2"):
        raise InputError(f"kernel form is defined for R1 and R2, got {which!r}")
    check_unit_speed(curve, speed_tol)
    n_samples = _resolve_size(curve, n_samples, trunc)
    rule = inner_rule(n_samples, trunc.cells_for(n_samples))
    gauss_nodes, gauss_weights = gauss_unit(nodes or int(config.get_or(8, "gradient", "parameter_nodes")))

    velocity = derivative(curve, 1)
    accel = derivative(curve, 2)
    w = rule.signed_nodes()
    per_node = n_samples * gauss_nodes.size ** 3 * curve.dim
    chunk = max(1, MAX_CHUNK_VALUES // per_node)
    values = np.empty((n_samples, w.size, curve.dim))
    for start in range(0, w.size, chunk):
        stop = min(start + chunk, w.size)
        values[:, start:stop] = _kernel_integrand(which, velocity, accel, w[start:stop], n_samples,
                                                  gauss_nodes, gauss_weights)
    logger.debug(f"{which} kernel form: {w.size} w-nodes in chunks of {chunk}")

    half = rule.flat_nodes.size
    total = (rule.cell_sums(values[:, :half]) + rule.cell_sums(values[:, half:])).sum(axis=1)
    return project_normal(SampledGrid(total), curve, speed_tol)
