"""First variation of the Moebius energy split as H~ = Q + R1 + R2.

Chord quantities are built mode by mode from the phase functions E_j, so the
integrands keep their accuracy as w -> 0:

    gamma(x+w) - gamma(x)                     = sum c(k) E_1(2 pi k w) e(kx)
    gamma(x+w) - gamma(x) - w gamma'(x)       = sum c(k) E_2(2 pi k w) e(kx)
    ... - w^2/2 gamma''(x)                    = sum c(k) E_3(2 pi k w) e(kx)
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..curves.fourier_curve import (
    FourierCurve,
    SampledGrid,
    derivative,
    mode_sum,
    synthesize,
    unit_speed_defect,
)
from ..utils.config import config
from ..utils.errors import ConfigurationError, GeometryError, PreconditionError
from ..utils.logger import logger
from .quadrature import InnerRule, Truncation, inner_rule, richardson, taylor_phase

FIELDS = ("q", "r1", "r2", "h_tilde")


class GradientMethod(str, Enum):
    DIRECT = "direct"
    KERNEL_FORM = "kernel_form"
    SPECTRAL_Q = "spectral_q"


@dataclass
class GradientReport:
    eps: Truncation
    q: SampledGrid
    r1: SampledGrid
    r2: SampledGrid
    h_tilde: SampledGrid
    h: SampledGrid
    method: GradientMethod
    extra: Dict[str, float] = field(default_factory=dict)

    @property
    def n_samples(self) -> int:
        return self.h.n_samples

    def residual(self) -> float:
        return self.h.l2_norm()

    def identity_defect(self) -> float:
        total = self.q.values + self.r1.values + self.r2.values
        return float(np.max(np.abs(total - self.h_tilde.values)))

    def to_frame(self) -> pd.DataFrame:
        columns = {"x": self.h.nodes}
        for name in ("q", "r1", "r2", "h_tilde", "h"):
            grid = getattr(self, name)
            for d in range(grid.dim):
                columns[f"{name}_{d}"] = grid.values[:, d]
        return pd.DataFrame(columns)

    def summary(self) -> Dict[str, float]:
        summary = {
            "eps": self.eps.eps,
            "method": self.method.value,
            "n_samples": self.n_samples,
            "residual_l2": self.residual(),
            "identity_defect": self.identity_defect(),
        }
        for name in ("q", "r1", "r2", "h_tilde"):
            summary[f"{name}_l2"] = getattr(self, name).l2_norm()
        summary.update(self.extra)
        return summary

    def __repr__(self):
        return (f"GradientReport(method={self.method.value}, {self.eps}, N={self.n_samples}, "
                f"|h|_L2={self.residual():.3e})")


def check_unit_speed(curve: FourierCurve, tol: Optional[float] = None) -> float:
    tol = tol if tol is not None else config.get_or(1e-6, "gradient", "unit_speed_tol")
    defect = unit_speed_defect(curve)
    if defect > tol:
        raise PreconditionError(f"curve is not unit speed (defect {defect:.3e} > {tol:.1e})",
                                {"defect": defect, "tolerance": tol})
    return defect


def _unit_tangent(curve: FourierCurve, n_samples: int) -> np.ndarray:
    velocity = synthesize(derivative(curve, 1), n_samples).values
    return velocity / np.linalg.norm(velocity, axis=1, keepdims=True)


def project_normal(g: SampledGrid, curve: FourierCurve, speed_tol: Optional[float] = None) -> SampledGrid:
    check_unit_speed(curve, speed_tol)
    tangent = _unit_tangent(curve, g.n_samples)
    along = np.einsum("nd,nd->n", g.values, tangent)
    return SampledGrid(g.values - along[:, None] * tangent)


def project_tangent(g: SampledGrid, curve: FourierCurve) -> SampledGrid:
    tangent = _unit_tangent(curve, g.n_samples)
    along = np.einsum("nd,nd->n", g.values, tangent)
    return SampledGrid(along[:, None] * tangent)


def _resolve_size(curve: FourierCurve, n_samples: Optional[int], trunc: Optional[Truncation] = None) -> int:
    """Explicit size, then the grid a truncation was locked to, then gradient.n_samples."""
    n_samples = n_samples or (trunc.n_samples if trunc is not None else None) \
        or int(config.get_or(512, "gradient", "n_samples"))
    if n_samples < 2 * curve.max_freq + 2:
        raise ConfigurationError(f"n_samples={n_samples} too small for band {curve.max_freq}")
    return n_samples


def _integrands(curve: FourierCurve, rule: InnerRule, n_samples: int, fields: Sequence[str]) -> Dict[str, np.ndarray]:
    """Integrand samples, shape (N, nodes, n), over the signed nodes of the rule."""
    w = rule.signed_nodes()
    k = np.arange(1, curve.max_freq + 1)
    theta = 2.0 * np.pi * np.outer(w, k)
    w4 = (w ** 4)[None, :, None]
    out = {}

    if "q" in fields:
        out["q"] = 4.0 * mode_sum(curve, taylor_phase(theta, 3), n_samples) / w4

    if {"r1", "r2", "h_tilde"} & set(fields):
        delta = mode_sum(curve, taylor_phase(theta, 1), n_samples)
        remainder = mode_sum(curve, taylor_phase(theta, 2), n_samples)
        accel = synthesize(derivative(curve, 2), n_samples).values[:, None, :]
        chord2 = np.sum(delta ** 2, axis=2)[:, :, None]
        w2 = (w ** 2)[None, :, None]

        ratio = float(np.min(chord2 / w2))
        threshold = config.get_or(1e-6, "energy", "simplicity_ratio")
        if ratio < threshold ** 2:
            raise GeometryError("chord collapses inside the truncated domain",
                                {"min_chord_ratio": float(np.sqrt(max(ratio, 0.0)))})

        if "r1" in fields:
            out["r1"] = 4.0 * (1.0 / chord2 ** 2 - 1.0 / w4) * remainder
        if "r2" in fields:
            out["r2"] = -2.0 * (1.0 / chord2 - 1.0 / w2) * accel
        if "h_tilde" in fields:
            out["h_tilde"] = 2.0 * (2.0 * remainder / chord2 - accel) / chord2
    return out


def cell_integrals(curve: FourierCurve, first_cell: int, n_samples: int,
                   fields: Sequence[str] = FIELDS, rule: Optional[str] = None) -> Dict[str, np.ndarray]:
    """Per-cell integrals (N, cells, n) of each field over w and -w together."""
    quad = inner_rule(n_samples, first_cell, rule)
    samples = _integrands(curve, quad, n_samples, fields)
    half = quad.flat_nodes.size
    result = {}
    for name, values in samples.items():
        result[name] = quad.cell_sums(values[:, :half]) + quad.cell_sums(values[:, half:])
    result["_rule"] = quad
    return result


def truncated_fields(curve: FourierCurve, truncs: Sequence[Truncation], n_samples: Optional[int] = None,
                     fields: Sequence[str] = FIELDS, rule: Optional[str] = None) -> List[Dict[str, SampledGrid]]:
    """All requested fields for several grid-locked eps from one quadrature pass."""
    n_samples = _resolve_size(curve, n_samples, truncs[0] if truncs else None)
    cells = [t.cells_for(n_samples) for t in truncs]
    per_cell = cell_integrals(curve, min(cells), n_samples, fields, rule)
    quad = per_cell.pop("_rule")
    results = [{} for _ in truncs]
    for name, values in per_cell.items():
        for slot, total in zip(results, quad.tail_integrals(values, cells)):
            slot[name] = SampledGrid(total)
    return results


def q_eps(curve: FourierCurve, trunc: Truncation, n_samples: Optional[int] = None) -> SampledGrid:
    """Q^eps is linear in the curve and needs no unit-speed assumption."""
    return truncated_fields(curve, [trunc], n_samples, ("q",))[0]["q"]


def r1_eps(curve: FourierCurve, trunc: Truncation, n_samples: Optional[int] = None) -> SampledGrid:
    check_unit_speed(curve)
    return truncated_fields(curve, [trunc], n_samples, ("r1",))[0]["r1"]


def r2_eps(curve: FourierCurve, trunc: Truncation, n_samples: Optional[int] = None) -> SampledGrid:
    check_unit_speed(curve)
    return truncated_fields(curve, [trunc], n_samples, ("r2",))[0]["r2"]


def h_tilde_direct(curve: FourierCurve, trunc: Truncation, n_samples: Optional[int] = None) -> SampledGrid:
    """H~ from its own integrand, independent of the three-way split."""
    check_unit_speed(curve)
    return truncated_fields(curve, [trunc], n_samples, ("h_tilde",))[0]["h_tilde"]


def _assemble(curve: FourierCurve, trunc: Truncation, q: SampledGrid, r1: SampledGrid, r2: SampledGrid,
              method: GradientMethod, speed_tol: Optional[float], extra=None) -> GradientReport:
    h_tilde = SampledGrid(q.values + r1.values + r2.values)
    h = project_normal(h_tilde, curve, speed_tol)
    return GradientReport(trunc, q, r1, r2, h_tilde, h, method, extra or {})


def eps_sweep(curve: FourierCurve, truncs: Sequence[Truncation], n_samples: Optional[int] = None,
              speed_tol: Optional[float] = None) -> List[GradientReport]:
    check_unit_speed(curve, speed_tol)
    fields = truncated_fields(curve, truncs, n_samples, ("q", "r1", "r2"))
    return [_assemble(curve, t, f["q"], f["r1"], f["r2"], GradientMethod.DIRECT, speed_tol)
            for t, f in zip(truncs, fields)]


def extrapolated_remainders(curve: FourierCurve, trunc: Truncation, n_samples: int):
    """R1 and R2 in the limit eps -> 0 by Richardson extrapolation over eps, 2 eps, 4 eps."""
    orders = list(config.get_or([1, 3], "gradient", "richardson_orders"))
    m = trunc.cells_for(n_samples)
    multiples = [1, 2, 4] if 8 * m <= n_samples else [1, 2]
    if len(multiples) < len(orders) + 1:
        logger.warning(f"eps={trunc.eps} too coarse for orders {orders}; extrapolating to first order only")
        orders = orders[:len(multiples) - 1]
    truncs = [Truncation.from_grid(m * j, n_samples) for j in multiples]
    fields = truncated_fields(curve, truncs, n_samples, ("r1", "r2"))
    eps = [t.eps for t in truncs]
    r1 = richardson([f["r1"].values for f in fields], eps, orders)
    r2 = richardson([f["r2"].values for f in fields], eps, orders)
    return SampledGrid(r1), SampledGrid(r2)


def h_gamma(curve: FourierCurve, trunc: Optional[Truncation] = None, method: str = "direct",
            n_samples: Optional[int] = None, table=None, speed_tol: Optional[float] = None) -> GradientReport:
    method = GradientMethod(method)
    n_samples = _resolve_size(curve, n_samples, trunc)
    trunc = trunc or Truncation.default(n_samples)
    defect = check_unit_speed(curve, speed_tol)

    if method is GradientMethod.DIRECT:
        return eps_sweep(curve, [trunc], n_samples, speed_tol)[0]

    if method is GradientMethod.KERNEL_FORM:
        from .kernels import r_kernel_form
        q = truncated_fields(curve, [trunc], n_samples, ("q",))[0]["q"]
        r1 = r_kernel_form(curve, trunc, "R1", n_samples, speed_tol)
        r2 = r_kernel_form(curve, trunc, "R2", n_samples, speed_tol)
        return _assemble(curve, trunc, q, r1, r2, method, speed_tol)

    from ..spectral.multiplier import apply_q_multiplier, build_table
    table = table or build_table(max(curve.max_freq, 1))
    q = synthesize(apply_q_multiplier(curve, table), n_samples)
    r1, r2 = extrapolated_remainders(curve, trunc, n_samples)
    return _assemble(curve, trunc, q, r1, r2, method, speed_tol, {"speed_defect": defect})
