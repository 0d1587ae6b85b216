"""Moebius energy of closed curves.

The chord kernel 1/|gamma(u) - gamma(v)|^2 is paired with the kernel of the
round circle of the same length, (pi/L)^2 / sin^2(pi sigma / L), where sigma is
the arc length between the two points. The circle part integrates in closed
form against 1/D^2 to exactly 4, and what remains is a smooth periodic
integrand on which the double trapezoid rule converges spectrally.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from ..curves.fourier_curve import (
    FourierCurve,
    SampledGrid,
    cumulative_length,
    curvature_squared,
    derivative,
    mode_sum,
    speed_profile,
    synthesize,
)
from ..utils.config import config
from ..utils.errors import ConfigurationError, GeometryError, InputError
from ..utils.logger import logger

CIRCLE_COMPLEMENT = 4.0


class DiagonalRule(str, Enum):
    TAYLOR_LIMIT = "taylor_limit"
    SKIP_CELL = "skip_cell"


@dataclass(frozen=True)
class EnergyQuadrature:
    n_outer: int = 256
    n_inner: int = 256
    diagonal_rule: DiagonalRule = DiagonalRule.TAYLOR_LIMIT

    def __post_init__(self):
        for name in ("n_outer", "n_inner"):
            size = getattr(self, name)
            if size < 16 or size % 2:
                raise ConfigurationError(f"{name} must be even and >= 16, got {size}")
        try:
            object.__setattr__(self, "diagonal_rule", DiagonalRule(self.diagonal_rule))
        except ValueError:
            raise ConfigurationError(f"unknown diagonal rule {self.diagonal_rule!r}")

    @classmethod
    def from_config(cls, n: Optional[int] = None) -> "EnergyQuadrature":
        return cls(
            n_outer=n or int(config.get_or(256, "energy", "n_outer")),
            n_inner=n or int(config.get_or(256, "energy", "n_inner")),
            diagonal_rule=config.get_or("taylor_limit", "energy", "diagonal_rule"),
        )


@dataclass
class EnergyReport:
    energy: float
    length: float
    min_chord_ratio: float
    quadrature: EnergyQuadrature

    def to_dict(self):
        return {
            "energy": self.energy,
            "length": self.length,
            "min_chord_ratio": self.min_chord_ratio,
            "n_outer": self.quadrature.n_outer,
            "n_inner": self.quadrature.n_inner,
            "diagonal_rule": self.quadrature.diagonal_rule.value,
        }

    def __repr__(self):
        return f"EnergyReport(E={self.energy:.12f}, L={self.length:.6g}, min_chord_ratio={self.min_chord_ratio:.3g})"


def intrinsic_distance(x: Union[float, np.ndarray], y: Union[float, np.ndarray], length: float):
    if not length > 0:
        raise InputError(f"length must be positive, got {length}")
    gap = np.mod(np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)), length)
    result = np.minimum(gap, length - gap)
    return float(result) if np.ndim(result) == 0 else result


def _inner_offsets(n_inner: int) -> np.ndarray:
    return np.arange(-n_inner // 2, n_inner // 2) / n_inner


def evaluate_energy(curve: FourierCurve, quad: Optional[EnergyQuadrature] = None) -> EnergyReport:
    quad = quad or EnergyQuadrature.from_config()
    n, m = quad.n_outer, quad.n_inner
    if n < 2 * curve.max_freq + 2:
        raise ConfigurationError(f"n_outer={n} too small for band {curve.max_freq}")

    offsets = _inner_offsets(m)
    k = np.arange(1, curve.max_freq + 1)
    chords = mode_sum(curve, np.expm1(2j * np.pi * np.outer(offsets, k)), n)
    velocity = derivative(curve, 1)
    speed_u = speed_profile(curve, n)
    shifted_velocity = mode_sum(velocity, np.exp(2j * np.pi * np.outer(offsets, k)), n)
    speed_v = np.linalg.norm(shifted_velocity, axis=2)

    arc = cumulative_length(curve)
    total = arc.total
    sigma = arc.shifted(offsets, n)
    chord2 = np.sum(chords ** 2, axis=2)

    diagonal = offsets == 0.0
    off = ~diagonal
    band = int(config.get_or(1, "energy", "diagonal_band"))
    ratio_threshold = config.get_or(1e-6, "energy", "simplicity_ratio")
    distance = intrinsic_distance(sigma, 0.0, total)
    index = np.arange(-m // 2, m // 2)
    checked = np.abs(index) > band
    ratios = np.sqrt(chord2[:, checked]) / distance[:, checked]
    min_ratio = float(np.min(ratios)) if ratios.size else 1.0
    if min_ratio < ratio_threshold:
        i, j = np.unravel_index(np.argmin(ratios), ratios.shape)
        raise GeometryError("curve is not simple: chord collapses away from the diagonal",
                            {"min_chord_ratio": min_ratio, "u": i / n, "w": float(offsets[checked][j])})

    integrand = np.zeros((n, m))
    model = (np.pi / total) ** 2 / np.sin(np.pi * sigma[:, off] / total) ** 2
    integrand[:, off] = (1.0 / chord2[:, off] - model) * speed_u[:, None] * speed_v[:, off]
    if quad.diagonal_rule is DiagonalRule.TAYLOR_LIMIT:
        kappa2 = curvature_squared(curve, n)
        integrand[:, diagonal] = ((kappa2 / 12.0 - np.pi ** 2 / (3.0 * total ** 2)) * speed_u ** 2)[:, None]

    energy = CIRCLE_COMPLEMENT + float(np.mean(integrand))
    if energy < CIRCLE_COMPLEMENT - 1e-6:
        logger.warning(f"energy {energy:.10f} below the round-circle value; quadrature is under-resolved")
    report = EnergyReport(energy, total, min_ratio, quad)
    logger.debug(f"{report}")
    return report


def moebius_energy(curve: FourierCurve, quad: Optional[EnergyQuadrature] = None) -> float:
    return evaluate_energy(curve, quad).energy


def variation_pairing(gradient: SampledGrid, direction: Union[FourierCurve, SampledGrid]) -> float:
    """First variation dE(gamma; h) = int <H gamma, h> dx for a unit-speed gamma."""
    if isinstance(direction, FourierCurve):
        direction = synthesize(direction, gradient.n_samples)
    if direction.n_samples != gradient.n_samples or direction.dim != gradient.dim:
        raise InputError("gradient and direction live on different grids")
    return gradient.inner(direction)
