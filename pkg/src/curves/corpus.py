"""Reference curves used by the tests, the self-test and the `corpus` command."""
from typing import List, Optional

import numpy as np

from ..utils.config import config
from ..utils.logger import logger
from .fourier_curve import FourierCurve, SampledGrid, analyze, unit_speed_defect, with_band
from .reparametrize import arclength_reparametrize

UNIT_RADIUS = 1.0 / (2.0 * np.pi)
RANDOM_BAND_LIMIT = 56


def circle(radius: float = UNIT_RADIUS, dim: int = 2, max_freq: int = 1) -> FourierCurve:
    half = np.zeros((max_freq + 1, dim), dtype=complex)
    half[1, 0] = radius / 2
    half[1, 1] = -1j * radius / 2
    return FourierCurve.from_half(half)


def unit_circle(dim: int = 2, max_freq: int = 1) -> FourierCurve:
    """Round circle of length 1 parametrized by arc length."""
    return circle(UNIT_RADIUS, dim, max_freq)


def ellipse(a: float = 1.0, b: float = 0.5, dim: int = 2, max_freq: int = 1) -> FourierCurve:
    half = np.zeros((max_freq + 1, dim), dtype=complex)
    half[1, 0] = a / 2
    half[1, 1] = -1j * b / 2
    return FourierCurve.from_half(half)


def deltoid(scale: float = 1.0) -> FourierCurve:
    """(2 cos t + cos 2t, 2 sin t - sin 2t); speed vanishes at the three cusps, one at x = 0."""
    half = np.zeros((3, 2), dtype=complex)
    half[1] = [1.0, -1j]
    half[2] = [0.5, 0.5j]
    return FourierCurve.from_half(half * scale)


def trefoil(tube: float = 0.2, max_freq: int = 5) -> FourierCurve:
    """(2, 3) torus knot ((1 + r cos 3t) cos 2t, (1 + r cos 3t) sin 2t, r sin 3t), not arc-length parametrized."""
    t = 2 * np.pi * np.arange(16) / 16
    radius = 1.0 + tube * np.cos(3 * t)
    samples = np.column_stack([radius * np.cos(2 * t), radius * np.sin(2 * t), tube * np.sin(3 * t)])
    return with_band(analyze(SampledGrid(samples), 5), max(max_freq, 5))


def nonuniform_circle(strength: float = 0.1, n_samples: int = 256, max_freq: Optional[int] = None) -> FourierCurve:
    """Unit circle traced with angle theta(x) = x + strength sin(2 pi x) / (2 pi)."""
    x = np.arange(n_samples) / n_samples
    theta = 2 * np.pi * (x + strength * np.sin(2 * np.pi * x) / (2 * np.pi))
    samples = UNIT_RADIUS * np.column_stack([np.cos(theta), np.sin(theta)])
    return analyze(SampledGrid(samples), max_freq)


def perturbed_circle(amplitude: float = 0.05, mode: int = 2, dim: int = 2, lift: float = 0.0,
                     n_samples: int = 512, max_freq: int = 24, unit_speed: bool = True) -> FourierCurve:
    """Circle with radial profile 1 + amplitude cos(mode t), optionally lifted out of the plane."""
    t = 2 * np.pi * np.arange(n_samples) / n_samples
    radius = 1.0 + amplitude * np.cos(mode * t)
    samples = np.zeros((n_samples, dim))
    samples[:, 0] = radius * np.cos(t)
    samples[:, 1] = radius * np.sin(t)
    if dim > 2:
        samples[:, 2] = lift * np.sin((mode + 1) * t)
    curve = analyze(SampledGrid(samples), mode + 1)
    if unit_speed:
        curve = arclength_reparametrize(curve, n_samples=n_samples)
    return with_band(curve, max_freq)


def _settled_band(curve: FourierCurve, max_freq: int, limit: int) -> int:
    """Smallest band from max_freq up in steps of 8 whose cut keeps the speed defect under corpus_speed_tol."""
    tol = config.get_or(1e-11, "curves", "corpus_speed_tol")
    band = max_freq
    while band + 8 <= limit and unit_speed_defect(with_band(curve, band)) > tol:
        band += 8
    if unit_speed_defect(with_band(curve, band)) > tol:
        logger.warning(f"random curve keeps speed defect above {tol:.1e} at band {band}")
    return band


def random_curve(seed: Optional[int] = None, dim: int = 3, amplitude: float = 0.03, modes: int = 4,
                 n_samples: int = 512, max_freq: int = 24, unit_speed: bool = True) -> FourierCurve:
    """Unit circle plus a random band-limited perturbation with decaying amplitudes.

    The unit-speed variant keeps at least max_freq modes, more when the cut
    at max_freq would leave a visible speed defect.
    """
    rng = np.random.default_rng(config.get_or(12345, "runtime", "seed") if seed is None else seed)
    half = np.zeros((modes + 1, dim), dtype=complex)
    half[1] = circle(1.0, dim).half[1]
    for k in range(1, modes + 1):
        noise = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        half[k] += amplitude * noise / k ** 2
    base = FourierCurve.from_half(half)
    if not unit_speed:
        return base
    curve = arclength_reparametrize(base, n_samples=n_samples)
    return with_band(curve, _settled_band(curve, max_freq, min(RANDOM_BAND_LIMIT, curve.max_freq)))


def standard_corpus(seed: Optional[int] = None, count: int = 6, max_freq: int = 24) -> List[FourierCurve]:
    """Unit-speed, length-1 curves near the round circle, planar and spatial."""
    curves = [
        unit_circle(2, max_freq),
        perturbed_circle(0.05, 2, max_freq=max_freq),
        perturbed_circle(0.03, 3, max_freq=max_freq),
        perturbed_circle(0.04, 2, dim=3, lift=0.02, max_freq=max_freq),
    ]
    base_seed = config.get_or(12345, "runtime", "seed") if seed is None else seed
    index = 0
    while len(curves) < count:
        curves.append(random_curve(base_seed + index, max_freq=max_freq))
        index += 1
    return curves[:count]
