"""Spectral model of closed curves gamma: R/Z -> R^n.

A curve is stored as its Fourier coefficients c(k), k = -K..K, with the
reality constraint c(-k) = conj(c(k)). Every derivative, norm and shifted
evaluation used elsewhere in the package is computed from these
coefficients.
"""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.config import config
from ..utils.errors import ConfigurationError, InputError, InvariantError
from ..utils.logger import logger

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SobolevOrder:
    s: float
    m: Optional[int] = None

    def __post_init__(self):
        if not np.isfinite(self.s) or self.s < 0:
            raise InputError(f"Sobolev order must be finite and >= 0, got {self.s}")

    @classmethod
    def integer(cls, m: int) -> "SobolevOrder":
        return cls(float(m), int(m))


OrderLike = Union[SobolevOrder, float, int]


def _order_value(order: OrderLike) -> float:
    if isinstance(order, SobolevOrder):
        return order.s
    return SobolevOrder(float(order)).s


@dataclass(frozen=True)
class SampledGrid:
    """N real vectors at the nodes x_j = j/N."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise InputError(f"grid values must be (N, n), got shape {values.shape}")
        n_samples = values.shape[0]
        if n_samples < 4 or n_samples % 2:
            raise InputError(f"grid size must be even and >= 4, got {n_samples}")
        if not np.all(np.isfinite(values)):
            raise InputError("grid values contain non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n_samples) / self.n_samples

    def pointwise_dot(self, other: "SampledGrid") -> np.ndarray:
        return np.einsum("nd,nd->n", self.values, other.values)

    def inner(self, other: "SampledGrid") -> float:
        return float(np.mean(self.pointwise_dot(other)))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.mean(np.sum(self.values ** 2, axis=1))))

    def h1_norm(self) -> float:
        return sobolev_norm(analyze(self), 1.0)

    def max_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.values, axis=1)))

    def __add__(self, other: "SampledGrid") -> "SampledGrid":
        return SampledGrid(self.values + other.values)

    def __sub__(self, other: "SampledGrid") -> "SampledGrid":
        return SampledGrid(self.values - other.values)

    def __mul__(self, factor: float) -> "SampledGrid":
        return SampledGrid(self.values * factor)

    __rmul__ = __mul__

    def __repr__(self):
        return f"SampledGrid(N={self.n_samples}, dim={self.dim}, l2={self.l2_norm():.6g})"


@dataclass(frozen=True)
class FourierCurve:
    """Band-limited closed curve; row k + K of `coeffs` holds c(k)."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.ndim == 1:
            coeffs = coeffs[:, None]
        rows = coeffs.shape[0]
        if coeffs.ndim != 2 or rows < 3 or rows % 2 == 0:
            raise InputError(f"coefficient table must be (2K+1, n) with K >= 1, got {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)):
            raise InputError("Fourier coefficients contain non-finite entries")
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        residue = float(np.max(np.abs(coeffs[::-1] - np.conj(coeffs)))) if rows else 0.0
        tol = config.get_or(1e-12, "curves", "reality_tol")
        if residue > tol * scale:
            raise InvariantError("reality constraint c(-k) = conj(c(k)) violated",
                                 {"residue": residue, "tolerance": tol})
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_half(cls, half: np.ndarray) -> "FourierCurve":
        """Builds the curve from c(0..K); negative frequencies by conjugation."""
        half = np.array(half, dtype=complex)
        if half.ndim == 1:
            half = half[:, None]
        half[0] = half[0].real
        full = np.concatenate([np.conj(half[:0:-1]), half], axis=0)
        return cls(full)

    @classmethod
    def zeros(cls, max_freq: int, dim: int) -> "FourierCurve":
        return cls(np.zeros((2 * max_freq + 1, dim), dtype=complex))

    @classmethod
    def constant(cls, value: Sequence[float], max_freq: int = 1) -> "FourierCurve":
        value = np.atleast_1d(np.asarray(value, dtype=float))
        half = np.zeros((max_freq + 1, value.size), dtype=complex)
        half[0] = value
        return cls.from_half(half)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def max_freq(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.arange(-self.max_freq, self.max_freq + 1)

    @property
    def half(self) -> np.ndarray:
        return self.coeffs[self.max_freq:]

    def coefficient(self, k: int) -> np.ndarray:
        if abs(k) > self.max_freq:
            return np.zeros(self.dim, dtype=complex)
        return self.coeffs[k + self.max_freq]

    def component(self, index: int) -> "FourierCurve":
        return FourierCurve(self.coeffs[:, index:index + 1])

    def evaluate(self, x) -> np.ndarray:
        """Values at arbitrary points x, shape (len(x), n)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = np.arange(1, self.max_freq + 1)
        phases = np.exp(1j * TWO_PI * np.outer(x, k))
        return self.half[0].real + 2.0 * np.real(phases @ self.half[1:])

    def __add__(self, other: "FourierCurve") -> "FourierCurve":
        band = max(self.max_freq, other.max_freq)
        return FourierCurve(with_band(self, band).coeffs + with_band(other, band).coeffs)

    def __sub__(self, other: "FourierCurve") -> "FourierCurve":
        return self + other.scaled(-1.0)

    def scaled(self, factor: float) -> "FourierCurve":
        return FourierCurve(self.coeffs * factor)

    def __repr__(self):
        return f"FourierCurve(dim={self.dim}, K={self.max_freq})"


def with_band(curve: FourierCurve, max_freq: int) -> FourierCurve:
    """Truncates or zero-pads the coefficient table to band K."""
    if max_freq < 1:
        raise InputError(f"band must be >= 1, got {max_freq}")
    half = np.zeros((max_freq + 1, curve.dim), dtype=complex)
    keep = min(max_freq, curve.max_freq) + 1
    half[:keep] = curve.half[:keep]
    return FourierCurve.from_half(half)


def _check_grid_size(n_samples: int, max_freq: int) -> None:
    if n_samples < 4 or n_samples % 2:
        raise ConfigurationError(f"grid size must be even and >= 4, got {n_samples}")
    if n_samples < 2 * max_freq + 2:
        raise ConfigurationError(f"grid size {n_samples} too small for band {max_freq} (need >= {2 * max_freq + 2})",
                                 {"n_samples": n_samples, "max_freq": max_freq})


def analyze(samples: Union[SampledGrid, np.ndarray], max_freq: Optional[int] = None) -> FourierCurve:
    if not isinstance(samples, SampledGrid):
        samples = SampledGrid(samples)
    n_samples = samples.n_samples
    band = n_samples // 2 - 1 if max_freq is None else int(max_freq)
    _check_grid_size(n_samples, band)
    spectrum = np.fft.rfft(samples.values, axis=0) / n_samples
    return FourierCurve.from_half(spectrum[:band + 1])


def synthesize(curve: FourierCurve, n_samples: int) -> SampledGrid:
    _check_grid_size(n_samples, curve.max_freq)
    spectrum = np.zeros((n_samples, curve.dim), dtype=complex)
    spectrum[curve.wavenumbers % n_samples] = curve.coeffs
    values = np.fft.ifft(spectrum, axis=0) * n_samples
    residue = float(np.max(np.abs(values.imag)))
    tol = config.get_or(1e-12, "curves", "residue_tol")
    if residue > tol * max(1.0, float(np.max(np.abs(values.real)))):
        raise InvariantError("synthesized values carry an imaginary residue", {"residue": residue})
    return SampledGrid(values.real)


def derivative(curve: FourierCurve, order: int) -> FourierCurve:
    if order < 0:
        raise InputError(f"derivative order must be >= 0, got {order}")
    if order == 0:
        return curve
    k = np.arange(curve.max_freq + 1)
    factor = (1j * TWO_PI * k) ** order
    return FourierCurve.from_half(curve.half * factor[:, None])


def sobolev_norm(curve: FourierCurve, order: OrderLike) -> float:
    s = _order_value(order)
    k = curve.wavenumbers.astype(float)
    weights = (1.0 + k ** 2) ** s
    return float(np.sqrt(np.sum(weights * np.sum(np.abs(curve.coeffs) ** 2, axis=1))))


def sobolev_w_norm(curve: FourierCurve, m: int) -> float:
    """(sum_{j<=m} ||d^j gamma||_{L^2}^2)^(1/2)."""
    k = curve.wavenumbers.astype(float)
    weights = sum((TWO_PI * k) ** (2 * j) for j in range(int(m) + 1))
    return float(np.sqrt(np.sum(weights * np.sum(np.abs(curve.coeffs) ** 2, axis=1))))


@dataclass(frozen=True)
class NormEquivalence:
    m: int
    max_freq: int
    lower: float
    upper: float
    limit: float

    def __repr__(self):
        return (f"NormEquivalence(m={self.m}, K={self.max_freq}, "
                f"{self.lower:.6g} ||.||_H <= ||.||_W <= {self.upper:.6g} ||.||_H)")


def w_h_equivalence(m: int, max_freq: int) -> NormEquivalence:
    """Computed constants with lower*||f||_{H^m} <= ||f||_{W^m} <= upper*||f||_{H^m} on band K."""
    k = np.arange(max_freq + 1, dtype=float)
    ratio = sum((TWO_PI * k) ** (2 * j) for j in range(int(m) + 1)) / (1.0 + k ** 2) ** m
    limit = (TWO_PI ** (2 * m))
    return NormEquivalence(int(m), int(max_freq), float(np.sqrt(ratio.min())),
                           float(np.sqrt(ratio.max())), float(np.sqrt(limit)))


def translate(curve: FourierCurve, shift: float) -> FourierCurve:
    k = np.arange(curve.max_freq + 1)
    return FourierCurve.from_half(curve.half * np.exp(1j * TWO_PI * k * shift)[:, None])


def product(f: FourierCurve, g: FourierCurve) -> FourierCurve:
    """Exact componentwise product; the band of the result is K_f + K_g."""
    if f.dim != g.dim and 1 not in (f.dim, g.dim):
        raise InputError(f"cannot multiply dimensions {f.dim} and {g.dim}")
    dim = max(f.dim, g.dim)
    band = f.max_freq + g.max_freq
    half = np.zeros((band + 1, dim), dtype=complex)
    for d in range(dim):
        full = np.convolve(f.coeffs[:, min(d, f.dim - 1)], g.coeffs[:, min(d, g.dim - 1)])
        half[:, d] = full[band:]
    return FourierCurve.from_half(half)


def compose(curve: FourierCurve, func: Callable[[np.ndarray], np.ndarray], n_samples: int,
            max_freq: Optional[int] = None) -> FourierCurve:
    values = func(synthesize(curve, n_samples).values)
    return analyze(SampledGrid(values), max_freq)


def mode_sum(curve: FourierCurve, factors: np.ndarray, n_samples: int,
             zero_factor: Optional[np.ndarray] = None) -> np.ndarray:
    """Evaluates sum_k c(k) F_j(k) e^{2 pi i k x_i} for every row j of `factors`.

    `factors` has shape (M, K) for k = 1..K and must satisfy F(-k) = conj(F(k));
    `zero_factor` (shape (M,), default zeros) multiplies c(0). Returns (N, M, n).
    """
    factors = np.atleast_2d(factors)
    K = curve.max_freq
    if factors.shape[1] != K:
        raise InputError(f"factor table has {factors.shape[1]} columns, curve band is {K}")
    x = np.arange(n_samples) / n_samples
    k = np.arange(1, K + 1)
    phases = np.exp(1j * TWO_PI * np.outer(x, k))
    out = np.empty((n_samples, factors.shape[0], curve.dim))
    for d in range(curve.dim):
        out[:, :, d] = 2.0 * np.real((phases * curve.half[1:, d]) @ factors.T)
        if zero_factor is not None:
            out[:, :, d] += curve.half[0, d].real * np.asarray(zero_factor, dtype=float)[None, :]
    return out


def shifted_samples(curve: FourierCurve, offsets: Sequence[float], n_samples: int) -> np.ndarray:
    """gamma(x_i + o_j) for all grid nodes x_i and offsets o_j, shape (N, M, n)."""
    offsets = np.atleast_1d(np.asarray(offsets, dtype=float))
    k = np.arange(1, curve.max_freq + 1)
    factors = np.exp(1j * TWO_PI * np.outer(offsets, k))
    return mode_sum(curve, factors, n_samples, zero_factor=np.ones(offsets.size))


def oversampled_size(curve: FourierCurve, factor: Optional[int] = None) -> int:
    factor = factor or int(config.get_or(4, "curves", "length_oversampling"))
    target = factor * (2 * curve.max_freq + 2)
    return int(2 ** np.ceil(np.log2(max(target, 16))))


def speed_profile(curve: FourierCurve, n_samples: int) -> np.ndarray:
    velocity = synthesize(derivative(curve, 1), n_samples).values
    return np.linalg.norm(velocity, axis=1)


def resolved_speed(curve: FourierCurve, n_samples: Optional[int] = None) -> FourierCurve:
    """Fourier series of |gamma'|.

    |gamma'| is not band-limited, so without an explicit grid the grid is
    doubled until the top quarter of the analyzed band falls below
    speed_resolution_tol times the mean; the series is then cut where its
    coefficients reach that floor.
    """
    if n_samples:
        return analyze(SampledGrid(speed_profile(curve, n_samples)))
    tol = config.get_or(1e-14, "curves", "speed_resolution_tol")
    cap = int(config.get_or(65536, "curves", "max_speed_samples"))
    n = oversampled_size(curve)
    while True:
        speed = analyze(SampledGrid(speed_profile(curve, n)))
        magnitude = np.abs(speed.half[:, 0])
        floor = tol * max(float(magnitude[0]), np.finfo(float).tiny)
        tail = float(np.max(magnitude[3 * speed.max_freq // 4:]))
        if tail <= floor:
            break
        if 2 * n > cap:
            logger.warning(f"speed spectrum unresolved on {n} nodes (tail {tail / magnitude[0]:.2e} of the mean)")
            break
        n *= 2
    kept = np.nonzero(magnitude > floor)[0]
    return with_band(speed, max(int(kept[-1]) if kept.size else 1, 1))


def length(curve: FourierCurve, n_samples: Optional[int] = None) -> float:
    if n_samples:
        return float(np.mean(speed_profile(curve, n_samples)))
    return float(resolved_speed(curve).half[0, 0].real)


def unit_speed_defect(curve: FourierCurve, n_samples: Optional[int] = None) -> float:
    """max_x | |gamma'(x)| - 1 | on the grid."""
    n_samples = n_samples or oversampled_size(curve)
    return float(np.max(np.abs(speed_profile(curve, n_samples) - 1.0)))


def curvature_squared(curve: FourierCurve, n_samples: int) -> np.ndarray:
    """Geometric curvature kappa^2 at the grid nodes, valid for any regular parametrization."""
    v = synthesize(derivative(curve, 1), n_samples).values
    a = synthesize(derivative(curve, 2), n_samples).values
    vv = np.sum(v * v, axis=1)
    aa = np.sum(a * a, axis=1)
    va = np.sum(v * a, axis=1)
    return np.maximum(vv * aa - va ** 2, 0.0) / vv ** 3


@dataclass(frozen=True)
class CumulativeLength:
    """s(x) = total * x + p(x) - p(0), the arc length from 0 to x."""

    total: float
    periodic: FourierCurve

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        base = self.periodic.evaluate(np.zeros(1))[0, 0]
        return self.total * x + self.periodic.evaluate(x)[:, 0] - base

    def shifted(self, offsets: Sequence[float], n_samples: int) -> np.ndarray:
        """s(x_i + o_j) - s(x_i) on the grid, shape (N, M)."""
        offsets = np.atleast_1d(np.asarray(offsets, dtype=float))
        k = np.arange(1, self.periodic.max_freq + 1)
        factors = np.expm1(1j * TWO_PI * np.outer(offsets, k))
        periodic_part = mode_sum(self.periodic, factors, n_samples)[:, :, 0]
        return self.total * offsets[None, :] + periodic_part


def cumulative_length(curve: FourierCurve, n_samples: Optional[int] = None) -> CumulativeLength:
    speed = resolved_speed(curve, n_samples)
    k = np.arange(speed.max_freq + 1)
    half = np.zeros_like(speed.half)
    half[1:] = speed.half[1:] / (1j * TWO_PI * k[1:, None])
    return CumulativeLength(float(speed.half[0, 0].real), FourierCurve.from_half(half))
