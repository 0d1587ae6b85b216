"""Truncated bilinear Hilbert transform on the circle.

    H(f, g)(x) = int_{eps <= |w| <= 1/2} f(x + s1 w) g(x + s2 w) dw / w

Two evaluation paths: quadrature on the grid-locked cells shared with the
gradient module, and the sine-integral formula on Fourier coefficients.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

import numpy as np
from scipy.special import beta, betainc

from ..curves.fourier_curve import FourierCurve, SampledGrid, analyze, shifted_samples, sobolev_norm
from ..gradient.quadrature import Truncation, inner_rule
from ..utils.config import config
from ..utils.errors import ConfigurationError, InputError
from .multiplier import SI_SUP, sine_integral


class BhtMethod(str, Enum):
    DIRECT = "direct"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class BhtQuery:
    s1: float
    s2: float
    eps: float
    method: BhtMethod = BhtMethod.SPECTRAL

    def __post_init__(self):
        for name in ("s1", "s2"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise InputError(f"{name} must lie in [0, 1], got {value}")
        if not (0.0 < self.eps <= 0.5):
            raise InputError(f"eps must lie in (0, 1/2], got {self.eps}")
        try:
            object.__setattr__(self, "method", BhtMethod(self.method))
        except ValueError:
            raise ConfigurationError(f"unknown BHT method {self.method!r}")


def bht_multiplier(phi: np.ndarray, eps: float) -> np.ndarray:
    """2i (Si(phi/2) - Si(phi eps)), the action on e(l x) e(j x) with phi = 2 pi (l s1 + j s2)."""
    return 2j * (sine_integral(0.5 * phi) - sine_integral(phi * eps))


def bht_coefficients(f_hat: np.ndarray, g_hat: np.ndarray, s1: float, s2: float, eps: float) -> np.ndarray:
    """Dense coefficient formula on centred tables f(-Kf..Kf), g(-Kg..Kg); returns band Kf + Kg."""
    f_hat = np.asarray(f_hat, dtype=complex)
    g_hat = np.asarray(g_hat, dtype=complex)
    kf, kg = (f_hat.size - 1) // 2, (g_hat.size - 1) // 2
    band = kf + kg
    l = np.arange(-kf, kf + 1)
    k = np.arange(-band, band + 1)
    j = k[:, None] - l[None, :]
    valid = np.abs(j) <= kg
    g_shift = np.where(valid, g_hat[np.clip(j + kg, 0, 2 * kg)], 0.0)
    phi = 2.0 * np.pi * (l[None, :] * s1 + j * s2)
    return np.sum(f_hat[None, :] * g_shift * bht_multiplier(phi, eps), axis=1)


def _spectral(f: FourierCurve, g: FourierCurve, query: BhtQuery) -> FourierCurve:
    band = f.max_freq + g.max_freq
    full = bht_coefficients(f.coeffs[:, 0], g.coeffs[:, 0], query.s1, query.s2, query.eps)
    return FourierCurve.from_half(full[band:, None])


def _direct(f: FourierCurve, g: FourierCurve, query: BhtQuery, n_samples: int) -> FourierCurve:
    band = f.max_freq + g.max_freq
    if n_samples < 2 * band + 2:
        raise ConfigurationError(f"output band {band} aliases on a grid of {n_samples} nodes",
                                 {"band": band, "n_samples": n_samples})
    cells = Truncation(query.eps).cells_for(n_samples)
    rule = inner_rule(n_samples, cells)
    w = rule.signed_nodes()
    values = (shifted_samples(f, query.s1 * w, n_samples)[:, :, 0]
              * shifted_samples(g, query.s2 * w, n_samples)[:, :, 0] / w[None, :])
    half = rule.flat_nodes.size
    per_cell = rule.cell_sums(values[:, :half]) + rule.cell_sums(values[:, half:])
    return analyze(SampledGrid(per_cell.sum(axis=1)), band)


def bht(f: FourierCurve, g: FourierCurve, query: BhtQuery, n_samples: Optional[int] = None) -> FourierCurve:
    if f.dim != 1 or g.dim != 1:
        raise InputError(f"bht takes scalar functions, got dimensions {f.dim} and {g.dim}")
    if query.method is BhtMethod.SPECTRAL:
        return _spectral(f, g, query)
    band = f.max_freq + g.max_freq
    n_samples = n_samples or max(int(config.get_or(512, "gradient", "n_samples")), 4 * band + 4)
    return _direct(f, g, query, n_samples)


@dataclass(frozen=True)
class BhtConstants:
    m: float
    M: float
    C0: float
    Cm: float
    CH: float

    def to_dict(self) -> Dict[str, float]:
        return {"m": self.m, "M": self.M, "C0": self.C0, "Cm": self.Cm, "CH": self.CH}


def sobolev_series_constant(m: float, terms: Optional[int] = None) -> float:
    """(sum_k (1 + k^2)^(-m))^(1/2): partial sum, then the tail by Euler-Maclaurin.

    The tail integral int_N^inf (1 + x^2)^(-m) dx is B_u(m - 1/2, 1/2) / 2 with u = 1 / (1 + N^2).
    """
    if not m > 0.5:
        raise InputError(f"the series diverges for m <= 1/2, got m={m}")
    terms = terms or int(config.get_or(100000, "bht", "series_terms"))
    k = np.arange(1, terms + 1, dtype=float)
    partial = 1.0 + 2.0 * np.sum((1.0 + k ** 2) ** (-m))
    n = float(terms)
    integral = 0.5 * betainc(m - 0.5, 0.5, 1.0 / (1.0 + n * n)) * beta(m - 0.5, 0.5)
    f_n = (1.0 + n * n) ** (-m)
    df_n = -2.0 * m * n * (1.0 + n * n) ** (-m - 1.0)
    tail = integral - 0.5 * f_n - df_n / 12.0
    return float(np.sqrt(partial + 2.0 * tail))


def bht_constants(m: Optional[float] = None) -> BhtConstants:
    m = float(m if m is not None else config.get_or(1.0, "bht", "m"))
    c0 = sobolev_series_constant(m)
    big_m = 4.0 * SI_SUP
    cm = 2.0 ** m
    return BhtConstants(m, big_m, c0, cm, 2.0 * big_m * cm * c0)


@dataclass
class BoundReport:
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-12)

    def to_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def bound_check(f: FourierCurve, g: FourierCurve, query: BhtQuery, constants: BhtConstants,
                n_samples: Optional[int] = None) -> BoundReport:
    """||H(f, g)||_{H^m} against C_H ||f||_{H^m} ||g||_{H^m}."""
    result = bht(f, g, query, n_samples)
    lhs = sobolev_norm(result, constants.m)
    rhs = constants.CH * sobolev_norm(f, constants.m) * sobolev_norm(g, constants.m)
    return BoundReport(lhs, rhs)


def young_check(x: np.ndarray, y: np.ndarray) -> BoundReport:
    """||x * y||_2 <= ||x||_1 ||y||_2 for finitely supported sequences."""
    conv = np.convolve(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
    return BoundReport(float(np.linalg.norm(conv)), float(np.sum(np.abs(x)) * np.linalg.norm(y)))


def sobolev_lemma_check(f: FourierCurve, constants: BhtConstants) -> BoundReport:
    """||f^||_{l^1} <= C_0 ||f||_{H^m}."""
    return BoundReport(float(np.sum(np.abs(f.coeffs))), constants.C0 * sobolev_norm(f, constants.m))
