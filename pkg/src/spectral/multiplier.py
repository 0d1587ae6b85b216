"""Fourier multiplier form of the leading operator Q.

On a closed curve Q acts diagonally: (Q gamma)^(k) = P lambda_|k| |k|^3 c(k), with

    lambda_k = (2/3) int_0^{k pi} (1 - t/(k pi))^3 sin(t)/t dt,

positive and tending to pi/3. The prefactor P that follows from the
truncated integral is 16 pi^3; the normalization pi^3/2 is kept selectable.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.integrate import quad
from scipy.special import sici

from ..curves.fourier_curve import FourierCurve, derivative, sobolev_norm
from ..utils.config import config
from ..utils.errors import ConfigurationError, InputError
from ..utils.logger import logger

CONSISTENT_PREFACTOR = 16.0 * np.pi ** 3
PRINTED_PREFACTOR = np.pi ** 3 / 2.0
LAMBDA_LIMIT = np.pi / 3.0


def sine_integral(x):
    """Si(x) for real x, extended to x < 0 by oddness."""
    x = np.asarray(x, dtype=float)
    value = np.sign(x) * sici(np.abs(x))[0]
    return float(value) if value.ndim == 0 else value


SI_SUP = sine_integral(np.pi)


def resolve_prefactor(prefactor: Union[str, float, None] = None) -> float:
    prefactor = prefactor if prefactor is not None else config.get_or("consistent", "spectral", "prefactor")
    if isinstance(prefactor, str):
        named = {"consistent": CONSISTENT_PREFACTOR, "printed": PRINTED_PREFACTOR}
        if prefactor not in named:
            raise ConfigurationError(f"unknown prefactor {prefactor!r}; use 'consistent', 'printed' or a number")
        return named[prefactor]
    value = float(prefactor)
    if not value > 0:
        raise ConfigurationError(f"prefactor must be positive, got {value}")
    return value


def lambda_k(k: int, nodes_per_panel: Optional[int] = None) -> float:
    """Gauss-Legendre on the panels [j pi, (j+1) pi]; sin(t)/t is completed by 1 at t = 0."""
    if k < 1:
        raise InputError(f"lambda_k needs k >= 1, got {k}")
    nodes_per_panel = nodes_per_panel or int(config.get_or(24, "spectral", "nodes_per_panel"))
    xi, wi = np.polynomial.legendre.leggauss(nodes_per_panel)
    t = (np.arange(k)[:, None] + 0.5 * (xi[None, :] + 1.0)) * np.pi
    integrand = (1.0 - t / (k * np.pi)) ** 3 * np.sinc(t / np.pi)
    return float((2.0 / 3.0) * 0.5 * np.pi * np.sum(integrand * wi[None, :]))


def c_tilde(lam: np.ndarray, prefactor: float, tail_margin: Optional[float] = None) -> float:
    """(inf_k (P lambda_k)^2 / (2 pi)^6)^(-1/2), the tail bounded by pi/3 - margin."""
    tail_margin = tail_margin if tail_margin is not None else config.get_or(0.05, "spectral", "tail_margin")
    floor = min(float(np.min(lam)), LAMBDA_LIMIT - tail_margin)
    return (2.0 * np.pi) ** 3 / (prefactor * floor)


@dataclass(frozen=True)
class MultiplierTable:
    max_k: int
    lam: np.ndarray
    prefactor: float
    c_tilde: float

    def __post_init__(self):
        if self.lam.shape != (self.max_k,):
            raise InputError(f"lambda table has shape {self.lam.shape}, expected ({self.max_k},)")
        if np.any(self.lam <= 0):
            raise InputError("lambda table contains non-positive entries")

    def lam_at(self, k: int) -> float:
        return float(self.lam[abs(k) - 1])

    def symbol(self, k: Union[int, np.ndarray]) -> np.ndarray:
        """P lambda_|k| |k|^3, zero at k = 0."""
        k = np.abs(np.asarray(k, dtype=int))
        if np.any(k > self.max_k):
            raise ConfigurationError(f"table holds k <= {self.max_k}, asked for {int(np.max(k))}")
        padded = np.concatenate([[0.0], self.lam])
        return self.prefactor * padded[k] * k.astype(float) ** 3

    def to_frame(self) -> pd.DataFrame:
        k = np.arange(1, self.max_k + 1)
        return pd.DataFrame({"k": k, "lambda": self.lam, "deviation": np.abs(self.lam - LAMBDA_LIMIT)})

    def __repr__(self):
        return f"MultiplierTable(K={self.max_k}, prefactor={self.prefactor:.6g}, C~={self.c_tilde:.6g})"


def build_table(max_k: Optional[int] = None, prefactor: Union[str, float, None] = None,
                threads: Optional[int] = None) -> MultiplierTable:
    max_k = max_k or int(config.get_or(64, "spectral", "default_max_k"))
    if max_k < 1:
        raise InputError(f"max_k must be >= 1, got {max_k}")
    threads = threads or config.threads()
    ks = list(range(1, max_k + 1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda_k, ks))
    else:
        values = [lambda_k(k) for k in ks]
    lam = np.array(values)
    factor = resolve_prefactor(prefactor)
    table = MultiplierTable(max_k, lam, factor, c_tilde(lam, factor))
    logger.info(f"Built {table} with {threads} thread(s)")
    return table


def apply_q_multiplier(curve: FourierCurve, table: MultiplierTable) -> FourierCurve:
    if table.max_k < curve.max_freq:
        raise ConfigurationError(f"multiplier table (K={table.max_k}) shorter than curve band {curve.max_freq}")
    symbol = table.symbol(np.arange(curve.max_freq + 1))
    return FourierCurve.from_half(curve.half * symbol[:, None])


def q_eps_symbol(k: int, eps: float) -> float:
    """Exact symbol of Q^eps: 32 pi^3 k^3 int_0^1 (1-t)^2 (Si(pi k t) - Si(2 pi k t eps)) dt."""
    if not (0.0 < eps <= 0.5):
        raise InputError(f"eps must lie in (0, 1/2], got {eps}")
    k = abs(int(k))
    if k == 0:
        return 0.0

    def integrand(t):
        return (1.0 - t) ** 2 * (sine_integral(np.pi * k * t) - sine_integral(2.0 * np.pi * k * t * eps))

    value, _ = quad(integrand, 0.0, 1.0, limit=400, epsabs=1e-14, epsrel=1e-13)
    return 32.0 * np.pi ** 3 * k ** 3 * value


@dataclass
class CorollaryReport:
    l: int
    m: float
    lhs: float
    rhs: float
    c_tilde: float
    holds: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else 0.0

    def to_dict(self) -> Dict[str, float]:
        return {"l": self.l, "m": self.m, "lhs": self.lhs, "rhs": self.rhs, "c_tilde": self.c_tilde,
                "holds": self.holds, "ratio": self.ratio}


def corollary_bound_check(curve: FourierCurve, l: int, m: float, table: MultiplierTable) -> CorollaryReport:
    """||d^{l+3} gamma||_{H^m} <= C~ ||d^l Q gamma||_{H^m}."""
    if l < 0:
        raise InputError(f"l must be >= 0, got {l}")
    lhs = sobolev_norm(derivative(curve, l + 3), m)
    rhs = sobolev_norm(derivative(apply_q_multiplier(curve, table), l), m)
    holds = lhs <= table.c_tilde * rhs * (1.0 + 1e-12)
    return CorollaryReport(l, m, lhs, rhs, table.c_tilde, bool(holds))


def single_mode_ratio(k: int, table: MultiplierTable) -> float:
    """lhs / rhs of the derivative bound for one harmonic: (2 pi)^3 / (P lambda_k)."""
    return (2.0 * np.pi) ** 3 / (table.prefactor * table.lam_at(k))
