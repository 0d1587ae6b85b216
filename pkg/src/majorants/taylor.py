"""Truncated power series and the Taylor recursion for c' = g(c), c(0) = 0."""
from dataclasses import dataclass
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from ..utils.config import config
from ..utils.errors import InputError, MajorantOverflowError
from ..utils.logger import logger

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class MultiSeries:
    """g: R^d -> R^d as Taylor coefficients, components[i][alpha] = coefficient of y^alpha.

    `degree` is the total degree up to which the data is complete; missing
    monomials of lower degree are zero.
    """

    components: Tuple[Dict[Monomial, float], ...]
    degree: int

    def __post_init__(self):
        dims = self.dims
        for component in self.components:
            for alpha in component:
                if len(alpha) != dims:
                    raise InputError(f"monomial {alpha} does not match dimension {dims}")
                if sum(alpha) > self.degree:
                    raise InputError(f"monomial {alpha} exceeds the declared degree {self.degree}")

    @property
    def dims(self) -> int:
        return len(self.components)

    @classmethod
    def scalar(cls, coeffs: Sequence[float]) -> "MultiSeries":
        """One-dimensional series from c_0, c_1, ..."""
        return cls(({(m,): c for m, c in enumerate(coeffs) if c != 0},), len(coeffs) - 1)

    def padded(self, degree: int) -> "MultiSeries":
        return MultiSeries(self.components, max(degree, self.degree))


@dataclass(frozen=True)
class TaylorSeries:
    """coeffs[i, k] is the t^k coefficient of component i at the expansion point 0."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if coeffs.shape[1] < 2:
            raise InputError(f"a Taylor series needs length >= 1, got shape {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)):
            raise InputError("Taylor coefficients contain non-finite entries")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def length(self) -> int:
        return self.coeffs.shape[1] - 1

    def derivatives(self) -> np.ndarray:
        """c^(k)(0) = k! c_k."""
        scale = np.array([float(factorial(k)) for k in range(self.length + 1)])
        return self.coeffs * scale[None, :]


def _series_mul(a: List, b: List, order: int) -> List:
    out = [mpmath.mpf(0)] * (order + 1)
    for i, ai in enumerate(a[:order + 1]):
        if ai == 0:
            continue
        for j in range(order + 1 - i):
            out[i + j] += ai * b[j]
    return out


def _monomial_series(solution: List[List], alpha: Monomial, order: int, cache: Dict) -> List:
    if alpha in cache:
        return cache[alpha]
    value = [mpmath.mpf(0)] * (order + 1)
    value[0] = mpmath.mpf(1)
    for j, power in enumerate(alpha):
        for _ in range(power):
            value = _series_mul(value, solution[j], order)
    cache[alpha] = value
    return value


def ck_taylor_solve(g_series: MultiSeries, order: int, dps: Optional[int] = None,
                    ceiling: Optional[float] = None) -> TaylorSeries:
    """Degree-by-degree Taylor coefficients of the solution of c' = g(c), c(0) = 0.

    (k + 1) c_{k+1} = [t^k] g(c(t)); since c(0) = 0 only monomials of total
    degree <= k reach t^k, so data complete to degree order - 1 fixes c up
    to t^order exactly.
    """
    if order < 1:
        raise InputError(f"order must be >= 1, got {order}")
    if g_series.degree < order - 1:
        raise InputError(f"g is known to degree {g_series.degree}, order {order} needs {order - 1}")
    dps = dps or int(config.get_or(50, "majorants", "precision_dps"))
    ceiling = ceiling or float(config.get_or(1e300, "majorants", "overflow_ceiling"))
    dims = g_series.dims

    with mpmath.workdps(dps):
        solution = [[mpmath.mpf(0)] * (order + 1) for _ in range(dims)]
        for k in range(order):
            cache: Dict[Monomial, List] = {}
            for i, component in enumerate(g_series.components):
                rate = mpmath.mpf(0)
                for alpha, coefficient in component.items():
                    if sum(alpha) <= k:
                        rate += coefficient * _monomial_series(solution, alpha, k, cache)[k]
                solution[i][k + 1] = rate / (k + 1)
                if abs(solution[i][k + 1]) * factorial(k + 1) > ceiling:
                    partial = [[float(c) for c in row[:k + 1]] for row in solution]
                    raise MajorantOverflowError(f"Taylor coefficients exceed {ceiling:.3g} at order {k + 1}",
                                                k + 1, partial)
        coeffs = np.array([[float(c) for c in row] for row in solution])
    logger.debug(f"Taylor recursion: {dims} component(s) to order {order}")
    return TaylorSeries(coeffs)
