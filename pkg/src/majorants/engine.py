"""Method of majorants for the derivative ladder of a critical curve.

The ladder a_l = C_1 ||d^l f||_{H^1}, f = (gamma', gamma'', gamma'', gamma''),
is compared with the recursion

    a~_{l+1} = C ( sum_{k1 <= l} sum_{k2 <= k1} C(l, k1) C(k1, k2) a~_{l-k1} a~_{k1-k2} a~_{k2}
                   + p_l({g-bound(|alpha|)}, {a~_j}) ) + a~_l,

whose values are the derivatives at 0 of the solution of the majorant system

    c_i' = C ( c_i^3 + (1 + (N a_0 - sum_j c_j) / r)^(-2) ) + c_i,   c(0) = a_0 (1, ..., 1).

The outer bound is the exact derivative of the second summand at the
starting point, (|alpha| + 1)! / r^|alpha|, so both paths agree term by term.
"""
from dataclasses import dataclass
from math import comb, factorial
from typing import Dict, Mapping, Optional, Sequence, Tuple

import mpmath
import numpy as np
import pandas as pd
from scipy.optimize import brentq

from ..combinatorics.faa_di_bruno import (
    FaaExpansion,
    collapsed_totals,
    majorized_compose,
    weak_compositions,
)
from ..curves.fourier_curve import FourierCurve, derivative, sobolev_norm
from ..spectral.bilinear_hilbert import sobolev_series_constant
from ..utils.config import config
from ..utils.errors import InputError, MajorantOverflowError
from ..utils.logger import logger
from .taylor import MultiSeries

Expansions = Optional[Mapping[int, FaaExpansion]]


@dataclass(frozen=True)
class MajorantParams:
    C: float
    r_gamma: float
    a0: float
    dims: int

    def __post_init__(self):
        if not self.C > 0:
            raise InputError(f"majorant constant C must be positive, got {self.C}")
        if not self.r_gamma > 0:
            raise InputError(f"majorant radius must be positive, got {self.r_gamma}")
        if self.a0 < 0:
            raise InputError(f"seed a0 must be non-negative, got {self.a0}")
        if self.dims < 1:
            raise InputError(f"dims must be >= 1, got {self.dims}")

    def to_dict(self) -> Dict[str, float]:
        return {"C": self.C, "r_gamma": self.r_gamma, "a0": self.a0, "dims": self.dims}


def _triple_sum(a: Sequence, l: int):
    total = 0
    for k1 in range(l + 1):
        for k2 in range(k1 + 1):
            total += comb(l, k1) * comb(k1, k2) * a[l - k1] * a[k1 - k2] * a[k2]
    return total


def _faa_term(params: MajorantParams, a: Sequence, l: int, expansions: Expansions):
    g_bounds = {m: mpmath.factorial(m + 1) / mpmath.mpf(params.r_gamma) ** m for m in range(l + 1)}
    if l == 0:
        return g_bounds[0]
    f_bounds = {j: a[j] for j in range(1, l + 1)}
    if expansions is not None and l in expansions:
        expansion = expansions[l]
        if expansion.k != l or expansion.n != params.dims:
            raise InputError(f"expansion for l={l} has (k, n) = ({expansion.k}, {expansion.n}), "
                             f"expected ({l}, {params.dims})")
        return majorized_compose(expansion, g_bounds, f_bounds)
    return majorized_compose(None, g_bounds, f_bounds, totals=collapsed_totals(l, params.dims))


def majorant_sequence(params: MajorantParams, order: int, expansions: Expansions = None,
                      dps: Optional[int] = None) -> np.ndarray:
    """a~_0 .. a~_order. Expansions, when given, must have n = params.dims."""
    max_order = int(config.get_or(12, "majorants", "max_order"))
    if not 0 <= order <= max_order:
        raise InputError(f"order must lie in [0, {max_order}], got {order}")
    dps = dps or int(config.get_or(50, "majorants", "precision_dps"))
    ceiling = float(config.get_or(1e300, "majorants", "overflow_ceiling"))

    with mpmath.workdps(dps):
        a = [mpmath.mpf(params.a0)]
        for l in range(order):
            step = params.C * (_triple_sum(a, l) + _faa_term(params, a, l, expansions)) + a[l]
            if step > ceiling:
                raise MajorantOverflowError(f"majorant sequence exceeds {ceiling:.3g} at l={l + 1}",
                                            l + 1, [float(v) for v in a])
            a.append(step)
        values = np.array([float(v) for v in a])
    logger.debug(f"majorant sequence to l={order}: last value {values[-1]:.6g}")
    return values


def majorant_ode_series(params: MajorantParams, degree: int, reduced: bool = True) -> MultiSeries:
    """Taylor data of the majorant system around a0 (1, ..., 1), shifted to c(0) = 0.

    The reduced form is the scalar equation for the common value u of the
    components; the full form has params.dims variables.
    """
    C, r, a0, dims = params.C, params.r_gamma, params.a0, params.dims
    cube = [a0 ** 3, 3.0 * a0 ** 2, 3.0 * a0, 1.0]
    if reduced:
        coeffs = [C * (m + 1) * (dims / r) ** m for m in range(degree + 1)]
        for m, value in enumerate(cube[:degree + 1]):
            coeffs[m] += C * value
        coeffs[0] += a0
        if degree >= 1:
            coeffs[1] += 1.0
        return MultiSeries(({(m,): c for m, c in enumerate(coeffs) if c != 0},), degree)

    shared: Dict[Tuple[int, ...], float] = {}
    for m in range(degree + 1):
        for alpha in weak_compositions(m, dims):
            multinomial = factorial(m)
            for entry in alpha:
                multinomial //= factorial(entry)
            shared[alpha] = C * (m + 1) * multinomial / r ** m
    components = []
    for i in range(dims):
        component = dict(shared)
        for m, value in enumerate(cube[:degree + 1]):
            alpha = tuple(m if j == i else 0 for j in range(dims))
            component[alpha] = component.get(alpha, 0.0) + C * value
        zero = (0,) * dims
        component[zero] = component.get(zero, 0.0) + a0
        if degree >= 1:
            unit = tuple(1 if j == i else 0 for j in range(dims))
            component[unit] = component.get(unit, 0.0) + 1.0
        components.append(component)
    return MultiSeries(tuple(components), degree)


@dataclass
class DominanceReport:
    first_violation: Optional[int]
    ratios: np.ndarray

    @property
    def holds(self) -> bool:
        return self.first_violation is None

    def to_dict(self):
        return {"holds": self.holds, "first_violation": self.first_violation,
                "max_ratio": float(np.max(self.ratios)) if self.ratios.size else 0.0}


def dominance_check(ladder, majorants: Sequence[float], rtol: float = 1e-12) -> DominanceReport:
    """First l with a_l > a~_l, or None."""
    a = np.asarray(getattr(ladder, "a", ladder), dtype=float)
    bound = np.asarray(majorants, dtype=float)
    if a.shape != bound.shape:
        raise InputError(f"ladder and majorants differ in length: {a.size} vs {bound.size}")
    ratios = np.divide(a, bound, out=np.where(a > 0, np.inf, 0.0), where=bound > 0)
    violations = np.nonzero(a > bound * (1.0 + rtol))[0]
    first = int(violations[0]) if violations.size else None
    if first is not None:
        logger.info(f"dominance fails first at l={first}: a_l={a[first]:.6g} > a~_l={bound[first]:.6g}")
    return DominanceReport(first, ratios)


@dataclass
class DerivativeLadder:
    a: np.ndarray
    c1: float
    dims: int

    def __post_init__(self):
        if np.any(self.a < 0):
            raise InputError("ladder entries must be non-negative")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"l": np.arange(self.a.size), "a": self.a})


def banach_algebra_constant(m: float = 1.0) -> float:
    """C_1 = 2 sqrt(2) C_0 with C_0 the Sobolev-series constant."""
    return 2.0 * np.sqrt(2.0) * sobolev_series_constant(m)


def derivative_ladder(curve: FourierCurve, order: int) -> DerivativeLadder:
    """a_l = C_1 ||d^l (gamma', gamma'', gamma'', gamma'')||_{H^1} for l = 0..order."""
    c1 = banach_algebra_constant()
    a = np.empty(order + 1)
    for l in range(order + 1):
        first = sobolev_norm(derivative(curve, l + 1), 1)
        second = sobolev_norm(derivative(curve, l + 2), 1)
        a[l] = c1 * np.sqrt(first ** 2 + 3.0 * second ** 2)
    return DerivativeLadder(a, c1, 4 * curve.dim)


def fit_majorant_params(ladder: DerivativeLadder, r_bounds: Optional[Sequence[float]] = None) -> MajorantParams:
    """a0 = a_0, C so that a~_1 = a_1, r_gamma so that a~_2 = a_2 where a root exists."""
    a = ladder.a
    if a.size < 3:
        raise InputError(f"fitting needs a_0, a_1, a_2, got {a.size} entries")
    if not a[1] > a[0]:
        raise InputError(f"ladder does not grow at l=1 (a_0={a[0]:.6g}, a_1={a[1]:.6g})")
    low, high = (float(r) for r in (r_bounds or config.get_or([1e-3, 1e6], "majorants", "r_bounds")))
    a0 = float(a[0])
    C = float((a[1] - a[0]) / (a0 ** 3 + 1.0))

    def excess(r):
        return majorant_sequence(MajorantParams(C, r, a0, ladder.dims), 2)[2] - a[2]

    lo_value, hi_value = excess(low), excess(high)
    if lo_value >= 0 and hi_value >= 0:
        r = float(high)
        logger.warning(f"a~_2 exceeds a_2 for every radius; using r_gamma={r:.3g}")
    elif lo_value < 0 and hi_value < 0:
        r = float(low)
        logger.warning(f"a~_2 stays below a_2 for every radius; using r_gamma={r:.3g}")
    else:
        r = float(brentq(excess, low, high, xtol=1e-14 * high, rtol=1e-14))
    params = MajorantParams(C, r, a0, ladder.dims)
    logger.info(f"Fitted majorant parameters {params.to_dict()}")
    return params


@dataclass
class AnalyticityFit:
    C_K: float
    r_K: float
    quality: float
    geometric_rate: float
    geometric_quality: float
    kind: str

    @property
    def geometric_radius(self) -> float:
        return 1.0 / self.geometric_rate

    @property
    def entire_like(self) -> bool:
        """Geometric growth explains the data better than factorial growth."""
        return self.geometric_quality < self.quality

    def to_dict(self):
        return {"C_K": self.C_K, "r_K": self.r_K, "quality": self.quality, "kind": self.kind,
                "geometric_rate": self.geometric_rate, "geometric_quality": self.geometric_quality,
                "entire_like": self.entire_like}


def _linear_fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(residual ** 2)))


def analyticity_fit(data: Sequence[float], kind: str = "ladder") -> AnalyticityFit:
    """Fits a_l ~ C_K l! / r_K^l (kind="ladder") or |c(k)| ~ C_K r_K^k (kind="fourier")."""
    values = np.asarray(getattr(data, "a", data), dtype=float)
    if values.size < 4:
        raise InputError(f"analyticity fit needs at least 4 points, got {values.size}")
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise InputError("analyticity fit needs positive finite data")
    index = np.arange(values.size, dtype=float)
    logs = np.log(values)
    geo_slope, geo_intercept, geo_quality = _linear_fit(index, logs)
    if kind == "fourier":
        return AnalyticityFit(float(np.exp(geo_intercept)), float(np.exp(geo_slope)), geo_quality,
                              float(np.exp(geo_slope)), geo_quality, kind)
    if kind != "ladder":
        raise InputError(f"unknown fit kind {kind!r}")
    log_factorial = np.array([float(mpmath.loggamma(l + 1)) for l in range(values.size)])
    slope, intercept, quality = _linear_fit(index, logs - log_factorial)
    return AnalyticityFit(float(np.exp(intercept)), float(np.exp(-slope)), quality,
                          float(np.exp(geo_slope)), geo_quality, kind)


@dataclass
class DecayFit:
    slope: float
    intercept: float
    quality: float
    k_used: np.ndarray

    def to_frame(self, curve: FourierCurve) -> pd.DataFrame:
        k = np.arange(curve.max_freq + 1)
        return pd.DataFrame({"k": k, "abs_coeff": np.linalg.norm(curve.half, axis=1),
                             "fitted": np.exp(self.intercept + self.slope * k)})

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "quality": self.quality,
                "k_min": int(self.k_used[0]), "k_max": int(self.k_used[-1])}


def fourier_decay(curve: FourierCurve, k_range: Optional[Tuple[int, int]] = None,
                  floor: Optional[float] = None) -> DecayFit:
    """Slope of log |c(k)| over the coefficients above floor * max |c(k)|, k >= 1."""
    floor = floor if floor is not None else float(config.get_or(1e-13, "majorants", "decay_floor"))
    magnitude = np.linalg.norm(curve.half, axis=1)
    k = np.arange(curve.max_freq + 1)
    lo, hi = k_range or (1, curve.max_freq)
    mask = (k >= lo) & (k <= hi) & (magnitude > floor * np.max(magnitude[1:], initial=0.0))
    if np.count_nonzero(mask) < 2:
        raise InputError(f"fewer than two significant coefficients in k in [{lo}, {hi}]")
    slope, intercept, quality = _linear_fit(k[mask].astype(float), np.log(magnitude[mask]))
    return DecayFit(slope, intercept, quality, k[mask])
