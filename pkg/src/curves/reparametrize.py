from typing import Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..utils.config import config
from ..utils.errors import ConfigurationError, DegeneracyError, NumericError
from ..utils.logger import logger
from .fourier_curve import (
    CumulativeLength,
    FourierCurve,
    SampledGrid,
    analyze,
    cumulative_length,
    derivative,
    oversampled_size,
    speed_profile,
    unit_speed_defect,
    with_band,
)


def invert_arclength(curve: FourierCurve, targets: np.ndarray, arc: Optional[CumulativeLength] = None,
                     fine: Optional[int] = None) -> np.ndarray:
    """Solves s(x) = target for every target in [0, L) with safeguarded Newton.

    Monotone cubic interpolation of the inverse gives the starting guesses; a
    bracketing step replaces any Newton update that leaves the bracket.
    """
    fine = fine or oversampled_size(curve)
    arc = arc or cumulative_length(curve)
    velocity = derivative(curve, 1)
    total = arc.total

    grid = np.linspace(0.0, 1.0, fine + 1)
    s_grid = arc(grid)
    s_grid[0], s_grid[-1] = 0.0, total
    if np.any(np.diff(s_grid) <= 0):
        raise DegeneracyError("cumulative arc length is not strictly increasing")

    guess = PchipInterpolator(s_grid, grid)(targets)
    idx = np.clip(np.searchsorted(s_grid, targets, side="right"), 1, fine)
    lo, hi = grid[idx - 1].copy(), grid[idx].copy()
    x = np.clip(guess, lo, hi)

    root_tol = max(1e-3 * config.get_or(1e-10, "curves", "arclength_tol") / len(targets),
                   64 * np.finfo(float).eps) * total
    max_iter = int(config.get_or(60, "curves", "newton_max_iter"))
    for iteration in range(max_iter):
        residual = arc(x) - targets
        if np.max(np.abs(residual)) <= root_tol:
            logger.debug(f"arc-length inversion converged after {iteration} iterations")
            return x
        above = residual > 0
        hi = np.where(above, x, hi)
        lo = np.where(above, lo, x)
        slope = np.linalg.norm(velocity.evaluate(x), axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - residual / slope
        outside = ~np.isfinite(newton) | (newton <= lo) | (newton >= hi)
        x = np.where(outside, 0.5 * (lo + hi), newton)

    residual = float(np.max(np.abs(arc(x) - targets)))
    raise NumericError("arc-length inversion did not converge",
                       {"residual": residual, "tolerance": root_tol, "iterations": max_iter})


def _grid_sizes(curve: FourierCurve, n_samples: Optional[int]):
    if n_samples:
        if n_samples % 2 or n_samples < 2 * curve.max_freq + 2:
            raise ConfigurationError(f"grid size {n_samples} too small for band {curve.max_freq}")
        return [n_samples]
    n = max(oversampled_size(curve, 2), 64)
    cap = max(int(config.get_or(8192, "curves", "max_arclength_samples")), n)
    sizes = []
    while n <= cap:
        sizes.append(n)
        n *= 2
    return sizes


def arclength_reparametrize(curve: FourierCurve, n_samples: Optional[int] = None, tol: Optional[float] = None,
                            max_freq: Optional[int] = None) -> FourierCurve:
    """Constant-speed curve of total length 1 tracing the same image, starting at gamma(0).

    Without n_samples the grid is doubled until the speed defect meets tol.
    The defect is checked before the optional cut to max_freq.
    """
    tol = tol if tol is not None else config.get_or(1e-10, "curves", "arclength_tol")
    sizes = _grid_sizes(curve, n_samples)

    fine = oversampled_size(curve)
    speed = speed_profile(curve, fine)
    mean_speed = float(np.mean(speed))
    threshold = config.get_or(1e-6, "curves", "speed_threshold")
    if mean_speed <= 0 or float(np.min(speed)) < threshold * mean_speed:
        raise DegeneracyError("curve is not regular: speed vanishes",
                              {"min_speed": float(np.min(speed)), "mean_speed": mean_speed})

    arc = cumulative_length(curve)
    total = arc.total
    for n in sizes:
        targets = total * np.arange(n) / n
        nodes = invert_arclength(curve, targets, arc, fine)
        result = analyze(SampledGrid(curve.evaluate(nodes) / total))
        defect = unit_speed_defect(result)
        logger.debug(f"arc-length grid {n}: speed defect {defect:.3e}")
        if defect <= tol:
            break
    else:
        raise NumericError("arc-length reparametrization missed the speed tolerance",
                           {"defect": defect, "tolerance": tol, "n_samples": sizes[-1]})

    if max_freq is not None:
        result = with_band(result, max_freq)
        logger.debug(f"cut to band {max_freq}: speed defect {unit_speed_defect(result):.3e}")
    return result
