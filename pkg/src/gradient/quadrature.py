"""Truncations, the inner w-rule and epsilon extrapolation shared by every direct path."""
from dataclasses import dataclass, field
from math import factorial
from typing import List, Optional, Sequence

import numpy as np

from ..utils.config import config
from ..utils.errors import ConfigurationError, InputError
from ..utils.logger import logger


@dataclass(frozen=True)
class Truncation:
    eps: float
    grid_locked: bool = False
    n_samples: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if not (0.0 < self.eps <= 0.5):
            raise InputError(f"truncation eps must lie in (0, 1/2], got {self.eps}")

    @classmethod
    def from_grid(cls, cells: int, n_samples: int) -> "Truncation":
        if cells < 1 or 2 * cells > n_samples:
            raise ConfigurationError(f"cannot lock eps to {cells} cells of a grid with {n_samples} nodes")
        return cls(cells / n_samples, grid_locked=True, n_samples=n_samples)

    @classmethod
    def default(cls, n_samples: int) -> "Truncation":
        return cls.from_grid(int(config.get_or(4, "gradient", "eps_cells")), n_samples)

    def cells_for(self, n_samples: int) -> int:
        """Number of grid cells inside [0, eps]; eps must be a multiple of 1/N."""
        cells = self.eps * n_samples
        rounded = int(round(cells))
        if abs(cells - rounded) > 1e-9 * max(1.0, cells) or rounded < 1:
            raise ConfigurationError(f"eps={self.eps} is not grid-locked for N={n_samples}",
                                     {"eps": self.eps, "n_samples": n_samples})
        return rounded

    def scaled(self, factor: int) -> "Truncation":
        return Truncation(min(self.eps * factor, 0.5), self.grid_locked, self.n_samples)

    def __repr__(self):
        return f"Truncation(eps={self.eps:.6g}{', grid-locked' if self.grid_locked else ''})"


@dataclass(frozen=True)
class InnerRule:
    """Composite rule on the cells [j/N, (j+1)/N], j = first_cell .. N/2 - 1, of w > 0.

    Nodes and weights have shape (cells, nodes_per_cell); negative w use the
    mirrored nodes with the same weights.
    """

    n_samples: int
    first_cell: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.nodes.shape[0]

    @property
    def flat_nodes(self) -> np.ndarray:
        return self.nodes.ravel()

    @property
    def flat_weights(self) -> np.ndarray:
        return self.weights.ravel()

    def signed_nodes(self) -> np.ndarray:
        """All nodes, w > 0 first then their mirrors."""
        return np.concatenate([self.flat_nodes, -self.flat_nodes])

    def cell_sums(self, values: np.ndarray) -> np.ndarray:
        """Per-cell integrals of sampled values (N, cells * p, ...) -> (N, cells, ...)."""
        p = self.nodes.shape[1]
        shaped = values.reshape(values.shape[0], self.n_cells, p, *values.shape[2:])
        w = self.weights.reshape((1, self.n_cells, p) + (1,) * (values.ndim - 2))
        return np.sum(shaped * w, axis=2)

    def tail_integrals(self, cell_values: np.ndarray, cells: Sequence[int]) -> List[np.ndarray]:
        """Integral over [m/N, 1/2] for each requested m from per-cell values."""
        reverse = np.cumsum(cell_values[:, ::-1], axis=1)[:, ::-1]
        results = []
        for m in cells:
            offset = m - self.first_cell
            if offset < 0:
                raise ConfigurationError(f"rule starts at cell {self.first_cell}, cannot integrate from {m}")
            if offset >= self.n_cells:
                results.append(np.zeros_like(reverse[:, 0]))
            else:
                results.append(reverse[:, offset])
        return results


def inner_rule(n_samples: int, first_cell: int, rule: Optional[str] = None,
               nodes_per_cell: Optional[int] = None) -> InnerRule:
    rule = rule or config.get_or("gauss", "gradient", "inner_rule")
    nodes_per_cell = nodes_per_cell or int(config.get_or(4, "gradient", "nodes_per_cell"))
    h = 1.0 / n_samples
    left = np.arange(first_cell, n_samples // 2) * h
    if rule == "gauss":
        xi, wi = np.polynomial.legendre.leggauss(nodes_per_cell)
        nodes = left[:, None] + 0.5 * h * (xi[None, :] + 1.0)
        weights = np.broadcast_to(0.5 * h * wi, nodes.shape).copy()
    elif rule == "trapezoid":
        nodes = np.column_stack([left, left + h])
        weights = np.full(nodes.shape, 0.5 * h)
    else:
        raise ConfigurationError(f"unknown inner rule {rule!r}")
    return InnerRule(n_samples, first_cell, nodes, weights)


def gauss_unit(n_nodes: int):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    xi, wi = np.polynomial.legendre.leggauss(n_nodes)
    return 0.5 * (xi + 1.0), 0.5 * wi


def taylor_phase(theta: np.ndarray, order: int) -> np.ndarray:
    """E_j(theta) = exp(i theta) - sum_{m<j} (i theta)^m / m!, accurate for small theta."""
    theta = np.asarray(theta, dtype=float)
    z = 1j * theta
    result = np.exp(z) - sum(z ** m / factorial(m) for m in range(order))
    small = np.abs(theta) < 1.0
    if np.any(small):
        zs = z[small]
        term = zs ** order / factorial(order)
        acc = term.copy()
        for m in range(order + 1, order + 24):
            term = term * zs / m
            acc = acc + term
        result[small] = acc
    return result


def cosine_remainder(theta: np.ndarray) -> np.ndarray:
    """cos(theta) - 1 + theta^2 / 2 without cancellation."""
    theta = np.asarray(theta, dtype=float)
    result = np.cos(theta) - 1.0 + 0.5 * theta ** 2
    small = np.abs(theta) < 1.0
    if np.any(small):
        t2 = theta[small] ** 2
        term = t2 * t2 / 24.0
        acc = term.copy()
        for m in range(3, 14):
            term = -term * t2 / ((2 * m - 1) * (2 * m))
            acc = acc + term
        result[small] = acc
    return result


def richardson(values: Sequence[np.ndarray], eps: Sequence[float], orders: Optional[Sequence[int]] = None) -> np.ndarray:
    """Eliminates the error terms c_p eps^p, p in `orders`, from values at several eps."""
    orders = list(orders if orders is not None else config.get_or([1, 3], "gradient", "richardson_orders"))
    eps = np.asarray(eps, dtype=float)
    if len(values) != eps.size or eps.size < len(orders) + 1:
        raise InputError(f"need at least {len(orders) + 1} values for orders {orders}, got {len(values)}")
    design = np.column_stack([np.ones_like(eps)] + [eps ** p for p in orders])
    stacked = np.stack([np.asarray(v, dtype=float) for v in values])
    flat = stacked.reshape(eps.size, -1)
    solution, *_ = np.linalg.lstsq(design, flat, rcond=None)
    if eps.size > len(orders) + 1:
        logger.debug(f"Richardson fit over {eps.size} points for orders {orders}")
    return solution[0].reshape(stacked.shape[1:])
