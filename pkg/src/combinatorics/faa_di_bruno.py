"""Multivariate Faa di Bruno expansion of d^k/dx^k g(f(x)), f: R -> R^n.

A term is an admissible pair (r, q): r_1 + 2 r_2 + ... + k r_k = k and every
row of q splits r_i over the n components. Its coefficient is

    k! / (prod_i i!^r_i  prod_ij q_ij!)

and it contributes coeff * (d^alpha g)(f) * prod_ij (f_j^(i))^q_ij with
alpha_j = sum_i q_ij. Coefficients are exact Python integers.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.utilities.iterables import partitions

from ..utils.config import config
from ..utils.errors import InputError, SizeError
from ..utils.logger import logger

Pattern = Tuple[int, ...]


@dataclass(frozen=True)
class FaaTerm:
    r: Pattern
    q: Tuple[Pattern, ...]
    alpha: Pattern
    coeff: int

    @property
    def order(self) -> int:
        """|alpha|, the order of the outer derivative."""
        return sum(self.alpha)

    def __repr__(self):
        return f"FaaTerm(r={self.r}, q={self.q}, coeff={self.coeff})"


@dataclass(frozen=True)
class FaaExpansion:
    k: int
    n: int
    terms: Tuple[FaaTerm, ...]
    _totals: Dict[Pattern, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[FaaTerm]:
        return iter(self.terms)

    def pattern_totals(self) -> Dict[Pattern, int]:
        """Sum of coefficients over q for every r pattern."""
        if not self._totals:
            for term in self.terms:
                self._totals[term.r] = self._totals.get(term.r, 0) + term.coeff
        return self._totals

    def __repr__(self):
        return f"FaaExpansion(k={self.k}, n={self.n}, terms={len(self.terms)})"


def _check_guard(k: int, n: int):
    if k < 1 or n < 1:
        raise InputError(f"Faa di Bruno needs k >= 1 and n >= 1, got k={k}, n={n}")
    max_order = int(config.get_or(12, "faa", "max_order"))
    max_dims = int(config.get_or(8, "faa", "max_dims"))
    if k > max_order or n > max_dims:
        raise SizeError(f"expansion (k={k}, n={n}) beyond the guard k <= {max_order}, n <= {max_dims}",
                        {"k": k, "n": n, "max_order": max_order, "max_dims": max_dims})


def r_patterns(k: int) -> List[Pattern]:
    """All (r_1..r_k) with sum i r_i = k, in lexicographic order."""
    found = []
    for parts in partitions(k):
        found.append(tuple(parts.get(i, 0) for i in range(1, k + 1)))
    return sorted(found)


def weak_compositions(total: int, parts: int) -> List[Pattern]:
    """All splittings of `total` into `parts` non-negative integers, lexicographic."""
    if parts == 1:
        return [(total,)]
    rows = []
    for bars in combinations(range(total + parts - 1), parts - 1):
        edges = (-1,) + bars + (total + parts - 1,)
        rows.append(tuple(edges[j + 1] - edges[j] - 1 for j in range(parts)))
    return sorted(rows)


def _term(k: int, r: Pattern, q: Tuple[Pattern, ...]) -> FaaTerm:
    denominator = prod(factorial(i + 1) ** ri for i, ri in enumerate(r))
    denominator *= prod(factorial(qij) for row in q for qij in row)
    coeff, rest = divmod(factorial(k), denominator)
    if rest:
        raise InputError(f"non-integral Faa di Bruno coefficient for r={r}, q={q}")
    alpha = tuple(sum(row[j] for row in q) for j in range(len(q[0])))
    return FaaTerm(r, q, alpha, coeff)


def _rows(r: Pattern, n: int) -> Iterator[Tuple[Pattern, ...]]:
    if not r:
        yield ()
        return
    for head in weak_compositions(r[0], n):
        for tail in _rows(r[1:], n):
            yield (head,) + tail


@lru_cache(maxsize=64)
def enumerate_terms(k: int, n: int) -> FaaExpansion:
    """Every admissible (r, q) for the k-th derivative with n inner components."""
    _check_guard(k, n)
    terms = tuple(_term(k, r, q) for r in r_patterns(k) for q in _rows(r, n))
    logger.debug(f"Faa di Bruno (k={k}, n={n}): {len(terms)} terms")
    return FaaExpansion(k, n, terms)


def count_terms(k: int, n: int) -> int:
    """Coefficient of x^k in prod_i (1 - x^i)^(-n)."""
    _check_guard(k, n)
    x = sympy.Symbol("x")
    series = sympy.Integer(1)
    for i in range(1, k + 1):
        factor = sum(comb(m + n - 1, n - 1) * x ** (i * m) for m in range(k // i + 1))
        series = sympy.expand(series * factor)
    return int(sympy.Poly(series, x).coeff_monomial(x ** k))


def collapsed_totals(k: int, n: int) -> Dict[Pattern, int]:
    """Closed form of FaaExpansion.pattern_totals: k! n^|r| / prod_i (i!^r_i r_i!)."""
    totals = {}
    for r in r_patterns(k):
        denominator = prod(factorial(i + 1) ** ri * factorial(ri) for i, ri in enumerate(r))
        totals[r] = factorial(k) * n ** sum(r) // denominator
    return totals


def univariate_terms(k: int) -> List[Tuple[Pattern, int]]:
    """(m_1..m_k) with the classical coefficient k! / prod m_i! i!^m_i."""
    return [(term.r, term.coeff) for term in enumerate_terms(k, 1)]


def bell_number(k: int) -> int:
    return int(sympy.bell(k))


def bell_recurrence(k: int) -> int:
    """B_{j+1} = sum_i C(j, i) B_i."""
    bells = [1]
    for j in range(k):
        bells.append(sum(comb(j, i) * bells[i] for i in range(j + 1)))
    return bells[k]


def compose_derivative(expansion: FaaExpansion, g_derivs: Mapping[Pattern, object],
                       f_derivs: Mapping[Tuple[int, int], object]):
    """d^k g(f) from the outer derivatives g_derivs[alpha] and f_derivs[(i, j)] = f_j^(i).

    Orders i run from 1 to k, components j from 0 to n - 1. Entries may be
    floats, integers or sympy expressions.
    """
    total = 0
    for term in expansion:
        try:
            outer = g_derivs[term.alpha]
        except KeyError:
            raise InputError(f"missing outer derivative for alpha={term.alpha}")
        value = term.coeff * outer
        for i, row in enumerate(term.q, start=1):
            for j, qij in enumerate(row):
                if qij:
                    try:
                        value = value * f_derivs[(i, j)] ** qij
                    except KeyError:
                        raise InputError(f"missing inner derivative f_{j}^({i})")
        total = total + value
    return total


def majorized_compose(expansion: FaaExpansion, g_bounds: Mapping[int, float],
                      f_bounds: Mapping[int, float], totals: Optional[Mapping[Pattern, int]] = None) -> float:
    """The expansion with d^alpha g replaced by g_bounds[|alpha|] and every f_j^(i) by f_bounds[i]."""
    for name, bounds in (("g", g_bounds), ("f", f_bounds)):
        negative = [key for key, value in bounds.items() if value < 0]
        if negative:
            raise InputError(f"{name}-bounds must be non-negative, got negative entries at {negative}")
    totals = totals if totals is not None else expansion.pattern_totals()
    total = 0.0
    for r, weight in totals.items():
        order = sum(r)
        try:
            value = weight * g_bounds[order]
            for i, ri in enumerate(r, start=1):
                if ri:
                    value *= f_bounds[i] ** ri
        except KeyError as missing:
            raise InputError(f"missing bound {missing} for pattern r={r}")
        total += value
    return total


def expansion_table(orders: Sequence[int], dims: Sequence[int]) -> List[Dict[str, int]]:
    """Term counts from both enumeration strategies, for the selftest report."""
    rows = []
    for k in orders:
        for n in dims:
            rows.append({"k": k, "n": n, "terms": len(enumerate_terms(k, n)), "recount": count_terms(k, n)})
    return rows
