"""Identity suites run by `main selftest`: each check returns (passed, measured value, tolerance)."""
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from .combinatorics import bell_number, bell_recurrence, expansion_table
from .curves import FourierCurve, corpus, derivative, sobolev_norm, synthesize
from .energy import EnergyQuadrature, moebius_energy
from .gradient import Truncation, h_gamma, project_normal, project_tangent
from .spectral import BhtMethod, BhtQuery, bht, build_table
from .utils import config, logger
from .utils.errors import MoebiusError

SELFTEST_SIZE = 128


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    note: str = ""


def _random_scalar(rng: np.random.Generator, band: int) -> FourierCurve:
    half = np.zeros((band + 1, 1), dtype=complex)
    half[0] = rng.normal()
    half[1:, 0] = (rng.normal(size=band) + 1j * rng.normal(size=band)) / np.arange(1, band + 1) ** 2
    return FourierCurve.from_half(half)


def check_parseval(rng: np.random.Generator) -> Tuple[float, float]:
    curve = corpus.random_curve(int(rng.integers(1 << 30)), unit_speed=False)
    grid = synthesize(curve, SELFTEST_SIZE)
    return abs(grid.l2_norm() - sobolev_norm(curve, 0)), 1e-12


def check_circle_energy(rng: np.random.Generator) -> Tuple[float, float]:
    return abs(moebius_energy(corpus.unit_circle(), EnergyQuadrature(256, 256)) - 4.0), 1e-6


def check_decomposition(rng: np.random.Generator) -> Tuple[float, float]:
    worst = 0.0
    for curve in corpus.standard_corpus(int(rng.integers(1 << 30)), count=4):
        for cells in (2, 4, 8):
            report = h_gamma(curve, Truncation.from_grid(cells, SELFTEST_SIZE), "direct", SELFTEST_SIZE)
            scale = max(float(np.max(np.abs(report.h_tilde.values))), 1.0)
            worst = max(worst, report.identity_defect() / scale)
    return worst, 1e-12


def check_projection(rng: np.random.Generator) -> Tuple[float, float]:
    curve = corpus.perturbed_circle(0.05, 2, max_freq=24)
    g = synthesize(corpus.random_curve(int(rng.integers(1 << 30)), dim=2, unit_speed=False), SELFTEST_SIZE)
    normal = project_normal(g, curve)
    tangent = synthesize(derivative(curve, 1), SELFTEST_SIZE)
    split = np.max(np.abs((normal + project_tangent(g, curve)).values - g.values))
    orthogonal = np.max(np.abs(normal.pointwise_dot(tangent)))
    return float(max(split, orthogonal)), 1e-12


def check_bht_paths(rng: np.random.Generator) -> Tuple[float, float]:
    worst = 0.0
    for _ in range(3):
        f, g = _random_scalar(rng, 6), _random_scalar(rng, 6)
        s1, s2 = rng.uniform(0.0, 1.0, size=2)
        spectral = bht(f, g, BhtQuery(s1, s2, 1.0 / 16, BhtMethod.SPECTRAL))
        direct = bht(f, g, BhtQuery(s1, s2, 1.0 / 16, BhtMethod.DIRECT), n_samples=SELFTEST_SIZE)
        worst = max(worst, sobolev_norm(spectral - direct, 0) / max(sobolev_norm(spectral, 0), 1e-300))
    return worst, 1e-8


def check_lambda_positive(rng: np.random.Generator) -> Tuple[float, float]:
    table = build_table(64)
    return float(-np.min(table.lam)), 0.0


def check_faa_counts(rng: np.random.Generator) -> Tuple[float, float]:
    rows = expansion_table(range(1, 7), range(1, 4))
    mismatches = sum(row["terms"] != row["recount"] for row in rows)
    mismatches += sum(bell_number(k) != bell_recurrence(k) for k in range(1, 9))
    return float(mismatches), 0.0


CHECKS: List[Tuple[str, Callable[[np.random.Generator], Tuple[float, float]]]] = [
    ("parseval", check_parseval),
    ("circle_energy", check_circle_energy),
    ("decomposition_identity", check_decomposition),
    ("projection", check_projection),
    ("bht_paths", check_bht_paths),
    ("lambda_positive", check_lambda_positive),
    ("faa_counts", check_faa_counts),
]


def run_selftest(seed: Optional[int] = None) -> List[CheckResult]:
    seed = int(config.get_or(12345, "runtime", "seed")) if seed is None else seed
    rng = np.random.default_rng(seed)
    results = []
    for name, check in CHECKS:
        try:
            value, tolerance = check(rng)
            results.append(CheckResult(name, bool(value <= tolerance), float(value), tolerance))
        except MoebiusError as e:
            results.append(CheckResult(name, False, float("nan"), float("nan"), f"{e.category}: {e}"))
        status = "pass" if results[-1].passed else "FAIL"
        logger.info(f"selftest {name}: {status} ({results[-1].value:.3e} <= {results[-1].tolerance:.1e})")
    return results


def results_frame(results: List[CheckResult]) -> pd.DataFrame:
    return pd.DataFrame([vars(r) for r in results], columns=["name", "passed", "value", "tolerance", "note"])
