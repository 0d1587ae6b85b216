"""Descent flow gamma_t = -H gamma towards critical points of the Moebius energy.

The semi-implicit scheme inverts the leading multiplier of Q in Fourier space
and treats the rest of H explicitly:

    c(k) <- (c(k) - tau R(k)) / (1 + tau P lambda_|k| |k|^3),   R = H gamma - Q gamma.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..curves.fourier_curve import FourierCurve, analyze, length, unit_speed_defect
from ..curves.io import write_curve
from ..curves.reparametrize import arclength_reparametrize
from ..energy.moebius import EnergyQuadrature, moebius_energy
from ..gradient.decomposition import GradientReport, h_gamma
from ..gradient.quadrature import Truncation
from ..majorants.engine import analyticity_fit, derivative_ladder, fourier_decay
from ..spectral.multiplier import MultiplierTable, build_table
from ..utils.config import config
from ..utils.errors import (
    ConfigurationError,
    DegeneracyError,
    FlowError,
    GeometryError,
    InputError,
    NumericError,
    PreconditionError,
)
from ..utils.logger import logger
from ..utils.output import write_csv, write_json


class FlowScheme(str, Enum):
    EXPLICIT = "explicit"
    SEMI_IMPLICIT = "semi_implicit"


class FlowStatus(str, Enum):
    CONVERGED = "converged"
    MAX_STEPS = "max_steps"
    TAU_UNDERFLOW = "tau_underflow"


@dataclass(frozen=True)
class FlowConfig:
    tau: float = 1e-3
    max_steps: int = 5000
    residual_tol: float = 1e-3
    renorm_every: int = 10
    scheme: FlowScheme = FlowScheme.SEMI_IMPLICIT
    eps_cells: int = 4
    n_samples: int = 128
    max_freq: int = 24
    max_halvings: int = 20
    energy_slack: float = 1e-10
    speed_tol: float = 1e-6
    snapshot_every: int = 100
    log_every: int = 50

    def __post_init__(self):
        if not self.tau > 0:
            raise ConfigurationError(f"tau must be positive, got {self.tau}")
        if not self.residual_tol > 0:
            raise ConfigurationError(f"residual_tol must be positive, got {self.residual_tol}")
        if self.renorm_every < 1 or self.max_steps < 0:
            raise ConfigurationError("renorm_every must be >= 1 and max_steps >= 0")
        if self.n_samples < 4 * self.max_freq + 4:
            raise ConfigurationError(f"n_samples={self.n_samples} aliases band {self.max_freq}; "
                                     f"need >= {4 * self.max_freq + 4}")
        try:
            object.__setattr__(self, "scheme", FlowScheme(self.scheme))
        except ValueError:
            raise ConfigurationError(f"unknown flow scheme {self.scheme!r}")

    @classmethod
    def from_config(cls, **overrides) -> "FlowConfig":
        values = {name: config.get_or(default.default, "flow", name)
                  for name, default in cls.__dataclass_fields__.items() if name != "eps_cells"}
        values["eps_cells"] = config.get_or(4, "gradient", "eps_cells")
        values.update({k: v for k, v in overrides.items() if v is not None})
        for name in ("max_steps", "renorm_every", "eps_cells", "n_samples", "max_freq", "max_halvings",
                     "snapshot_every", "log_every"):
            values[name] = int(values[name])
        for name in ("tau", "residual_tol", "energy_slack", "speed_tol"):
            values[name] = float(values[name])
        return cls(**values)

    def truncation(self) -> Truncation:
        return Truncation.from_grid(self.eps_cells, self.n_samples)

    def quadrature(self) -> EnergyQuadrature:
        return EnergyQuadrature(self.n_samples, self.n_samples)

    def to_dict(self) -> Dict[str, Any]:
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values["scheme"] = self.scheme.value
        return values


@dataclass(frozen=True)
class FlowState:
    step: int
    curve: FourierCurve
    energy: float
    residual: float
    tau: float
    history: Tuple[Dict[str, float], ...] = ()
    report: Optional[GradientReport] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not np.isfinite(self.energy):
            raise InputError(f"flow state energy is not finite: {self.energy}")
        if self.residual < 0:
            raise InputError(f"negative residual {self.residual}")

    def row(self) -> Dict[str, float]:
        return {"step": self.step, "energy": self.energy, "residual": self.residual, "tau": self.tau}


@dataclass
class FlowResult:
    state: FlowState
    status: FlowStatus
    diagnostics: Dict[str, Any]

    @property
    def converged(self) -> bool:
        return self.status is FlowStatus.CONVERGED

    def history_frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.state.history), columns=["step", "energy", "residual", "tau"])


def _gradient(curve: FourierCurve, cfg: FlowConfig, table: MultiplierTable,
              speed_tol: Optional[float] = None) -> GradientReport:
    return h_gamma(curve, cfg.truncation(), "spectral_q", cfg.n_samples, table,
                   speed_tol if speed_tol is not None else cfg.speed_tol)


def normalize_length(curve: FourierCurve) -> Tuple[FourierCurve, float]:
    total = length(curve)
    if not total > 0:
        raise InputError(f"curve length must be positive, got {total}")
    return curve.scaled(1.0 / total), total


def residual(curve: FourierCurve, trunc: Optional[Truncation] = None, n_samples: Optional[int] = None,
             table: Optional[MultiplierTable] = None, speed_tol: Optional[float] = None) -> float:
    """||H gamma||_{L^2} of the curve rescaled to length 1, so the value is scale free."""
    unit, _ = normalize_length(curve)
    table = table or build_table(max(unit.max_freq, 1))
    report = h_gamma(unit, trunc, "spectral_q", n_samples, table, speed_tol)
    return report.residual()


def renormalize(curve: FourierCurve, cfg: FlowConfig) -> FourierCurve:
    """Arc-length reparametrization at length 1, cut to the flow band."""
    unit = arclength_reparametrize(curve, max_freq=cfg.max_freq)
    defect = unit_speed_defect(unit)
    if defect > cfg.speed_tol:
        raise NumericError(f"band {cfg.max_freq} cannot hold the arc-length parametrization",
                           {"speed_defect": defect, "speed_tol": cfg.speed_tol})
    return unit


def initial_state(curve: FourierCurve, cfg: FlowConfig, table: MultiplierTable) -> FlowState:
    curve = renormalize(curve, cfg)
    energy = moebius_energy(curve, cfg.quadrature())
    report = _gradient(curve, cfg, table)
    state = FlowState(0, curve, energy, report.residual(), cfg.tau, report=report)
    return replace(state, history=(state.row(),))


def _update(curve: FourierCurve, report: GradientReport, tau: float, cfg: FlowConfig,
            table: MultiplierTable) -> FourierCurve:
    h_hat = analyze(report.h, cfg.max_freq).half
    if cfg.scheme is FlowScheme.EXPLICIT:
        return FourierCurve.from_half(curve.half - tau * h_hat)
    symbol = table.symbol(np.arange(cfg.max_freq + 1))
    q_hat = curve.half * symbol[:, None]
    rest = h_hat - q_hat
    return FourierCurve.from_half((curve.half - tau * rest) / (1.0 + tau * symbol)[:, None])


def flow_step(state: FlowState, cfg: FlowConfig, table: MultiplierTable, tau: Optional[float] = None) -> FlowState:
    """One accepted step; tau is halved on energy increase or geometry failure."""
    if tau is None:
        tau = min(cfg.tau, 2.0 * state.tau) if state.tau > 0 else cfg.tau
    if tau == 0:
        moved = replace(state, step=state.step + 1, tau=0.0)
        return replace(moved, history=state.history + (moved.row(),))

    report = state.report or _gradient(state.curve, cfg, table)
    quad = cfg.quadrature()
    step = state.step + 1
    for _ in range(cfg.max_halvings + 1):
        try:
            candidate = _update(state.curve, report, tau, cfg, table)
            if step % cfg.renorm_every == 0 or unit_speed_defect(candidate) > cfg.speed_tol:
                candidate = renormalize(candidate, cfg)
            energy = moebius_energy(candidate, quad)
            if energy <= state.energy + cfg.energy_slack:
                next_report = _gradient(candidate, cfg, table)
                moved = FlowState(step, candidate, energy, next_report.residual(), tau, report=next_report)
                return replace(moved, history=state.history + (moved.row(),))
            logger.debug(f"step {step}: energy rose to {energy:.12f} from {state.energy:.12f}, halving tau")
        except (GeometryError, PreconditionError, DegeneracyError, NumericError) as e:
            logger.debug(f"step {step}: rejected at tau={tau:.3e} ({e.category}: {e})")
        tau *= 0.5
    raise FlowError(f"step {step} rejected after {cfg.max_halvings} halvings of tau",
                    {"step": step, "tau": tau, "energy": state.energy})


def analyticity_diagnostics(curve: FourierCurve, ladder_order: int = 8) -> Dict[str, Any]:
    threshold = float(config.get_or(0.5, "majorants", "quality_threshold"))
    try:
        floor = float(config.get_or(1e-9, "flow", "decay_floor"))
        decay = fourier_decay(curve, (4, max(curve.max_freq // 2, 5)), floor)
        decay_info = decay.to_dict()
    except InputError:
        decay_info = {"slope": float("-inf"), "intercept": None, "quality": 0.0}
    fit = analyticity_fit(derivative_ladder(curve, ladder_order))
    signature = bool(decay_info["slope"] <= -0.5 and min(fit.quality, fit.geometric_quality) < threshold)
    return {"decay": decay_info, "ladder_fit": fit.to_dict(), "analytic_signature": signature}


def _write_snapshot(out_dir: Optional[Path], state: FlowState, command: Optional[List[str]]):
    if out_dir is not None:
        write_curve(state.curve, out_dir / "snapshots" / f"step_{state.step:06d}.json", command)


def run_flow(initial: FourierCurve, cfg: Optional[FlowConfig] = None, out_dir=None,
             command: Optional[List[str]] = None, table: Optional[MultiplierTable] = None) -> FlowResult:
    cfg = cfg or FlowConfig.from_config()
    table = table or build_table(cfg.max_freq)
    out_dir = Path(out_dir) if out_dir is not None else None
    state = initial_state(initial, cfg, table)
    logger.info(f"Flow start: E={state.energy:.10f}, |H|={state.residual:.3e}, scheme={cfg.scheme.value}, "
                f"tau={cfg.tau:.1e}, K={cfg.max_freq}, N={cfg.n_samples}")
    _write_snapshot(out_dir, state, command)

    status = FlowStatus.MAX_STEPS
    while True:
        if state.residual <= cfg.residual_tol:
            confirmed = renormalize(state.curve, cfg)
            check = _gradient(confirmed, cfg, table)
            if check.residual() <= cfg.residual_tol:
                state = replace(state, curve=confirmed, residual=check.residual(), report=check)
                status = FlowStatus.CONVERGED
                break
        if state.step >= cfg.max_steps:
            break
        try:
            state = flow_step(state, cfg, table)
        except FlowError as e:
            logger.warning(f"Flow stopped: {e}")
            status = FlowStatus.TAU_UNDERFLOW
            break
        if state.step % cfg.log_every == 0:
            logger.info(f"step {state.step}: E={state.energy:.10f}, |H|={state.residual:.3e}, tau={state.tau:.2e}")
        if state.step % cfg.snapshot_every == 0:
            _write_snapshot(out_dir, state, command)

    diagnostics = {
        "status": status.value,
        "steps": state.step,
        "energy": state.energy,
        "residual": state.residual,
        "flow_config": cfg.to_dict(),
    }
    diagnostics.update(analyticity_diagnostics(state.curve))
    logger.info(f"Flow finished ({status.value}) after {state.step} steps: E={state.energy:.10f}, "
                f"|H|={state.residual:.3e}")
    result = FlowResult(state, status, diagnostics)

    if out_dir is not None:
        write_curve(state.curve, out_dir / "final.json", command)
        write_csv(out_dir / "history.csv", result.history_frame(), command)
        write_json(out_dir / "diagnostics.json", diagnostics, command)
    return result
