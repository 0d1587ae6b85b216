import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import json

import numpy as np
import pandas as pd
import pytest

from src.curves import corpus, read_curve, unit_speed_defect
from src.energy import moebius_energy
from src.flow import (
    FlowConfig,
    FlowScheme,
    FlowStatus,
    flow_step,
    initial_state,
    renormalize,
    residual,
    run_flow,
)
from src.gradient import Truncation
from src.spectral import build_table
from src.utils import logger
from src.utils.errors import ConfigurationError


def _small(**overrides) -> FlowConfig:
    values = dict(tau=1e-3, max_steps=200, residual_tol=1e-3, n_samples=128, max_freq=16, log_every=10,
                  snapshot_every=25)
    values.update(overrides)
    return FlowConfig(**values)


@pytest.fixture(scope="module")
def small_table():
    return build_table(16)


def test_flow_config_validation():
    with pytest.raises(ConfigurationError):
        FlowConfig(tau=0.0)
    with pytest.raises(ConfigurationError):
        FlowConfig(residual_tol=-1.0)
    with pytest.raises(ConfigurationError):
        FlowConfig(n_samples=64, max_freq=24)
    with pytest.raises(ConfigurationError):
        FlowConfig(scheme="crank_nicolson")
    cfg = FlowConfig.from_config(tau=5e-4)
    assert cfg.tau == 5e-4
    assert cfg.scheme is FlowScheme.SEMI_IMPLICIT
    assert cfg.max_freq == 24
    assert cfg.speed_tol == 1e-6


def test_residual_of_circle_and_perturbation(unit_circle, wobbly_circle):
    trunc = Truncation.from_grid(4, 512)
    assert residual(unit_circle, trunc, 512) <= 1e-4
    assert residual(wobbly_circle, trunc, 512) > 1e-2


def test_residual_is_scale_free(wobbly_circle):
    trunc = Truncation.from_grid(4, 256)
    base = residual(wobbly_circle, trunc, 256)
    assert residual(wobbly_circle.scaled(2.0), trunc, 256) == pytest.approx(base, rel=1e-6)


def test_zero_step_leaves_state_unchanged(wobbly_circle, small_table):
    cfg = _small()
    state = initial_state(wobbly_circle, cfg, small_table)
    moved = flow_step(state, cfg, small_table, tau=0.0)
    assert moved.step == state.step + 1
    assert np.array_equal(moved.curve.coeffs, state.curve.coeffs)
    assert moved.energy == state.energy
    assert len(moved.history) == len(state.history) + 1


@pytest.mark.slow
def test_circle_is_a_fixed_point(small_table):
    cfg = _small()
    state = initial_state(corpus.unit_circle(max_freq=16), cfg, small_table)
    start = state.curve.coeffs.copy()
    for _ in range(100):
        state = flow_step(state, cfg, small_table)
    logger.info(f"circle after 100 steps: E={state.energy:.12f}, |H|={state.residual:.3e}")
    assert state.residual <= 1e-4
    assert abs(state.energy - 4.0) < 1e-6
    assert np.max(np.abs(state.curve.coeffs - start)) < 1e-6


@pytest.mark.parametrize("scheme", ["semi_implicit", "explicit"])
def test_energy_decreases_along_the_flow(wobbly_circle, small_table, scheme):
    tau = 1e-3 if scheme == "semi_implicit" else 1e-6
    cfg = _small(tau=tau, scheme=scheme)
    state = initial_state(wobbly_circle, cfg, small_table)
    start = state.residual
    for _ in range(10):
        state = flow_step(state, cfg, small_table)
    energies = [row["energy"] for row in state.history]
    assert np.all(np.diff(energies) <= 1e-10)
    assert energies[-1] < energies[0]
    if scheme == "semi_implicit":
        assert state.residual < start
    assert unit_speed_defect(state.curve) <= cfg.speed_tol


def test_renormalized_steps_restore_unit_speed(wobbly_circle, small_table):
    cfg = _small(renorm_every=1)
    state = initial_state(wobbly_circle, cfg, small_table)
    assert unit_speed_defect(state.curve) <= 1e-8
    for _ in range(3):
        moved = flow_step(state, cfg, small_table)
        assert unit_speed_defect(moved.curve) <= 1e-8
        assert moved.energy == moebius_energy(moved.curve, cfg.quadrature())
        assert moved.energy <= state.energy + 1e-10
        state = moved
    again = renormalize(state.curve, cfg)
    assert abs(moebius_energy(again, cfg.quadrature()) - state.energy) <= 1e-9


def test_default_config_flow_does_not_stall(wobbly_circle):
    cfg = FlowConfig.from_config(max_steps=12, log_every=4)
    result = run_flow(wobbly_circle, cfg)
    energies = result.history_frame()["energy"].to_numpy()
    assert result.status in (FlowStatus.MAX_STEPS, FlowStatus.CONVERGED)
    assert result.state.step >= 1
    assert np.all(np.diff(energies) <= 1e-10)
    assert energies[-1] < energies[0]
    assert result.state.residual < result.history_frame()["residual"].iloc[0]


def test_already_critical_curve_stops_immediately(tmp_path):
    result = run_flow(corpus.unit_circle(max_freq=16), _small(), tmp_path)
    assert result.status is FlowStatus.CONVERGED
    assert result.state.step == 0
    assert (tmp_path / "final.json").exists()


@pytest.mark.slow
def test_perturbed_circle_flows_to_the_round_circle(wobbly_circle, tmp_path):
    cfg = FlowConfig.from_config()
    result = run_flow(wobbly_circle, cfg, tmp_path, ["flow", "test"])
    logger.info(f"flow diagnostics: {result.diagnostics}")
    assert result.converged
    assert result.state.step <= 5000
    assert abs(result.state.energy - 4.0) <= 1e-3
    assert result.diagnostics["decay"]["slope"] <= -0.5
    assert result.diagnostics["analytic_signature"]

    history = pd.read_csv(tmp_path / "history.csv")
    assert list(history.columns) == ["step", "energy", "residual", "tau"]
    assert len(history) == result.state.step + 1
    assert np.all(np.diff(history["energy"].to_numpy()) <= 1e-10)

    diagnostics = json.loads((tmp_path / "diagnostics.json").read_text())
    assert diagnostics["status"] == "converged"
    assert diagnostics["meta"]["command"] == ["flow", "test"]
    final = read_curve(tmp_path / "final.json")
    assert np.allclose(final.coeffs, result.state.curve.coeffs)
    stored = json.loads((tmp_path / "final.json").read_text())["meta"]
    assert stored["command"] == ["flow", "test"] and "flow" in stored["config"]
    snapshot = json.loads((tmp_path / "snapshots" / "step_000000.json").read_text())
    assert snapshot["meta"]["version"] == diagnostics["meta"]["version"]


@pytest.mark.slow
def test_trefoil_energy_decreases():
    cfg = FlowConfig(max_steps=15, n_samples=256, max_freq=40, log_every=5)
    result = run_flow(corpus.trefoil(), cfg)
    energies = result.history_frame()["energy"].to_numpy()
    assert result.status in (FlowStatus.MAX_STEPS, FlowStatus.CONVERGED)
    assert np.all(np.diff(energies) <= 1e-10)
    assert energies[-1] < energies[0]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
