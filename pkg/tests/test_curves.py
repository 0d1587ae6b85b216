import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import ellipe

from src.curves import (
    FourierCurve,
    SampledGrid,
    analyze,
    arclength_reparametrize,
    compose,
    corpus,
    cumulative_length,
    curvature_squared,
    derivative,
    length,
    product,
    read_curve,
    shifted_samples,
    sobolev_norm,
    sobolev_w_norm,
    speed_profile,
    synthesize,
    translate,
    unit_speed_defect,
    w_h_equivalence,
    with_band,
    write_curve,
)
from src.curves.fourier_curve import SobolevOrder
from src.utils import logger
from src.utils.errors import ConfigurationError, DegeneracyError, InputError, InvariantError, NumericError

CORPUS_SIZE = 10

half_tables = st.integers(min_value=1, max_value=6).flatmap(
    lambda K: st.lists(
        st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)),
        min_size=K + 1, max_size=K + 1))


def _curve_from_tuples(rows):
    half = np.array([[a + 1j * b, c + 1j * d] for a, b, c, d in rows])
    return FourierCurve.from_half(half)


def _random_curve(seed, band, dim):
    rng = np.random.default_rng(seed)
    half = rng.normal(size=(band + 1, dim)) + 1j * rng.normal(size=(band + 1, dim))
    return FourierCurve.from_half(half / (1.0 + np.arange(band + 1))[:, None] ** 2)


@given(half_tables)
def test_analyze_inverts_synthesize(rows):
    curve = _curve_from_tuples(rows)
    grid = synthesize(curve, 4 * curve.max_freq + 4)
    back = analyze(grid, curve.max_freq)
    assert np.allclose(back.coeffs, curve.coeffs, atol=1e-13)


@given(half_tables, st.integers(min_value=0, max_value=4))
def test_derivative_multiplies_by_frequency(rows, order):
    curve = _curve_from_tuples(rows)
    k = curve.wavenumbers[:, None]
    assert np.allclose(derivative(curve, order).coeffs, (2j * np.pi * k) ** order * curve.coeffs)


def test_reality_constraint_rejected():
    coeffs = np.zeros((3, 2), dtype=complex)
    coeffs[2] = [1.0, 1.0j]
    with pytest.raises(InvariantError):
        FourierCurve(coeffs)


def test_grid_too_small_for_band():
    curve = corpus.trefoil()
    with pytest.raises(ConfigurationError):
        synthesize(curve, 6)
    with pytest.raises(ConfigurationError):
        analyze(SampledGrid(np.zeros((8, 2))), 4)


def test_negative_derivative_order():
    with pytest.raises(InputError):
        derivative(corpus.unit_circle(), -1)


def test_unit_circle_geometry(unit_circle):
    speed = speed_profile(unit_circle, 64)
    assert np.allclose(speed, 1.0, atol=1e-14)
    assert np.isclose(length(unit_circle), 1.0, atol=1e-14)
    kappa2 = curvature_squared(unit_circle, 64)
    assert np.allclose(kappa2, (2 * np.pi) ** 2, rtol=1e-12)
    logger.info(f"Unit circle: length {length(unit_circle):.15f}")


def test_sobolev_norm_of_circle(unit_circle):
    radius = corpus.UNIT_RADIUS
    for s in (0, 1, 1.5, 3):
        assert np.isclose(sobolev_norm(unit_circle, s), radius * 2 ** (s / 2), rtol=1e-13)
    assert np.isclose(sobolev_norm(unit_circle, SobolevOrder.integer(2)), radius * 2.0, rtol=1e-13)
    with pytest.raises(InputError):
        SobolevOrder(-1.0)


def test_w_and_h_norms_are_equivalent(wobbly_circle):
    for m in (1, 2, 3):
        bounds = w_h_equivalence(m, wobbly_circle.max_freq)
        w_norm = sobolev_w_norm(wobbly_circle, m)
        h_norm = sobolev_norm(wobbly_circle, m)
        assert bounds.lower * h_norm <= w_norm * (1 + 1e-12)
        assert w_norm <= bounds.upper * h_norm * (1 + 1e-12)
        assert bounds.upper <= bounds.limit * (1 + 1e-12)


@pytest.mark.parametrize("a, b", [(1.0, 0.5), (1.0, 0.2), (0.3, 0.25)])
def test_ellipse_length_matches_elliptic_integral(a, b):
    expected = 4 * a * ellipe(1 - (b / a) ** 2)
    assert np.isclose(length(corpus.ellipse(a, b)), expected, rtol=1e-12)
    assert np.isclose(cumulative_length(corpus.ellipse(a, b)).total, expected, rtol=1e-12)


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=12),
       st.integers(min_value=1, max_value=3))
def test_parseval_and_norm_monotonicity(seed, band, dim):
    curve = _random_curve(seed, band, dim)
    grid = synthesize(curve, 4 * band + 4)
    assert abs(grid.l2_norm() - sobolev_norm(curve, 0)) <= 1e-12 * sobolev_norm(curve, 0)
    orders = np.sort(np.random.default_rng(seed).uniform(0.0, 4.0, size=6))
    norms = [sobolev_norm(curve, s) for s in orders]
    assert np.all(np.diff(norms) >= 0)


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=8))
def test_sine_composition_bound(seed, band):
    f = _random_curve(seed, band, 1)
    composed = compose(f, np.sin, 512)
    # ||sin||_{C^1} = sup|sin| + sup|cos| = 2
    bound = 2 * np.pi * 2.0 * (1.0 + sobolev_norm(f, 1))
    assert sobolev_norm(composed, 1) <= bound
    x = np.linspace(0.0, 1.0, 17)
    assert np.allclose(composed.evaluate(x)[:, 0], np.sin(f.evaluate(x)[:, 0]), atol=1e-10)


def test_product_and_translate():
    x = np.linspace(0, 1, 16, endpoint=False)
    sine = analyze(SampledGrid(np.sin(2 * np.pi * x)[:, None]), 2)
    probe = np.linspace(0, 1, 13)
    assert np.allclose(translate(sine, 0.25).evaluate(probe)[:, 0], np.cos(2 * np.pi * probe), atol=1e-14)
    prod = product(sine, translate(sine, -0.25))
    assert prod.max_freq == 4
    assert np.allclose(prod.evaluate(probe)[:, 0], -0.5 * np.sin(4 * np.pi * probe), atol=1e-14)


def test_shifted_samples_match_pointwise_evaluation(wobbly_circle):
    offsets = np.array([-0.3, 0.0, 0.125, 0.49])
    n = 64
    table = shifted_samples(wobbly_circle, offsets, n)
    x = np.arange(n) / n
    for j, w in enumerate(offsets):
        assert np.allclose(table[:, j], wobbly_circle.evaluate(x + w), atol=1e-14)


def test_cumulative_length_of_nonuniform_circle():
    curve = corpus.nonuniform_circle(0.2, max_freq=60)
    arc = cumulative_length(curve)
    x = np.linspace(0, 1, 11)
    expected = x + 0.2 * np.sin(2 * np.pi * x) / (2 * np.pi)
    assert np.isclose(arc.total, 1.0, atol=1e-12)
    assert np.allclose(arc(x), expected, atol=1e-11)


def test_reparametrize_circle_is_identity(unit_circle):
    result = arclength_reparametrize(unit_circle, n_samples=64)
    assert np.allclose(with_band(result, 1).coeffs, unit_circle.coeffs, atol=1e-12)
    higher = np.abs(result.wavenumbers) >= 2
    assert np.max(np.abs(result.coeffs[higher])) < 1e-12


def test_reparametrize_ellipse_has_constant_speed():
    for n_samples in (512, None):
        result = arclength_reparametrize(corpus.ellipse(1.0, 0.5), n_samples=n_samples)
        defect = unit_speed_defect(result)
        logger.info(f"Ellipse reparametrized on {n_samples or 'adaptive'} nodes: speed defect {defect:.3e}")
        assert defect <= 1e-9
        assert np.isclose(length(result), 1.0, atol=1e-10)
    assert np.allclose(result.evaluate([0.0])[0], np.array([1.0, 0.0]) / length(corpus.ellipse(1.0, 0.5)))
    cut = arclength_reparametrize(corpus.ellipse(1.0, 0.5), max_freq=8)
    assert cut.max_freq == 8


def test_reparametrize_raises_when_the_grid_cannot_reach_tolerance():
    with pytest.raises(NumericError) as info:
        arclength_reparametrize(corpus.ellipse(1.0, 0.2), n_samples=16)
    assert info.value.details["defect"] > info.value.details["tolerance"]


def test_reparametrize_nonuniform_circle_recovers_round_circle(unit_circle):
    curve = corpus.nonuniform_circle(0.15, max_freq=80)
    result = arclength_reparametrize(curve, n_samples=256)
    assert np.allclose(with_band(result, 1).coeffs, unit_circle.coeffs, atol=1e-10)


def test_reparametrize_rejects_cusp():
    with pytest.raises(DegeneracyError):
        arclength_reparametrize(corpus.deltoid())


def test_curve_file_round_trip(tmp_path, spatial_curve):
    path = write_curve(spatial_curve, tmp_path / "curve.json", ["corpus", "--out", str(tmp_path)])
    loaded = read_curve(path)
    assert np.array_equal(loaded.coeffs, spatial_curve.coeffs)
    meta = json.loads(path.read_text())["meta"]
    assert meta["command"] == ["corpus", "--out", str(tmp_path)]
    assert meta["version"] and "curves" in meta["config"]


def test_curve_file_rejects_bad_tables(tmp_path):
    base = {"dimension": 1, "max_freq": 1, "coefficients": [
        {"k": -1, "re": [0.5], "im": [0.0]},
        {"k": 0, "re": [0.0], "im": [0.0]},
        {"k": 1, "re": [0.5], "im": [0.0]},
    ]}
    duplicate = dict(base, coefficients=base["coefficients"] + [{"k": 1, "re": [0.5], "im": [0.0]}])
    missing = dict(base, coefficients=base["coefficients"][1:])
    unreal = dict(base, coefficients=[
        {"k": -1, "re": [0.5], "im": [0.1]},
        {"k": 0, "re": [0.0], "im": [0.0]},
        {"k": 1, "re": [0.5], "im": [0.1]},
    ])
    for payload, error in ((duplicate, InputError), (missing, InputError), (unreal, InvariantError)):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(error):
            read_curve(path)


@pytest.mark.parametrize("index", range(CORPUS_SIZE))
def test_corpus_curves_are_unit_speed(corpus_curves, index):
    curve = corpus_curves[index]
    assert unit_speed_defect(curve) <= 1e-9
    assert np.isclose(length(curve), 1.0, atol=1e-9)


def test_random_corpus_curves_widen_their_band():
    curve = corpus.random_curve(seed=12345, max_freq=24)
    assert curve.max_freq % 8 == 0 and 24 <= curve.max_freq <= corpus.RANDOM_BAND_LIMIT
    assert unit_speed_defect(curve) <= 1e-11
    assert corpus.trefoil().max_freq == 5


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
