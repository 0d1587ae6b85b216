import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest

from src.curves import FourierCurve, corpus
from src.energy import EnergyQuadrature, evaluate_energy, intrinsic_distance, moebius_energy
from src.utils import logger
from src.utils.errors import ConfigurationError, GeometryError, InputError


def test_intrinsic_distance_examples():
    assert np.isclose(intrinsic_distance(0.0, 0.3, 1.0), 0.3)
    assert np.isclose(intrinsic_distance(0.0, 0.7, 1.0), 0.3)
    assert np.isclose(intrinsic_distance(0.0, 0.5, 1.0), 0.5)
    assert np.isclose(intrinsic_distance(2.0, -1.5, 3.0), 0.5)
    with pytest.raises(InputError):
        intrinsic_distance(0.0, 0.1, 0.0)


def test_quadrature_sizes_validated():
    with pytest.raises(ConfigurationError):
        EnergyQuadrature(8, 256)
    with pytest.raises(ConfigurationError):
        EnergyQuadrature(256, 255)
    with pytest.raises(ConfigurationError):
        EnergyQuadrature(256, 256, "midpoint")


def test_round_circle_has_energy_four(unit_circle):
    energy = moebius_energy(unit_circle, EnergyQuadrature(256, 256))
    logger.info(f"Circle energy: {energy:.15f}")
    assert abs(energy - 4.0) < 1e-6


def test_energy_is_scale_invariant():
    curve = corpus.random_curve(seed=7, unit_speed=False)
    quad = EnergyQuadrature(64, 64)
    assert abs(moebius_energy(curve, quad) - moebius_energy(curve.scaled(2.0), quad)) < 1e-10


def test_perturbed_circle_exceeds_circle(wobbly_circle):
    energy = moebius_energy(wobbly_circle, EnergyQuadrature(128, 128))
    fine = moebius_energy(wobbly_circle, EnergyQuadrature(512, 512))
    logger.info(f"Perturbed circle energy: {energy:.12f} (fine grid {fine:.12f})")
    assert energy > 4.0
    assert abs(energy - fine) < 1e-9


def test_grid_convergence_in_inner_variable(wobbly_circle):
    coarse = moebius_energy(wobbly_circle, EnergyQuadrature(128, 128))
    doubled = moebius_energy(wobbly_circle, EnergyQuadrature(128, 256))
    assert abs(coarse - doubled) < 1e-8


def test_reparametrization_invariance():
    raw = corpus.perturbed_circle(0.05, 2, unit_speed=False, max_freq=60)
    unit = corpus.perturbed_circle(0.05, 2, unit_speed=True, max_freq=60)
    quad = EnergyQuadrature(256, 256)
    assert abs(moebius_energy(raw, quad) - moebius_energy(unit, quad)) < 1e-8

    nonuniform = corpus.nonuniform_circle(0.2, max_freq=60)
    assert abs(moebius_energy(nonuniform, quad) - 4.0) < 1e-5


def test_skip_cell_rule_is_close_to_taylor_limit(wobbly_circle):
    taylor = moebius_energy(wobbly_circle, EnergyQuadrature(256, 256, "taylor_limit"))
    skipped = moebius_energy(wobbly_circle, EnergyQuadrature(256, 256, "skip_cell"))
    assert abs(taylor - skipped) < 1e-3


def test_corpus_energies_bounded_below_by_circle():
    for curve in corpus.standard_corpus(count=6):
        report = evaluate_energy(curve, EnergyQuadrature(128, 128))
        logger.info(f"{report}")
        assert report.energy >= 4.0 - 1e-9
        assert np.isclose(report.length, 1.0, atol=1e-9)


def test_self_intersection_rejected():
    half = np.zeros((3, 2), dtype=complex)
    half[1, 0] = -0.5j
    half[2, 1] = -0.5j
    figure_eight = FourierCurve.from_half(half)
    with pytest.raises(GeometryError):
        moebius_energy(figure_eight, EnergyQuadrature(64, 64))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
