import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from src.curves import FourierCurve, corpus, derivative, synthesize
from src.spectral import (
    LAMBDA_LIMIT,
    PRINTED_PREFACTOR,
    BhtQuery,
    apply_q_multiplier,
    bht,
    bht_coefficients,
    bht_constants,
    bound_check,
    build_table,
    corollary_bound_check,
    lambda_k,
    q_eps_symbol,
    sine_integral,
    sobolev_series_constant,
    single_mode_ratio,
    sobolev_lemma_check,
    young_check,
)
from src.utils import logger
from src.utils.errors import ConfigurationError, InputError


def random_scalar(rng, band):
    half = rng.normal(size=band + 1) + 1j * rng.normal(size=band + 1)
    return FourierCurve.from_half(half[:, None] / (1.0 + np.arange(band + 1))[:, None])


def harmonic(k, dim=1):
    half = np.zeros((k + 1, dim), dtype=complex)
    half[k, 0] = 0.5
    return FourierCurve.from_half(half)


@pytest.fixture(scope="module")
def table():
    return build_table(64)


def test_sine_integral_values():
    assert sine_integral(0.0) == 0.0
    assert abs(sine_integral(np.pi) - 1.8519370) < 1e-7
    for x in (0.3, 2.0, 7.5, 40.0):
        assert abs(sine_integral(x) - float(mpmath.si(x))) < 1e-13
    assert sine_integral(-2.0) == -sine_integral(2.0)
    grid = np.linspace(0.0, 60.0, 60001)
    assert abs(grid[np.argmax(sine_integral(grid))] - np.pi) < 1e-3


def test_lambda_against_adaptive_quadrature():
    def integrand(t, k):
        return (1.0 - t / (k * np.pi)) ** 3 * np.sinc(t / np.pi)

    for k in (1, 2, 9):
        reference, _ = quad(integrand, 0.0, k * np.pi, args=(k,), limit=500, epsabs=1e-14, epsrel=1e-14)
        assert abs(lambda_k(k) - 2.0 / 3.0 * reference) < 1e-10

    via_si, _ = quad(lambda t: 2.0 * (1.0 - t) ** 2 * sine_integral(3 * np.pi * t), 0.0, 1.0,
                     limit=200, epsabs=1e-14)
    assert abs(lambda_k(3) - via_si) < 1e-10
    with pytest.raises(InputError):
        lambda_k(0)


def test_lambda_positive_and_tends_to_limit():
    table = build_table(512, threads=4)
    assert np.all(table.lam > 0)
    assert abs(table.lam_at(200) - LAMBDA_LIMIT) <= 0.01
    assert abs(table.lam[-1] - LAMBDA_LIMIT) < abs(table.lam[0] - LAMBDA_LIMIT)
    logger.info(f"lambda_1 = {table.lam[0]:.12f}, lambda_512 = {table.lam[-1]:.12f}")


def test_table_construction_is_thread_independent():
    assert np.array_equal(build_table(40, threads=1).lam, build_table(40, threads=4).lam)


def test_c_tilde_for_both_prefactors(table):
    printed = build_table(64, prefactor="printed")
    floor = min(printed.lam.min(), LAMBDA_LIMIT - 0.05)
    assert np.isclose(printed.c_tilde, (floor ** 2 * 2.0 ** -8) ** -0.5, rtol=1e-14)
    assert printed.prefactor == PRINTED_PREFACTOR
    assert np.isclose(table.c_tilde * table.prefactor, printed.c_tilde * printed.prefactor, rtol=1e-14)
    with pytest.raises(ConfigurationError):
        build_table(4, prefactor="unknown")


def test_multiplier_on_simple_inputs(table):
    constant = FourierCurve.constant([1.0, 2.0], max_freq=4)
    assert np.all(apply_q_multiplier(constant, table).coeffs == 0)
    for k in (1, 4, 17):
        out = apply_q_multiplier(harmonic(k), table)
        assert np.isclose(out.coefficient(k)[0], 0.5 * table.prefactor * table.lam_at(k) * k ** 3, rtol=1e-15)
    with pytest.raises(ConfigurationError):
        apply_q_multiplier(harmonic(70), table)


def test_multiplier_is_linear_and_commutes_with_derivatives(table, spatial_curve):
    other = corpus.random_curve(seed=4, dim=3, unit_speed=False)
    lhs = apply_q_multiplier(spatial_curve + other.scaled(3.0), table)
    rhs = apply_q_multiplier(spatial_curve, table) + apply_q_multiplier(other, table).scaled(3.0)
    assert np.allclose(lhs.coeffs, rhs.coeffs, rtol=1e-13, atol=1e-13 * np.max(np.abs(lhs.coeffs)))
    for l in (1, 2, 3):
        a = derivative(apply_q_multiplier(spatial_curve, table), l)
        b = apply_q_multiplier(derivative(spatial_curve, l), table)
        assert np.allclose(a.coeffs, b.coeffs, rtol=1e-14, atol=0)


def test_truncated_symbol_tends_to_multiplier(table):
    for k in (1, 5, 12):
        limit = table.symbol(k)
        assert abs(q_eps_symbol(k, 1e-7) - limit) <= 1e-5 * limit
        assert q_eps_symbol(k, 0.25) < limit


def test_corollary_bound(table, unit_circle):
    assert corollary_bound_check(unit_circle, 0, 1, table).holds
    for k in (1, 3, 8):
        report = corollary_bound_check(harmonic(k), 0, 0, table)
        assert np.isclose(report.ratio, single_mode_ratio(k, table), rtol=1e-12)
        assert np.isclose(report.ratio, 8 * np.pi ** 3 / (table.prefactor * table.lam_at(k)), rtol=1e-12)


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=32),
       st.integers(min_value=1, max_value=3))
def test_corollary_bound_on_random_polynomials(table, seed, band, dim):
    rng = np.random.default_rng(seed)
    half = (rng.normal(size=(band + 1, dim)) + 1j * rng.normal(size=(band + 1, dim))) \
        / (1.0 + np.arange(band + 1))[:, None] ** 2
    curve = FourierCurve.from_half(half)
    for l in range(4):
        for m in (0, 1):
            assert corollary_bound_check(curve, l, m, table).holds


def test_bht_vanishes_for_odd_kernel_cancellations():
    rng = np.random.default_rng(2)
    f, g = random_scalar(rng, 5), random_scalar(rng, 4)
    for method in ("spectral", "direct"):
        out = bht(f, g, BhtQuery(0.0, 0.0, 0.125, method), 256)
        assert np.max(np.abs(out.coeffs)) < 1e-13
    one = FourierCurve.constant([1.0], max_freq=2)
    out = bht(one, one, BhtQuery(0.3, 0.8, 1 / 16), 256)
    assert np.max(np.abs(out.coeffs)) == 0.0


def test_bht_paths_agree():
    f = harmonic(1)
    g = harmonic(2)
    query = dict(s1=1.0, s2=0.5, eps=0.125)
    spectral = bht(f, g, BhtQuery(**query, method="spectral"))
    direct = bht(f, g, BhtQuery(**query, method="direct"), 256)
    n = 256
    diff = synthesize(spectral, n).values - synthesize(direct, n).values
    assert np.sqrt(np.mean(diff ** 2)) < 1e-8

    rng = np.random.default_rng(5)
    f, g = random_scalar(rng, 8), random_scalar(rng, 8)
    query = dict(s1=0.3, s2=0.9, eps=1 / 16)
    spectral = bht(f, g, BhtQuery(**query))
    direct = bht(f, g, BhtQuery(**query, method="direct"), 256)
    assert np.sqrt(np.mean((synthesize(spectral, n).values - synthesize(direct, n).values) ** 2)) < 1e-8


def test_bht_single_harmonic_formula():
    l, m, s1, s2, eps = 3, -5, 0.4, 0.7, 0.05
    f_hat = np.zeros(2 * 3 + 1, dtype=complex)
    g_hat = np.zeros(2 * 5 + 1, dtype=complex)
    f_hat[l + 3] = 1.0
    g_hat[m + 5] = 1.0
    out = bht_coefficients(f_hat, g_hat, s1, s2, eps)
    phi = 2 * np.pi * (l * s1 + m * s2)
    expected = 2j * (sine_integral(phi / 2) - sine_integral(phi * eps))
    band = 8
    assert np.isclose(out[l + m + band], expected, rtol=1e-14)
    out[l + m + band] = 0.0
    assert np.all(out == 0)


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(min_value=0, max_value=10_000))
def test_bht_is_bilinear(a, b, seed):
    rng = np.random.default_rng(seed)
    f1, f2, g = random_scalar(rng, 4), random_scalar(rng, 4), random_scalar(rng, 3)
    query = BhtQuery(rng.uniform(), rng.uniform(), 1 / 8)
    combined = bht(f1.scaled(a) + f2.scaled(b), g, query).coeffs
    separate = a * bht(f1, g, query).coeffs + b * bht(f2, g, query).coeffs
    assert np.allclose(combined, separate, atol=1e-12 * (1 + np.max(np.abs(separate))))


def test_bht_guards():
    f = harmonic(20)
    with pytest.raises(ConfigurationError):
        bht(f, f, BhtQuery(0.5, 0.25, 0.125, "direct"), 64)
    with pytest.raises(ConfigurationError):
        bht(harmonic(2), harmonic(2), BhtQuery(0.5, 0.25, 0.1, "direct"), 64)
    with pytest.raises(InputError):
        BhtQuery(1.5, 0.0, 0.1)
    with pytest.raises(InputError):
        BhtQuery(0.5, 0.0, 0.0)


def test_bht_constants():
    constants = bht_constants(1.0)
    # sum_k 1 / (1 + k^2) = pi coth(pi)
    assert abs(constants.C0 - np.sqrt(np.pi / np.tanh(np.pi))) < 1e-13
    assert abs(constants.M - 7.40775) < 1e-5
    assert constants.CH == 2 * constants.M * constants.Cm * constants.C0
    assert abs(constants.CH - 52.62) < 0.01
    with pytest.raises(InputError):
        bht_constants(0.5)


def test_series_constant_against_closed_forms():
    # sum_k 1 / (1 + k^2)^2 = (pi / 2) coth(pi) + (pi^2 / 2) csch(pi)^2
    squared = 0.5 * np.pi / np.tanh(np.pi) + 0.5 * np.pi ** 2 / np.sinh(np.pi) ** 2
    assert abs(sobolev_series_constant(2.0) - np.sqrt(squared)) < 1e-13
    for terms in (1000, 20000):
        assert abs(sobolev_series_constant(1.0, terms) - np.sqrt(np.pi / np.tanh(np.pi))) < 1e-9
    reference = mpmath.sqrt(mpmath.nsum(lambda k: (1 + k ** 2) ** mpmath.mpf(-1.5), [-mpmath.inf, mpmath.inf]))
    assert abs(sobolev_series_constant(1.5) - float(reference)) < 1e-10


def test_bht_bound_holds_uniformly_in_eps():
    constants = bht_constants(1.0)
    rng = np.random.default_rng(17)
    for _ in range(100):
        f = random_scalar(rng, int(rng.integers(1, 17)))
        g = random_scalar(rng, int(rng.integers(1, 17)))
        s1, s2 = rng.uniform(size=2)
        reports = [bound_check(f, g, BhtQuery(s1, s2, eps), constants) for eps in (1 / 4, 1 / 16, 1 / 64)]
        assert all(r.holds for r in reports)
        assert len({r.rhs for r in reports}) == 1

    zero = FourierCurve.zeros(3, 1)
    report = bound_check(zero, zero, BhtQuery(0.2, 0.6, 0.25), constants)
    assert report.lhs == 0.0 and report.holds


def test_bht_converges_as_eps_shrinks():
    rng = np.random.default_rng(23)
    f, g = random_scalar(rng, 6), random_scalar(rng, 6)
    values = [bht(f, g, BhtQuery(0.8, 0.1, 2.0 ** -j)).coeffs for j in range(6, 14)]
    steps = [np.max(np.abs(values[i + 1] - values[i])) for i in range(len(values) - 1)]
    assert steps[-1] < 0.1 * steps[0]


def test_young_and_sobolev_lemmas():
    rng = np.random.default_rng(29)
    for _ in range(50):
        x = rng.normal(size=int(rng.integers(1, 30)))
        size = int(rng.integers(1, 30))
        y = rng.normal(size=size) + 1j * rng.normal(size=size)
        assert young_check(x, y).holds
    constants = bht_constants(1.0)
    for _ in range(50):
        assert sobolev_lemma_check(random_scalar(rng, int(rng.integers(1, 20))), constants).holds


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
