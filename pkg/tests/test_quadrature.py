"""Sphere quadrature: keyed streams, antithetic structure, estimates.

The reproducibility claims here are bitwise, not approximate: the same
(dim, seed, count, method) must give the same floats on any machine and
any chunking, and prefixes of longer runs must match shorter runs.
"""

import math

import numpy as np
import pytest

from valuation_lab.quadrature import (
    CHUNK,
    GRID,
    MC,
    Estimate,
    SphereSampler,
    absolute_moment,
    beta_moment_exact,
    beta_moment_quadrature,
    direction_chunk,
    directions,
    integrate,
    integrate_sphere,
    subsphere_sampler,
)
from valuation_lab.tensors import kappa, omega


def test_direction_chunk_shape_and_units():
    block = direction_chunk(3, seed=42, chunk_index=0)
    assert block.shape == (CHUNK, 3)
    assert np.allclose(np.linalg.norm(block, axis=1), 1.0, atol=1e-12)


def test_stream_is_bitwise_deterministic():
    a = directions(3, seed=42, count=1000)
    b = directions(3, seed=42, count=1000)
    assert np.array_equal(a, b)
    c = directions(3, seed=43, count=1000)
    assert not np.array_equal(a, c)


def test_stream_is_prefix_stable():
    short = directions(4, seed=7, count=500)
    long = directions(4, seed=7, count=3 * CHUNK)
    assert np.array_equal(short, long[:500])


def test_antithetic_pairing_is_exact():
    dirs = directions(3, seed=1, count=2000)
    assert np.array_equal(dirs[1::2], -dirs[0::2])


def test_sampler_normalization():
    s = SphereSampler(dim=3, count=999, seed=0)        # odd rounds up
    assert s.count == 1000
    assert s.method == MC
    assert SphereSampler(dim=3, count=10, seed=0, method="mc").method == MC
    assert SphereSampler(dim=2, count=10, seed=0, method="grid").method == GRID
    assert np.array_equal(s.directions(), directions(3, 0, 1000))


def test_sampler_validation():
    with pytest.raises(ValueError):
        SphereSampler(dim=3, count=100, seed=0, method="halton")
    with pytest.raises(ValueError):
        SphereSampler(dim=3, count=100, seed=0, method="grid")  # dim != 2
    with pytest.raises(ValueError):
        SphereSampler(dim=3, count=1, seed=0)
    with pytest.raises(ValueError):
        SphereSampler(dim=3, count=100, seed=0,
                      axis=np.array([1.0, 1.0, 0.0]))  # not unit
    with pytest.raises(ValueError):
        subsphere_sampler(np.array([1.0, 0.0]), 100, 0)  # n = 2 subsphere


def test_integrate_constant_recovers_sphere_measure():
    for dim in (2, 3, 4, 5):
        est = integrate_sphere(lambda d: np.ones(d.shape[0]), dim,
                               samples=2000, seed=3)
        assert est.value == pytest.approx(omega(dim), rel=1e-12)
        assert est.max_std_error() == pytest.approx(0.0, abs=1e-12)


def test_integrate_odd_integrand_is_exactly_zero():
    est = integrate_sphere(lambda d: d, 3, samples=4000, seed=5)
    assert np.all(est.value == 0.0)         # antithetic pairs cancel exactly
    assert np.all(est.std_error == 0.0)


def test_integrate_is_deterministic_and_chunk_invariant():
    fn = lambda d: d[:, 0] ** 2
    a = integrate_sphere(fn, 3, samples=2 * CHUNK + 700, seed=11)
    b = integrate_sphere(fn, 3, samples=2 * CHUNK + 700, seed=11)
    assert np.array_equal(a.value, b.value)
    assert np.array_equal(a.std_error, b.std_error)
    # same estimate from the materialized stream, independent of chunking
    dirs = directions(3, 11, a.samples)
    pair_mean = 0.5 * (fn(dirs[0::2]) + fn(dirs[1::2]))
    want = pair_mean.mean() * omega(3)
    assert a.value == pytest.approx(want, rel=1e-13)


def test_integrate_second_moment_closed_form():
    # int over S^2 of u_i^2 du = omega(3) / 3, well inside 3 SE at 40k
    est = integrate_sphere(lambda d: d[:, 0] ** 2, 3, samples=40_000, seed=42)
    err = abs(est.value - omega(3) / 3.0)
    assert err <= 3.0 * est.max_std_error()
    assert est.method == MC
    assert est.samples == 40_000


def test_grid_integrates_trig_polynomials_exactly():
    s = SphereSampler(dim=2, count=360, seed=0, method="grid")
    assert integrate(s, lambda d: np.ones(d.shape[0])).value == \
        pytest.approx(2.0 * math.pi, rel=1e-14)
    # cos^2 has only harmonics 0 and 2; the periodic rule kills harmonic 2
    est = integrate(s, lambda d: d[:, 0] ** 2)
    assert est.value == pytest.approx(math.pi, rel=1e-13)
    assert est.std_error == pytest.approx(0.0, abs=0.0)


def test_grid_kink_convergence_rate():
    # |cos theta| has a kink; midpoint error should fall like count^-2
    exact = 4.0
    errs = []
    for count in (100, 400, 1600):
        s = SphereSampler(dim=2, count=count, seed=0, method="grid")
        est = integrate(s, lambda d: np.abs(d[:, 0]))
        errs.append(abs(float(est.value) - exact))
    assert errs[2] < errs[0] / 100.0


def test_non_finite_integrand_aborts_with_direction():
    def bad(d):
        out = np.ones(d.shape[0])
        out[7] = np.nan
        return out

    with pytest.raises(ArithmeticError, match="direction"):
        integrate_sphere(bad, 3, samples=512, seed=2)


def test_estimate_scaling():
    est = Estimate(value=np.array([2.0]), std_error=np.array([0.5]),
                   samples=10, method=MC)
    scaled = est.scaled(-3.0)
    assert scaled.value[0] == -6.0
    assert scaled.std_error[0] == 1.5      # magnitude only
    assert scaled.samples == 10


def test_subsphere_sampler_lies_in_axis_perp():
    axis = np.array([1.0, 2.0, -0.5])
    axis /= np.linalg.norm(axis)
    s = subsphere_sampler(axis, count=2000, seed=9)
    dirs = s.directions()
    assert dirs.shape == (2000, 3)
    assert np.allclose(dirs @ axis, 0.0, atol=1e-12)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0, atol=1e-12)
    assert s.total_measure == pytest.approx(omega(2), rel=1e-14)


def test_subsphere_second_moment_closed_form():
    # int over the great circle v-perp of w w^T equals kappa_2 (I - v v^T)
    v = np.array([0.0, 0.0, 1.0])
    s = subsphere_sampler(v, count=20_000, seed=13)
    est = integrate(s, lambda d: d[:, :, None] * d[:, None, :])
    want = kappa(2) * (np.eye(3) - np.outer(v, v))
    assert np.all(np.abs(est.value - want)
                  <= 3.0 * est.std_error + 1e-9)


@pytest.mark.parametrize("n", range(2, 8))
def test_beta_moment_two_routes_agree(n):
    assert beta_moment_exact(n) == pytest.approx(
        beta_moment_quadrature(n), abs=1e-10)


def test_absolute_moment_closed_forms():
    for n in (2, 3, 4, 5):
        # k = 1 is twice the (n-1)-ball volume, k = 2 splits omega evenly
        assert absolute_moment(n, 1) == pytest.approx(
            2.0 * kappa(n - 1), rel=1e-13)
        assert absolute_moment(n, 2) == pytest.approx(
            omega(n) / n, rel=1e-13)
    with pytest.raises(ValueError):
        absolute_moment(1, 1)


def test_absolute_moment_matches_quadrature():
    v = np.array([0.0, 1.0, 0.0])
    est = integrate_sphere(lambda d: np.abs(d @ v) ** 3, 3,
                           samples=60_000, seed=21)
    err = abs(float(est.value) - absolute_moment(3, 3))
    assert err <= 3.0 * est.max_std_error()
