"""Chunked Monte Carlo means and the geometric integrators.

Closed forms used as oracles here:
  - mean of |w1|^2 over the unit ball of R^(2n) is 1/(n+1) ... times the
    axis radius^2 after scaling; for E(R, r) in C^2 the saddle
    |z1|^2-|z2|^2 has mean (R^2 - r^2)/3.
  - sphere mean of |x|^2 at radius r about 0 is exactly r^2.
  - solid ball mean of |x|^2 in R^m is r^2 * m/(m+2).
  - mean of log|z1| over a round ball of radius rho in C^2 (center on
    the zero set) is log(rho) - 3/4.
"""

import math

import numpy as np
import pytest

from pshcheck.errors import DomainError, EvaluationError
from pshcheck.geometry import Ellipsoid, UnitaryFrame
from pshcheck.integrate import (
    ball_mean,
    gauss_legendre_01,
    mean_over_ellipsoid,
    sphere_mean,
    weighted_radial_mean,
)
from pshcheck.mc import CHUNK, MeanEstimate, mc_mean
from pshcheck.weights import ball_weight


def _const_sampler(m):
    def sample(rng, size):
        return rng.random((size, m))

    return sample


def test_mc_mean_constant_has_zero_error():
    est = mc_mean(_const_sampler(2), lambda x: np.full(x.shape[0], 2.5), 10_000, 1)
    assert est.value == 2.5
    assert est.std_error == 0.0
    assert est.samples == 10_000


def test_mc_mean_uniform_matches_analytic():
    est = mc_mean(_const_sampler(1), lambda x: x[:, 0], 200_000, 7)
    assert abs(est.value - 0.5) < 4 * est.std_error
    # se of U(0,1) mean is 1/sqrt(12 n)
    assert est.std_error == pytest.approx(1 / math.sqrt(12 * 200_000), rel=0.05)


@pytest.mark.parametrize("workers", [1, 2, 5, 8])
def test_mc_mean_worker_invariant(workers):
    base = mc_mean(_const_sampler(3), lambda x: np.sin(x).sum(axis=1), 3 * CHUNK + 17, 42)
    est = mc_mean(
        _const_sampler(3), lambda x: np.sin(x).sum(axis=1), 3 * CHUNK + 17, 42,
        workers=workers,
    )
    assert est.value == base.value
    assert est.std_error == base.std_error


def test_mc_mean_key_gives_independent_substreams():
    a = mc_mean(_const_sampler(1), lambda x: x[:, 0], 1000, 5, key=(0,))
    b = mc_mean(_const_sampler(1), lambda x: x[:, 0], 1000, 5, key=(1,))
    assert a.value != b.value


def test_mc_mean_isolated_minus_inf_dropped():
    def f(x):
        out = x[:, 0].copy()
        out[:2] = -np.inf  # two isolated hits in the first chunk
        return out

    est = mc_mean(_const_sampler(1), f, 1000, 3)
    assert est.hit_minus_infinity
    assert est.minus_inf_samples == 2
    assert est.samples == 998
    assert np.isfinite(est.value)


def test_mc_mean_many_minus_inf_is_minus_inf():
    def f(x):
        out = x[:, 0].copy()
        out[::10] = -np.inf
        return out

    est = mc_mean(_const_sampler(1), f, 1000, 3)
    assert est.value == -np.inf
    assert est.std_error == 0.0


def test_mc_mean_rejects_nan_and_plus_inf():
    def bad_nan(x):
        out = x[:, 0].copy()
        out[5] = np.nan
        return out

    def bad_inf(x):
        out = x[:, 0].copy()
        out[5] = np.inf
        return out

    with pytest.raises(EvaluationError):
        mc_mean(_const_sampler(1), bad_nan, 1000, 0)
    with pytest.raises(EvaluationError):
        mc_mean(_const_sampler(1), bad_inf, 1000, 0)


def test_mc_mean_budget_floor():
    with pytest.raises(DomainError):
        mc_mean(_const_sampler(1), lambda x: x[:, 0], 1, 0)


def test_gauss_legendre_01_exactness():
    t, w = gauss_legendre_01(8)
    # degree-15 exactness on [0, 1]
    for k in range(14):
        assert np.dot(w, t**k) == pytest.approx(1 / (k + 1), abs=1e-13)


def _quad(pts):
    # |z1|^2 - |z2|^2 without the expression machinery
    return (np.abs(pts[:, 0]) ** 2 - np.abs(pts[:, 1]) ** 2).astype(float)


def test_ellipsoid_mean_saddle_closed_form():
    e = Ellipsoid((1.0, 0.5))
    est = mean_over_ellipsoid(
        _quad, np.zeros(2, complex), UnitaryFrame.identity(2), e, 400_000, 9
    )
    expected = (1.0 - 0.25) / 3.0
    assert abs(est.value - expected) < 4 * est.std_error
    assert est.std_error < 0.002


def test_ellipsoid_mean_swap_frame_flips_sign():
    e = Ellipsoid((1.0, 0.5))
    T = UnitaryFrame.swap(2, 1, 2)
    est = mean_over_ellipsoid(_quad, np.zeros(2, complex), T, e, 400_000, 9)
    assert abs(est.value + 0.25) < 4 * est.std_error


def test_ellipsoid_mean_translation_covariance():
    # adding a center shifts |z|^2 means by |c|^2 + cross terms with mean 0
    e = Ellipsoid((0.3, 0.3))
    c = np.array([0.5, -0.25j])
    f = lambda pts: (np.abs(pts) ** 2).sum(axis=1)
    at0 = mean_over_ellipsoid(f, np.zeros(2, complex), UnitaryFrame.identity(2), e, 300_000, 4)
    atc = mean_over_ellipsoid(f, c, UnitaryFrame.identity(2), e, 300_000, 4)
    shift = float(np.sum(np.abs(c) ** 2))
    assert atc.value - at0.value == pytest.approx(shift, abs=5 * math.hypot(at0.std_error, atc.std_error))


def test_sphere_mean_quadratic_is_exact():
    f = lambda x: (x**2).sum(axis=1)
    est = sphere_mean(f, np.zeros(4), 0.3, 50_000, 2)
    assert est.value == pytest.approx(0.09, abs=1e-12)
    assert est.std_error < 1e-12  # constant on the sphere


@pytest.mark.parametrize("m", [2, 3, 4])
def test_ball_mean_quadratic(m):
    f = lambda x: (x**2).sum(axis=1)
    est = ball_mean(f, np.zeros(m), 0.5, 200_000, 6)
    expected = 0.25 * m / (m + 2)
    assert abs(est.value - expected) < 4 * est.std_error


def test_log_modulus_ball_mean_closed_form():
    # mean over the round ball of radius rho in C^2, centered where z1=0
    rho = 0.5

    def f(pts):
        return np.log(np.abs(pts[:, 0]))

    e = Ellipsoid((rho, rho))
    est = mean_over_ellipsoid(f, np.zeros(2, complex), UnitaryFrame.identity(2), e, 500_000, 13)
    assert abs(est.value - (math.log(rho) - 0.75)) < 4 * est.std_error


def test_weighted_radial_mean_ball_weight_equals_ball_mean():
    # with the R^m solid-ball density the weighted mean is the ball mean
    m = 4
    f = lambda x: (x**2).sum(axis=1)
    w = ball_weight(m)
    est = weighted_radial_mean(f, np.zeros(m), 0.4, w, 64_000, 3)
    expected = 0.16 * m / (m + 2)
    assert est.value == pytest.approx(expected, abs=1e-10)  # exact: radial integrand


def test_weighted_radial_mean_budget_split():
    calls = []

    def f(x):
        calls.append(x.shape[0])
        return np.ones(x.shape[0])

    weighted_radial_mean(f, np.zeros(2), 0.3, ball_weight(2), 1600, 0, t_nodes=16)
    # 16 nodes, each with budget // 16 = 100 samples
    assert sorted(set(calls)) == [100]
    assert sum(calls) == 1600


def test_mean_estimate_is_frozen():
    est = MeanEstimate(1.0, 0.1, 10)
    with pytest.raises(AttributeError):
        est.value = 2.0
