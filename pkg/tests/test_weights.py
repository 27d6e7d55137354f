"""Radial weight functions and the scaling constant."""

import numpy as np
import pytest

from pshcheck.errors import DomainError
from pshcheck.integrate import gauss_legendre_01
from pshcheck.weights import (
    WeightFunction,
    ball_weight,
    ellipsoid_slice_weight,
    laplace_constant,
)


def _integral(w, f=lambda t: 1.0):
    t, gl_w = gauss_legendre_01(64)
    return float(np.sum(gl_w * w(t) * f(t)))


@pytest.mark.parametrize("m", range(1, 9))
def test_ball_weight_normalized(m):
    w = ball_weight(m)
    assert abs(_integral(w) - 1.0) < 1e-10
    assert w.nonneg


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("l", [0, 1, 2, 3, 4])
def test_slice_weight_normalized(k, l):
    w = ellipsoid_slice_weight(k, l)
    assert abs(_integral(w) - 1.0) < 1e-10
    assert w.nonneg


@pytest.mark.parametrize("m", range(1, 9))
def test_ball_weight_second_moment(m):
    # int t^2 * m t^(m-1) dt = m/(m+2)
    w = ball_weight(m)
    assert w.second_moment() == pytest.approx(m / (m + 2), abs=1e-12)


@pytest.mark.parametrize(
    "k,l", [(1, 0), (1, 1), (2, 0), (2, 1), (3, 2)]
)
def test_slice_weight_second_moment(k, l):
    # int t^2 * c (1-t^2)^l t^(2k-1) dt = k/(k+l+1)
    w = ellipsoid_slice_weight(k, l)
    assert w.second_moment() == pytest.approx(k / (k + l + 1), abs=1e-12)


@pytest.mark.parametrize("m", range(1, 9))
def test_laplace_constant_ball(m):
    assert laplace_constant(ball_weight(m), m) == pytest.approx(2 * (m + 2), abs=1e-10)


def test_laplace_constant_slice():
    # A = 2m / (k/(k+l+1)) with m = 2k on the slice's real dimension
    k, l = 2, 1
    w = ellipsoid_slice_weight(k, l)
    assert laplace_constant(w, 2 * k) == pytest.approx(4 * (k + l + 1), abs=1e-10)


def test_slice_k1_l0_is_planar_disc_density():
    # k=1, l=0 reduces to the R^2 ball weight 2t
    w = ellipsoid_slice_weight(1, 0)
    t = np.linspace(0.05, 0.95, 7)
    assert np.allclose(w(t), 2 * t, atol=1e-12)


def test_unnormalized_weight_rejected():
    with pytest.raises(DomainError):
        WeightFunction(fn=lambda t: 3.0 * t, family="custom")


def test_negative_weight_must_not_claim_nonneg():
    with pytest.raises(DomainError):
        WeightFunction(
            fn=lambda t: 4.0 - 6.0 * t,  # integrates to 1, dips negative
            family="custom",
            nonneg=True,
        )


def test_ball_weight_rejects_nonsense():
    with pytest.raises(DomainError):
        ball_weight(0)
    with pytest.raises(DomainError):
        ellipsoid_slice_weight(0, 1)
    with pytest.raises(DomainError):
        ellipsoid_slice_weight(2, -1)


def test_describe_mentions_parameters():
    assert "2" in ball_weight(2).describe()
    d = ellipsoid_slice_weight(3, 1).describe()
    assert "3" in d and "1" in d
