"""Monte Carlo means over ellipsoids, spheres and balls.

Evaluator contract: a complex-domain evaluator maps an (N, n) complex128
array of points to an (N,) real array; a real-domain evaluator does the
same for (N, m) float64 input.  Values live in [-inf, inf); NaN or +inf
aborts the run.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .geometry import Ellipsoid, UnitaryFrame, map_ball_samples
from .mc import DEFAULT_BUDGET, MeanEstimate, mc_mean


def _unit_ball_sampler(m: int):
    """Uniform draws from the unit ball of R^m; fixed rng call order."""

    def sample(rng: np.random.Generator, size: int) -> np.ndarray:
        g = rng.standard_normal((size, m))
        u = rng.random(size)
        norms = np.linalg.norm(g, axis=1)
        norms[norms == 0.0] = 1.0
        scale = u ** (1.0 / m) / norms
        return g * scale[:, None]

    return sample


def _unit_sphere_sampler(m: int):
    def sample(rng: np.random.Generator, size: int) -> np.ndarray:
        g = rng.standard_normal((size, m))
        norms = np.linalg.norm(g, axis=1)
        norms[norms == 0.0] = 1.0
        return g / norms[:, None]

    return sample


def _reals_to_complex(x: np.ndarray) -> np.ndarray:
    """(N, 2n) real coordinates -> (N, n) complex, pairing (x, y) per axis."""
    return x[:, 0::2] + 1j * x[:, 1::2]


def mean_over_ellipsoid(
    eval_fn,
    center: np.ndarray,
    frame: UnitaryFrame,
    ellipsoid: Ellipsoid,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
) -> MeanEstimate:
    """Volume average of eval_fn over center + frame(E).

    Uniform unit-ball samples in R^(2n) are pushed through the affine map
    onto the ellipsoid; the Jacobian is constant, so the ball average is
    the ellipsoid average.
    """
    n = ellipsoid.dim
    center = np.asarray(center, dtype=np.complex128)
    if center.shape != (n,):
        raise DimensionMismatchError(
            f"center has shape {center.shape}, expected ({n},)"
        )
    if frame.dim != n:
        raise DimensionMismatchError(
            f"frame is {frame.dim}x{frame.dim}, ellipsoid has dimension {n}"
        )
    ball = _unit_ball_sampler(2 * n)

    def sample(rng, size):
        w = _reals_to_complex(ball(rng, size))
        return map_ball_samples(w, ellipsoid, frame, center)

    return mc_mean(sample, eval_fn, budget, seed, key, workers)


def sphere_mean(
    eval_fn,
    center: np.ndarray,
    r: float,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
) -> MeanEstimate:
    """Surface average of a real-domain evaluator over the sphere |x - c| = r."""
    center = np.asarray(center, dtype=np.float64)
    if center.ndim != 1:
        raise DomainError("center must be a 1-D real point")
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    m = center.shape[0]
    unit = _unit_sphere_sampler(m)

    def sample(rng, size):
        return center[None, :] + r * unit(rng, size)

    return mc_mean(sample, eval_fn, budget, seed, key, workers)


def ball_mean(
    eval_fn,
    center: np.ndarray,
    r: float,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
) -> MeanEstimate:
    """Volume average of a real-domain evaluator over the ball |x - c| <= r."""
    center = np.asarray(center, dtype=np.float64)
    if center.ndim != 1:
        raise DomainError("center must be a 1-D real point")
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    m = center.shape[0]
    ball = _unit_ball_sampler(m)

    def sample(rng, size):
        return center[None, :] + r * ball(rng, size)

    return mc_mean(sample, eval_fn, budget, seed, key, workers)


def gauss_legendre_01(nodes: int):
    """Gauss-Legendre rule transplanted to [0, 1]; weights sum to 1."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (x + 1.0) / 2.0, w / 2.0


def weighted_radial_mean(
    eval_fn,
    center: np.ndarray,
    r: float,
    weight,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    t_nodes: int = 16,
    workers: int = 1,
) -> MeanEstimate:
    """integral_0^1 p(t) * (sphere mean at radius r*t) dt by quadrature.

    The budget is split across quadrature nodes.  Sphere means at distinct
    nodes use distinct substream keys, so they are independent and the
    node errors combine in quadrature: sqrt(sum (w_i p(t_i) se_i)^2).
    """
    if t_nodes < 2:
        raise DomainError(f"t_nodes must be >= 2, got {t_nodes}")
    ts, ws = gauss_legendre_01(t_nodes)
    node_budget = max(2, budget // t_nodes)
    total = 0.0
    err2 = 0.0
    samples = 0
    hit = False
    n_neg = 0
    for i, (t, w) in enumerate(zip(ts, ws)):
        coeff = w * float(weight(t))
        est = sphere_mean(
            eval_fn, center, r * t, node_budget, seed, key + (i,), workers
        )
        samples += est.samples
        n_neg += est.minus_inf_samples
        if est.hit_minus_infinity:
            hit = True
        if est.value == float("-inf"):
            if coeff > 0.0:
                return MeanEstimate(
                    value=float("-inf"),
                    std_error=0.0,
                    samples=samples,
                    hit_minus_infinity=True,
                    minus_inf_samples=n_neg,
                )
            continue
        total += coeff * est.value
        err2 += (coeff * est.std_error) ** 2
    return MeanEstimate(
        value=total,
        std_error=float(np.sqrt(err2)),
        samples=samples,
        hit_minus_infinity=hit,
        minus_inf_samples=n_neg,
    )
