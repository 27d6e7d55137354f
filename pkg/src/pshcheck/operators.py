"""Estimators for generalized second-order operators.

Each operator is a limsup of difference quotients as a radius shrinks.
We discretize the limsup with a geometric radius schedule and take the
max over a tail window of the smallest radii.  Monte Carlo noise in the
quotients grows like 1/r^2, so each radius carries a propagated error
and a noise_dominated flag; noisy radii are dropped from the tail max
whenever at least one clean radius remains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PointAtMinusInfinityError
from .geometry import Ellipsoid, UnitaryFrame, sample_haar_unitary
from .integrate import mean_over_ellipsoid, sphere_mean, weighted_radial_mean
from .mc import DEFAULT_BUDGET
from .weights import WeightFunction, laplace_constant

DEFAULT_RATIO = 0.7
DEFAULT_COUNT = 12
DEFAULT_WINDOW = 4


@dataclass(frozen=True)
class LimsupSchedule:
    """Strictly decreasing radii plus the size of the tail used as limsup."""

    radii: tuple[float, ...]
    tail_window: int

    def __post_init__(self):
        if not self.radii:
            raise DomainError("schedule needs at least one radius")
        arr = tuple(float(r) for r in self.radii)
        if any(not (r > 0) or not np.isfinite(r) for r in arr):
            raise DomainError(f"schedule radii must be positive finite, got {arr}")
        if any(later >= earlier for later, earlier in zip(arr[1:], arr[:-1])):
            raise DomainError(f"schedule radii must be strictly decreasing, got {arr}")
        if not (1 <= self.tail_window <= len(arr)):
            raise DomainError(
                f"tail_window must be in [1, {len(arr)}], got {self.tail_window}"
            )
        object.__setattr__(self, "radii", arr)

    @staticmethod
    def geometric(
        base: float,
        ratio: float = DEFAULT_RATIO,
        count: int = DEFAULT_COUNT,
        window: int = DEFAULT_WINDOW,
    ) -> "LimsupSchedule":
        if not (0 < ratio < 1):
            raise DomainError(f"ratio must be in (0, 1), got {ratio}")
        if count < 1:
            raise DomainError(f"count must be >= 1, got {count}")
        radii = tuple(base * ratio**k for k in range(count))
        return LimsupSchedule(radii=radii, tail_window=min(window, count))

    def tail(self) -> tuple[float, ...]:
        return self.radii[-self.tail_window:]


@dataclass(frozen=True)
class PerRadius:
    """One scheduled radius: its quotient, propagated error, and flags."""

    radius: float
    quotient: float
    std_error: float
    noise_dominated: bool
    minus_inf: bool
    detail: tuple = ()


@dataclass(frozen=True)
class OperatorEstimate:
    """Tail-max limsup surrogate with its per-radius audit trail.

    value is NaN exactly when inconclusive: either every tail radius hit
    a -inf mean, or every tail radius was noise-dominated (all_noise
    distinguishes the second case).  The per_radius rows keep the raw
    quotients either way for diagnosis.
    """

    value: float
    std_error: float
    per_radius: tuple[PerRadius, ...]
    frames_tried: int = 1
    inconclusive: bool = False
    all_noise: bool = False
    frame_label: str = ""
    frame_results: tuple = ()


def _tail_pick(per_radius, window: int):
    """Select the tail-max entry honoring the noise and -inf exclusions.

    Returns (entry, inconclusive, all_noise).  -inf-flagged radii never
    participate; noise-dominated ones are excluded from the max; a tail
    that is entirely -inf or entirely noise-dominated yields no value at
    all (inconclusive) rather than a sign fabricated from noise.
    """
    tail = [p for p in per_radius[-window:] if not p.minus_inf]
    if not tail:
        return None, True, False
    clean = [p for p in tail if not p.noise_dominated]
    if not clean:
        return None, True, True
    best = max(clean, key=lambda p: p.quotient)
    return best, False, False


def center_value(u, point, allow_minus_inf: bool = False) -> float:
    """u at a single point; -inf raises unless the caller opts in."""
    u0 = u.eval_point(point) if hasattr(u, "eval_point") else float(
        np.asarray(u(np.asarray(point)[None, :]))[0]
    )
    if u0 == float("-inf") and not allow_minus_inf:
        raise PointAtMinusInfinityError(
            "operator undefined at a point where the function is -inf"
        )
    return u0


def bp_laplacian(
    u,
    x0,
    sched: LimsupSchedule | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
) -> OperatorEstimate:
    """Generalized Laplacian 2m * limsup (sphere mean - u(x0)) / r^2."""
    x0 = np.asarray(x0, dtype=np.float64)
    m = x0.shape[0]
    if sched is None:
        sched = LimsupSchedule.geometric(0.5)
    u0 = center_value(u, x0)
    scale = 2.0 * m
    rows = []
    for i, r in enumerate(sched.radii):
        est = sphere_mean(u, x0, r, budget, seed, key + (i,), workers)
        if est.value == float("-inf"):
            rows.append(PerRadius(r, float("-inf"), 0.0, False, True))
            continue
        q = scale * (est.value - u0) / (r * r)
        se = scale * est.std_error / (r * r)
        rows.append(PerRadius(r, q, se, se > abs(q), False))
    best, inconclusive, all_noise = _tail_pick(rows, sched.tail_window)
    return OperatorEstimate(
        value=float("nan") if inconclusive else best.quotient,
        std_error=0.0 if inconclusive else best.std_error,
        per_radius=tuple(rows),
        inconclusive=inconclusive,
        all_noise=all_noise,
    )


def p_laplacian(
    u,
    x0,
    p: WeightFunction,
    m: int | None = None,
    sched: LimsupSchedule | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    t_nodes: int = 16,
    workers: int = 1,
) -> OperatorEstimate:
    """Weighted generalized Laplacian A * limsup (n_u^p(x0, r) - u(x0)) / r^2.

    n_u^p averages sphere means against the radial density p; A is the
    normalizer making the operator equal the Laplacian for C^2 functions.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    if m is None:
        m = x0.shape[0]
    if sched is None:
        sched = LimsupSchedule.geometric(0.5)
    u0 = center_value(u, x0)
    a = laplace_constant(p, m)
    rows = []
    for i, r in enumerate(sched.radii):
        est = weighted_radial_mean(
            u, x0, r, p, budget, seed, key + (i,), t_nodes, workers
        )
        if est.value == float("-inf"):
            rows.append(PerRadius(r, float("-inf"), 0.0, False, True))
            continue
        q = a * (est.value - u0) / (r * r)
        se = a * est.std_error / (r * r)
        rows.append(PerRadius(r, q, se, se > abs(q), False))
    best, inconclusive, all_noise = _tail_pick(rows, sched.tail_window)
    return OperatorEstimate(
        value=float("nan") if inconclusive else best.quotient,
        std_error=0.0 if inconclusive else best.std_error,
        per_radius=tuple(rows),
        inconclusive=inconclusive,
        all_noise=all_noise,
    )


def default_outer_schedule() -> LimsupSchedule:
    return LimsupSchedule.geometric(0.35, count=6, window=3)


def default_inner_schedule() -> LimsupSchedule:
    """The inner radius must go much deeper than the outer one.

    The nested limit freezes the outer radius R while r -> 0, so the
    discretized inner tail has to sit well below the smallest R.
    """
    return LimsupSchedule.geometric(0.35, count=14, window=3)


def d_upper_T(
    u,
    z0,
    frame: UnitaryFrame,
    R_sched: LimsupSchedule | None = None,
    r_sched: LimsupSchedule | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
) -> OperatorEstimate:
    """Nested-limsup ellipsoid operator for one unitary frame.

    Inner pass: for fixed outer radius R, tail max over the inner
    schedule of means over E(R, r, ..., r).  Outer pass: quotient
    (inner - u(z0)) / R^2, tail max over the outer schedule.  In one
    complex dimension the ellipsoid has no inner radius and the inner
    pass degenerates to a single disc mean.
    """
    z0 = np.asarray(z0, dtype=np.complex128)
    n = z0.shape[0]
    if frame.dim != n:
        raise DomainError(f"frame dimension {frame.dim} != point dimension {n}")
    if R_sched is None:
        R_sched = default_outer_schedule()
    if r_sched is None:
        r_sched = default_inner_schedule()
    u0 = center_value(u, z0)
    rows = []
    for i, R in enumerate(R_sched.radii):
        inner_rows = []
        if n == 1:
            est = mean_over_ellipsoid(
                u, z0, frame, Ellipsoid((R,)), budget, seed, key + (i, 0), workers
            )
            inner_rows.append((0.0, est))
        else:
            for j, r in enumerate(r_sched.radii):
                e = Ellipsoid.round(R, r, n)
                est = mean_over_ellipsoid(
                    u, z0, frame, e, budget, seed, key + (i, j), workers
                )
                inner_rows.append((r, est))
        usable = [
            (r, est)
            for r, est in inner_rows[-(r_sched.tail_window if n > 1 else 1):]
            if est.value != float("-inf")
        ]
        if not usable:
            rows.append(PerRadius(R, float("-inf"), 0.0, False, True))
            continue
        r_star, m_star = max(usable, key=lambda t: t[1].value)
        q = (m_star.value - u0) / (R * R)
        se = m_star.std_error / (R * R)
        rows.append(
            PerRadius(R, q, se, se > abs(q), False, detail=(("inner_radius", r_star),))
        )
    best, inconclusive, all_noise = _tail_pick(rows, R_sched.tail_window)
    return OperatorEstimate(
        value=float("nan") if inconclusive else best.quotient,
        std_error=0.0 if inconclusive else best.std_error,
        per_radius=tuple(rows),
        inconclusive=inconclusive,
        all_noise=all_noise,
        frame_label=frame.label or "identity",
    )


def candidate_frames(
    n: int, n_haar: int, seed: int = 0
) -> tuple[UnitaryFrame, ...]:
    """Identity, every coordinate swap, and n_haar Haar-random unitaries.

    Swaps are always included: the canonical saddle counterexample is
    witnessed by one, and a random search can miss it.
    """
    if n_haar < 0:
        raise DomainError(f"n_haar must be >= 0, got {n_haar}")
    frames = [UnitaryFrame.identity(n)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            frames.append(UnitaryFrame.swap(n, i, j))
    for k in range(n_haar):
        frames.append(sample_haar_unitary(n, seed * 1_000_003 + k))
    return tuple(frames)


def d_upper(
    u,
    z0,
    n_frames: int = 2,
    R_sched: LimsupSchedule | None = None,
    r_sched: LimsupSchedule | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
    frames: tuple[UnitaryFrame, ...] | None = None,
) -> OperatorEstimate:
    """Frame infimum of d_upper_T over identity + swaps + Haar samples.

    A nonnegative value over the searched frames is evidence (never
    proof) of the sub-mean inequality in every frame.
    """
    z0 = np.asarray(z0, dtype=np.complex128)
    n = z0.shape[0]
    if frames is None:
        frames = candidate_frames(n, n_frames, seed)
    if not frames:
        raise DomainError("frame list must be nonempty")
    results = []
    for f_idx, frame in enumerate(frames):
        est = d_upper_T(
            u, z0, frame, R_sched, r_sched, budget, seed, key + (f_idx,), workers
        )
        results.append((frame, est))
    usable = [(f, e) for f, e in results if not e.inconclusive]
    summary = tuple(
        (f.label or "identity", e.value, e.std_error, e.inconclusive)
        for f, e in results
    )
    if not usable:
        return OperatorEstimate(
            value=float("nan"),
            std_error=0.0,
            per_radius=(),
            frames_tried=len(results),
            inconclusive=True,
            frame_results=summary,
        )
    frame_min, est_min = min(usable, key=lambda t: t[1].value)
    return OperatorEstimate(
        value=est_min.value,
        std_error=est_min.std_error,
        per_radius=est_min.per_radius,
        frames_tried=len(results),
        inconclusive=False,
        all_noise=est_min.all_noise,
        frame_label=frame_min.label or "identity",
        frame_results=summary,
    )
