"""Named consistency checks over point grids.

Every check tests a mean-value inequality (or equality) with a 3x
standard-error decision band, one-sided for inequalities, two-sided for
the harmonic equality.  A flagged violation whose margin is within 6
standard errors of zero is automatically re-run once at 10x budget
before being reported, which suppresses Monte Carlo flukes without
hiding real failures.

The band is floored by a relative rounding allowance: zero-variance
paths (constants, radially exact integrands) can land a few ulps on the
wrong side of an equality while reporting std_error 0, and a 1e-12
floor keeps those from masquerading as violations without affecting
any margin of real size.

Semantics of -inf: centers where u = -inf are excluded by the theory.
The mean-value inequalities hold there trivially, so those points count
as consistent for the mean checks; the pointwise operators are simply
undefined, so an all--inf grid makes the operator checks inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, PshcheckError
from .geometry import Ellipsoid, UnitaryFrame
from .integrate import mean_over_ellipsoid, weighted_radial_mean
from .mc import DEFAULT_BUDGET
from .operators import LimsupSchedule, center_value, d_upper, p_laplacian
from .weights import WeightFunction

ESCALATION_FACTOR = 10
ROUNDING_FLOOR = 1e-12

STATUS_CONSISTENT = "consistent"
STATUS_VIOLATION = "violation"
STATUS_INCONCLUSIVE = "inconclusive"

POINT_CONSISTENT = "consistent"
POINT_VIOLATION = "violation"
POINT_SKIPPED = "skipped-minus-inf"
POINT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Witness:
    """Everything needed to replay one flagged configuration."""

    point: tuple
    frame: str
    radii: tuple
    margin: float
    std_error: float
    seed: int
    budget: int
    key: tuple
    escalated: bool = False
    detail: tuple = ()


@dataclass(frozen=True)
class Verdict:
    status: str
    witnesses: tuple[Witness, ...]
    checks_run: dict
    point_status: tuple[str, ...] = ()

    def __post_init__(self):
        if self.status not in (
            STATUS_CONSISTENT,
            STATUS_VIOLATION,
            STATUS_INCONCLUSIVE,
        ):
            raise PshcheckError(f"bad verdict status {self.status!r}")
        if self.status == STATUS_VIOLATION and not any(
            w.margin < -3.0 * w.std_error for w in self.witnesses
        ):
            raise PshcheckError(
                "violation verdict requires a witness with margin < -3*std_error"
            )


def _aggregate(point_status, counts, require_tested: bool) -> str:
    """Combine per-point statuses; require_tested controls the all-skip case."""
    if POINT_VIOLATION in point_status:
        return STATUS_VIOLATION
    if POINT_CONSISTENT in point_status:
        return STATUS_CONSISTENT
    if not require_tested and point_status and all(
        s == POINT_SKIPPED for s in point_status
    ):
        return STATUS_CONSISTENT
    return STATUS_INCONCLUSIVE


def _floor_for(u0: float) -> float:
    return ROUNDING_FLOOR * max(1.0, abs(u0))


def _escalating(run, counts, floor: float = 0.0):
    """run(budget_factor, attempt) -> (margin, se, payload); applies the re-run rule."""
    margin, se, payload = run(1, 0)
    escalated = False
    if margin < -(3.0 * se + floor) and abs(margin) < 6.0 * se + floor:
        counts["escalations"] += 1
        margin, se, payload = run(ESCALATION_FACTOR, 1)
        escalated = True
    return margin, se, payload, escalated


def _check_domain_fit(z0, reach: float, domain_radius: float | None):
    if domain_radius is None:
        return
    extent = float(np.linalg.norm(np.asarray(z0))) + reach
    if extent > domain_radius:
        raise ConfigError(
            f"sampling set around {np.asarray(z0).tolist()} reaches {extent:.6g}, "
            f"outside the declared domain radius {domain_radius:.6g}"
        )


def _new_counts(**extra) -> dict:
    counts = {
        "points": 0,
        "configs": 0,
        "violations": 0,
        "skipped_minus_inf": 0,
        "inconclusive": 0,
        "escalations": 0,
    }
    counts.update(extra)
    return counts


def check_mean_value_b(
    u,
    grid,
    frames,
    radii_sets,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
    domain_radius: float | None = None,
) -> Verdict:
    """Sub-mean inequality u(z0) <= ellipsoid mean, per (point, frame, ellipsoid)."""
    frames = tuple(frames)
    radii_sets = tuple(radii_sets)
    if not frames or not radii_sets:
        raise ConfigError("need at least one frame and one ellipsoid")
    counts = _new_counts()
    witnesses = []
    point_status = []
    for ip, z0 in enumerate(grid):
        z0 = np.asarray(z0, dtype=np.complex128)
        counts["points"] += 1
        u0 = center_value(u, z0, allow_minus_inf=True)
        if u0 == float("-inf"):
            counts["skipped_minus_inf"] += 1
            point_status.append(POINT_SKIPPED)
            continue
        floor = _floor_for(u0)
        worst = POINT_CONSISTENT
        for fi, frame in enumerate(frames):
            for ei, e in enumerate(radii_sets):
                _check_domain_fit(z0, max(e.radii), domain_radius)
                counts["configs"] += 1

                def run(factor, attempt, _z0=z0, _f=frame, _e=e, _ip=ip, _fi=fi, _ei=ei):
                    est = mean_over_ellipsoid(
                        u, _z0, _f, _e, budget * factor, seed,
                        key + (_ip, _fi, _ei, attempt), workers,
                    )
                    if est.value == float("-inf"):
                        return float("nan"), 0.0, est
                    return est.value - u0, est.std_error, est

                margin, se, est, escalated = _escalating(run, counts, floor)
                if margin != margin:  # NaN: the mean itself was -inf
                    counts["inconclusive"] += 1
                    if worst == POINT_CONSISTENT:
                        worst = POINT_INCONCLUSIVE
                    continue
                if margin < -(3.0 * se + floor):
                    counts["violations"] += 1
                    worst = POINT_VIOLATION
                    witnesses.append(
                        Witness(
                            point=tuple(z0.tolist()),
                            frame=frame.label or "identity",
                            radii=e.radii,
                            margin=margin,
                            std_error=se,
                            seed=seed,
                            budget=budget * (ESCALATION_FACTOR if escalated else 1),
                            key=key + (ip, fi, ei, 1 if escalated else 0),
                            escalated=escalated,
                        )
                    )
        point_status.append(worst)
    status = _aggregate(point_status, counts, require_tested=False)
    return Verdict(status, tuple(witnesses), counts, tuple(point_status))


def lattice_ellipsoids(n: int, r0: float, levels: int = 4, ratio: float = 0.7):
    """Geometric (R, r) lattice below r0 for E(R, r, ..., r) in dimension n.

    In one complex dimension the lattice degenerates to discs E(R).
    """
    if not r0 > 0:
        raise DomainError(f"r0 must be positive, got {r0}")
    scales = [r0 * ratio**a for a in range(levels)]
    if n == 1:
        return tuple(Ellipsoid((R,)) for R in scales)
    return tuple(
        Ellipsoid.round(R, r, n) for R in scales for r in scales
    )


def check_mean_value_d(
    u,
    grid,
    frames,
    r0: float,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    levels: int = 4,
    ratio: float = 0.7,
    key: tuple[int, ...] = (),
    workers: int = 1,
    domain_radius: float | None = None,
) -> Verdict:
    """Sufficient criterion: the sub-mean inequality on an (R, r) lattice below r0."""
    grid = list(grid)
    if not grid:
        raise ConfigError("empty grid")
    n = np.asarray(grid[0]).shape[0]
    lattice = lattice_ellipsoids(n, r0, levels, ratio)
    return check_mean_value_b(
        u, grid, frames, lattice, budget, seed, key, workers, domain_radius
    )


def check_bp_psh(
    u,
    grid,
    n_frames: int = 2,
    R_sched: LimsupSchedule | None = None,
    r_sched: LimsupSchedule | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
    frames: tuple[UnitaryFrame, ...] | None = None,
) -> Verdict:
    """Pointwise nested-limsup criterion: frame-infimum operator >= -3*error."""
    counts = _new_counts()
    witnesses = []
    point_status = []
    for ip, z0 in enumerate(grid):
        z0 = np.asarray(z0, dtype=np.complex128)
        counts["points"] += 1
        u0 = center_value(u, z0, allow_minus_inf=True)
        if u0 == float("-inf"):
            counts["skipped_minus_inf"] += 1
            point_status.append(POINT_SKIPPED)
            continue
        floor = _floor_for(u0)
        counts["configs"] += 1

        def run(factor, attempt, _z0=z0, _ip=ip):
            est = d_upper(
                u, _z0, n_frames, R_sched, r_sched, budget * factor, seed,
                key + (_ip, attempt), workers, frames,
            )
            if est.inconclusive:
                return float("nan"), 0.0, est
            return est.value, est.std_error, est

        margin, se, est, escalated = _escalating(run, counts, floor)
        if margin != margin:
            counts["inconclusive"] += 1
            point_status.append(POINT_INCONCLUSIVE)
            continue
        if margin < -(3.0 * se + floor):
            counts["violations"] += 1
            point_status.append(POINT_VIOLATION)
            witnesses.append(
                Witness(
                    point=tuple(z0.tolist()),
                    frame=est.frame_label,
                    radii=tuple(p.radius for p in est.per_radius),
                    margin=margin,
                    std_error=se,
                    seed=seed,
                    budget=budget * (ESCALATION_FACTOR if escalated else 1),
                    key=key + (ip, 1 if escalated else 0),
                    escalated=escalated,
                    detail=(("frames_tried", est.frames_tried),),
                )
            )
        else:
            point_status.append(POINT_CONSISTENT)
    status = _aggregate(point_status, counts, require_tested=True)
    return Verdict(status, tuple(witnesses), counts, tuple(point_status))


def check_subharmonic_p(
    u,
    grid,
    p: WeightFunction,
    m: int | None = None,
    sched: LimsupSchedule | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    t_nodes: int = 16,
    workers: int = 1,
) -> Verdict:
    """Weighted generalized Laplacian >= -3*error at every finite grid point."""
    if not p.nonneg:
        raise DomainError(
            "subharmonicity equivalence needs a nonnegative weight; "
            f"{p.describe()} is not declared nonneg"
        )
    counts = _new_counts()
    witnesses = []
    point_status = []
    for ip, x0 in enumerate(grid):
        x0 = np.asarray(x0, dtype=np.float64)
        counts["points"] += 1
        u0 = center_value(u, x0, allow_minus_inf=True)
        if u0 == float("-inf"):
            counts["skipped_minus_inf"] += 1
            point_status.append(POINT_SKIPPED)
            continue
        floor = _floor_for(u0)
        counts["configs"] += 1

        def run(factor, attempt, _x0=x0, _ip=ip):
            est = p_laplacian(
                u, _x0, p, m, sched, budget * factor, seed,
                key + (_ip, attempt), t_nodes, workers,
            )
            if est.inconclusive:
                return float("nan"), 0.0, est
            return est.value, est.std_error, est

        margin, se, est, escalated = _escalating(run, counts, floor)
        if margin != margin:
            counts["inconclusive"] += 1
            point_status.append(POINT_INCONCLUSIVE)
            continue
        if margin < -(3.0 * se + floor):
            counts["violations"] += 1
            point_status.append(POINT_VIOLATION)
            witnesses.append(
                Witness(
                    point=tuple(x0.tolist()),
                    frame="",
                    radii=tuple(pr.radius for pr in est.per_radius),
                    margin=margin,
                    std_error=se,
                    seed=seed,
                    budget=budget * (ESCALATION_FACTOR if escalated else 1),
                    key=key + (ip, 1 if escalated else 0),
                    escalated=escalated,
                    detail=(("weight", p.describe()),),
                )
            )
        else:
            point_status.append(POINT_CONSISTENT)
    status = _aggregate(point_status, counts, require_tested=True)
    return Verdict(status, tuple(witnesses), counts, tuple(point_status))


def check_harmonic_p(
    u,
    grid,
    p: WeightFunction,
    m: int | None = None,
    r_list=(0.4, 0.25, 0.15),
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    t_nodes: int = 16,
    workers: int = 1,
) -> Verdict:
    """Two-sided equality: weighted radial mean == center value at each radius.

    The witness margin is -(absolute difference); the signed difference
    is recorded under detail for diagnosis.
    """
    counts = _new_counts()
    witnesses = []
    point_status = []
    for ip, x0 in enumerate(grid):
        x0 = np.asarray(x0, dtype=np.float64)
        counts["points"] += 1
        u0 = center_value(u, x0, allow_minus_inf=True)
        if u0 == float("-inf"):
            counts["skipped_minus_inf"] += 1
            point_status.append(POINT_SKIPPED)
            continue
        floor = _floor_for(u0)
        worst = POINT_CONSISTENT
        for ir, r in enumerate(r_list):
            counts["configs"] += 1

            def run(factor, attempt, _x0=x0, _r=r, _ip=ip, _ir=ir):
                est = weighted_radial_mean(
                    u, _x0, _r, p, budget * factor, seed,
                    key + (_ip, _ir, attempt), t_nodes, workers,
                )
                if est.value == float("-inf"):
                    return float("nan"), 0.0, est
                return -abs(est.value - u0), est.std_error, est

            margin, se, est, escalated = _escalating(run, counts, floor)
            if margin != margin:
                counts["inconclusive"] += 1
                if worst == POINT_CONSISTENT:
                    worst = POINT_INCONCLUSIVE
                continue
            if margin < -(3.0 * se + floor):
                counts["violations"] += 1
                worst = POINT_VIOLATION
                witnesses.append(
                    Witness(
                        point=tuple(x0.tolist()),
                        frame="",
                        radii=(r,),
                        margin=margin,
                        std_error=se,
                        seed=seed,
                        budget=budget * (ESCALATION_FACTOR if escalated else 1),
                        key=key + (ip, ir, 1 if escalated else 0),
                        escalated=escalated,
                        detail=(
                            ("difference", est.value - u0),
                            ("weight", p.describe()),
                        ),
                    )
                )
        point_status.append(worst)
    status = _aggregate(point_status, counts, require_tested=True)
    return Verdict(status, tuple(witnesses), counts, tuple(point_status))


def monotonicity_scan(
    u,
    z0,
    frame: UnitaryFrame,
    base: Ellipsoid,
    axis: int,
    steps,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
) -> Verdict:
    """Mean along one growing ellipsoid axis must not decrease (within noise).

    All steps share one substream key, so every step sees the same
    underlying ball draws (common random numbers); a decrease then
    cannot be an artifact of independent sampling noise.
    """
    steps = tuple(float(s) for s in steps)
    if len(steps) < 2:
        raise ConfigError("need at least two steps to scan monotonicity")
    if any(b <= a for a, b in zip(steps, steps[1:])):
        raise ConfigError(f"steps must be strictly increasing, got {steps}")
    if not (1 <= axis <= base.dim):
        raise ConfigError(f"axis must be in 1..{base.dim}, got {axis}")
    z0 = np.asarray(z0, dtype=np.complex128)
    counts = _new_counts(steps=len(steps))
    estimates = []
    for s in steps:
        radii = list(base.radii)
        radii[axis - 1] = s
        est = mean_over_ellipsoid(
            u, z0, frame, Ellipsoid(tuple(radii)), budget, seed, key + (0,), workers
        )
        counts["configs"] += 1
        estimates.append(est)
    counts["points"] = 1
    witnesses = []
    worst = POINT_CONSISTENT
    usable = [e.value != float("-inf") for e in estimates]
    if not all(usable):
        counts["inconclusive"] += 1
        worst = POINT_INCONCLUSIVE
    else:
        for (s_a, e_a), (s_b, e_b) in zip(
            zip(steps, estimates), zip(steps[1:], estimates[1:])
        ):
            drop = e_b.value - e_a.value
            combined = float(np.hypot(e_a.std_error, e_b.std_error))
            floor = _floor_for(max(abs(e_a.value), abs(e_b.value)))
            if drop < -(3.0 * combined + floor):
                counts["violations"] += 1
                worst = POINT_VIOLATION
                witnesses.append(
                    Witness(
                        point=tuple(z0.tolist()),
                        frame=frame.label or "identity",
                        radii=(s_a, s_b),
                        margin=drop,
                        std_error=combined,
                        seed=seed,
                        budget=budget,
                        key=key + (0,),
                        detail=(("axis", axis), ("base", base.radii)),
                    )
                )
    status = _aggregate((worst,), counts, require_tested=True)
    return Verdict(status, tuple(witnesses), counts, (worst,))
