"""Radial weight profiles for weighted spherical means.

A weight is a probability density p on [0, 1]: the weighted mean of u at
radius r is integral_0^1 p(t) * (sphere mean of u at r*t) dt.  The
associated second-order operator needs the normalizing constant
2m / integral_0^1 t^2 p(t) dt, where m is the ambient real dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

NORMALIZATION_TOL = 1e-10
_GL_NODES = 64


def _gl64():
    x, w = np.polynomial.legendre.leggauss(_GL_NODES)
    return (x + 1.0) / 2.0, w / 2.0


@dataclass(frozen=True)
class WeightFunction:
    """A density on [0, 1] with a family tag for reporting.

    Construction verifies integral p = 1 with a 64-node Gauss-Legendre
    rule; profiles with endpoint singularities that the rule cannot
    resolve are rejected.
    """

    fn: Callable[[float], float] = field(compare=False)
    family: str = "custom"
    params: tuple = ()
    nonneg: bool = False

    def __post_init__(self):
        ts, ws = _gl64()
        vals = np.array([float(self.fn(t)) for t in ts])
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"weight {self.describe()} is not finite on (0, 1)")
        total = float(np.dot(ws, vals))
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DomainError(
                f"weight {self.describe()} integrates to {total:.12g}, not 1 "
                f"(tolerance {NORMALIZATION_TOL:g})"
            )
        if self.nonneg and np.any(vals < 0.0):
            raise DomainError(f"weight {self.describe()} declared nonneg but takes negative values")

    def __call__(self, t):
        return self.fn(t)

    def describe(self) -> str:
        if self.params:
            return f"{self.family}{self.params}"
        return self.family

    def second_moment(self) -> float:
        """integral_0^1 t^2 p(t) dt, by the same 64-node rule."""
        ts, ws = _gl64()
        vals = np.array([float(self.fn(t)) for t in ts])
        return float(np.dot(ws, ts * ts * vals))


def ball_weight(m: int) -> WeightFunction:
    """Density m * t^(m-1): the weighted mean is the solid-ball average in R^m."""
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise DomainError(f"ball weight needs integer dimension m >= 1, got {m!r}")
    m = int(m)
    return WeightFunction(
        fn=lambda t, _m=m: _m * t ** (_m - 1),
        family="ball",
        params=(m,),
        nonneg=True,
    )


def ellipsoid_slice_weight(k: int, l: int) -> WeightFunction:
    """Density c * (1-t^2)^l * t^(2k-1) with c = 2(k+l)! / (l! (k-1)!).

    Arises when a solid average over a round ellipsoid in C^(k+l) is
    reduced to spherical averages over the first k complex coordinates.
    """
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise DomainError(f"slice weight needs integer k >= 1, got {k!r}")
    if not (isinstance(l, (int, np.integer)) and l >= 0):
        raise DomainError(f"slice weight needs integer l >= 0, got {l!r}")
    k, l = int(k), int(l)
    c = 2.0 * math.factorial(k + l) / (math.factorial(l) * math.factorial(k - 1))
    return WeightFunction(
        fn=lambda t, _c=c, _l=l, _k=k: _c * (1.0 - t * t) ** _l * t ** (2 * _k - 1),
        family="slice",
        params=(k, l),
        nonneg=True,
    )


def laplace_constant(weight: WeightFunction, m: int) -> float:
    """Normalizer 2m / integral t^2 p for the weighted difference quotient.

    For the ball weight this is 2(m+2); for slice(k, l) on R^(2k) it is
    4(k+l+1).
    """
    if m < 1:
        raise DomainError(f"ambient dimension must be >= 1, got {m}")
    moment = weight.second_moment()
    if not moment > 1e-14:
        raise DomainError(
            f"weight {weight.describe()} has vanishing second moment; "
            "no second-order operator is associated to it"
        )
    return 2.0 * m / moment
