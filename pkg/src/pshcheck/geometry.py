"""Complex points, ellipsoids, unitary frames, and the ball <-> ellipsoid maps.

The basic domain is the axis-aligned complex ellipsoid

    E(r1,...,rn) = { sum_j |z_j|^2 / r_j^2 <= 1 },

translated to a center and rotated by a unitary frame T, i.e. the set
center + T(E).  All orientation lives in the frame; an Ellipsoid stores
radii only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, DomainError

UNITARY_TOL = 1e-12
DET_TOL = 1e-10


def cpoint(coords) -> np.ndarray:
    """Validate and return a point of C^n as a 1-D complex128 array."""
    z = np.asarray(coords, dtype=np.complex128)
    if z.ndim != 1 or z.size < 1:
        raise DomainError("a point must be a non-empty 1-D coordinate list")
    if not np.all(np.isfinite(z)):
        raise DomainError("point coordinates must be finite")
    z = z.copy()
    z.flags.writeable = False
    return z


def rpoint(coords) -> np.ndarray:
    """Validate and return a point of R^m as a 1-D float64 array."""
    x = np.asarray(coords, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise DomainError("a point must be a non-empty 1-D coordinate list")
    if not np.all(np.isfinite(x)):
        raise DomainError("point coordinates must be finite")
    x = x.copy()
    x.flags.writeable = False
    return x


@dataclass(frozen=True)
class Ellipsoid:
    """Radii (r1,...,rn) of an axis-aligned complex ellipsoid."""

    radii: tuple[float, ...]

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if len(radii) < 1:
            raise DomainError("ellipsoid needs at least one radius")
        if any(not math.isfinite(r) or r <= 0.0 for r in radii):
            raise DomainError(f"all radii must be positive and finite, got {radii}")
        object.__setattr__(self, "radii", radii)

    @property
    def dim(self) -> int:
        return len(self.radii)

    @staticmethod
    def round(R: float, r: float, n: int) -> "Ellipsoid":
        """E(R, r) = E(R, r, ..., r) with one long axis and n-1 equal ones."""
        if n < 1:
            raise DomainError("dimension must be >= 1")
        return Ellipsoid((R,) + (r,) * (n - 1))


@dataclass(frozen=True)
class UnitaryFrame:
    """An n x n unitary matrix orienting an ellipsoid."""

    matrix: np.ndarray
    label: str = field(default="", compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError("frame must be a square matrix")
        dev = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if dev > UNITARY_TOL:
            raise DomainError(f"matrix is not unitary: max |T T* - I| = {dev:.3e}")
        det_mod = abs(np.linalg.det(m))
        if abs(det_mod - 1.0) > DET_TOL:
            raise DomainError(f"|det T| = {det_mod!r} deviates from 1")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def identity(n: int) -> "UnitaryFrame":
        return UnitaryFrame(np.eye(n, dtype=np.complex128), label="identity")

    @staticmethod
    def swap(n: int, i: int, j: int) -> "UnitaryFrame":
        """Coordinate transposition i <-> j (1-based indices)."""
        if not (1 <= i <= n and 1 <= j <= n and i != j):
            raise DomainError(f"invalid swap indices ({i}, {j}) for dimension {n}")
        m = np.eye(n, dtype=np.complex128)
        m[[i - 1, j - 1]] = m[[j - 1, i - 1]]
        return UnitaryFrame(m, label=f"swap:{i},{j}")


def ellipsoid_volume(radii) -> float:
    """Volume of E(r1,...,rn): pi^n * r1^2 ... rn^2 / n!."""
    radii = tuple(float(r) for r in radii)
    if not radii:
        raise DomainError("need at least one radius")
    if any(not math.isfinite(r) or r <= 0.0 for r in radii):
        raise DomainError(f"all radii must be positive and finite, got {radii}")
    n = len(radii)
    prod = 1.0
    for r in radii:
        prod *= r * r
    return math.pi**n * prod / math.factorial(n)


def contains(e: Ellipsoid, frame: UnitaryFrame, center, z) -> bool:
    """True iff z lies in center + T(E), i.e. w = T*(z - center) is in E."""
    center = cpoint(center)
    z = cpoint(z)
    if not (e.dim == frame.dim == center.size == z.size):
        raise DimensionMismatchError(
            f"dimensions disagree: e={e.dim}, T={frame.dim}, "
            f"center={center.size}, z={z.size}"
        )
    w = frame.matrix.conj().T @ (z - center)
    radii = np.asarray(e.radii)
    return float(np.sum(np.abs(w) ** 2 / radii**2)) <= 1.0


def sample_haar_unitary(n: int, seed: int) -> UnitaryFrame:
    """Haar-distributed unitary via complex Ginibre + QR with phase fix.

    Orthonormalize a complex Gaussian matrix and absorb the phases of the
    triangular factor's diagonal, which makes the QR output Haar rather
    than merely unitary.  Deterministic given the seed.
    """
    if n < 1:
        raise DomainError("dimension must be >= 1")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(0x48AA,))
    rng = np.random.Generator(np.random.Philox(ss))
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitaryFrame(q, label=f"haar:{seed}")


def ball_to_ellipsoid(w, e: Ellipsoid, frame: UnitaryFrame, center) -> np.ndarray:
    """Affine map of the closed unit ball onto center + T(E).

    w -> center + T (r1 w1, ..., rn wn); the real Jacobian is the constant
    prod r_j^2, so uniform samples stay uniform.
    """
    w = cpoint(w)
    if not (e.dim == frame.dim == w.size):
        raise DimensionMismatchError("dimensions disagree")
    center = cpoint(center)
    if center.size != w.size:
        raise DimensionMismatchError("center dimension disagrees")
    norm2 = float(np.sum(np.abs(w) ** 2))
    if norm2 > 1.0 + 1e-12:
        raise DomainError(f"|w|^2 = {norm2!r} lies outside the closed unit ball")
    return center + frame.matrix @ (np.asarray(e.radii) * w)


def ellipsoid_to_ball(z, e: Ellipsoid, frame: UnitaryFrame, center) -> np.ndarray:
    """Inverse of ball_to_ellipsoid (no membership requirement on z)."""
    z = cpoint(z)
    center = cpoint(center)
    if not (e.dim == frame.dim == z.size == center.size):
        raise DimensionMismatchError("dimensions disagree")
    return (frame.matrix.conj().T @ (z - center)) / np.asarray(e.radii)


def map_ball_samples(
    w: np.ndarray, e: Ellipsoid, frame: UnitaryFrame, center: np.ndarray
) -> np.ndarray:
    """Vectorized ball_to_ellipsoid for an (N, n) array of ball points."""
    scaled = w * np.asarray(e.radii)[None, :]
    return scaled @ frame.matrix.T + center[None, :]
