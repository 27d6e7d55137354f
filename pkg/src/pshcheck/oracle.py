"""Independent ground truth for smooth functions.

The complex Hessian (Levi form) is assembled from real central second
differences; for a C^2 function, positive semidefiniteness of this
matrix at every point is equivalent to plurisubharmonicity, which makes
it a cross-check for the Monte Carlo mean-value criteria that never
shares code or samples with them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .criteria import (
    POINT_CONSISTENT,
    POINT_SKIPPED,
    POINT_VIOLATION,
    Verdict,
    Witness,
    _aggregate,
    _escalating,
    _new_counts,
)
from .errors import DimensionMismatchError, DomainError, OracleUnavailableError
from .mc import DEFAULT_BUDGET, mc_mean
from .operators import center_value

DEFAULT_STEP_SCALE = 1e-4
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 40


@dataclass(frozen=True)
class LeviForm:
    """Complex Hessian (d^2 u / dz_j dz.bar_k) at a point.

    matrix is Hermitian-symmetrized; hermitian_deviation records the
    max absolute asymmetry before symmetrization (assembly rounding
    only, since the difference stencils are symmetric by construction).
    """

    matrix: np.ndarray
    step: float
    hermitian_deviation: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _default_step(point) -> float:
    return DEFAULT_STEP_SCALE * (1.0 + float(np.linalg.norm(point)))


def _eval_batch(u, pts: np.ndarray) -> np.ndarray:
    vals = np.asarray(u(pts), dtype=np.float64)
    if np.isneginf(vals).any():
        raise OracleUnavailableError(
            "function is -inf inside the difference stencil; "
            "the finite-difference oracle needs a C^2 neighborhood"
        )
    return vals


def levi_form(u, z, h: float | None = None) -> LeviForm:
    """Central-difference Levi form at z (complex, shape (n,)).

    Diagonal entries are the per-coordinate 2-D real Laplacian / 4;
    off-diagonal entries combine the four mixed real partials through
    the Wirtinger polarization.
    """
    z = np.asarray(z, dtype=np.complex128)
    if z.ndim != 1:
        raise DimensionMismatchError("levi_form expects a 1-D complex point")
    n = z.shape[0]
    if h is None:
        h = _default_step(z)
    if not (h > 0 and np.isfinite(h)):
        raise DomainError(f"step must be positive finite, got {h}")

    # real coordinate directions as complex displacement vectors
    def direction(j: int, imag: bool) -> np.ndarray:
        d = np.zeros(n, dtype=np.complex128)
        d[j] = 1j if imag else 1.0
        return d

    pts = [z]
    index = {}
    for j in range(n):
        for imag in (False, True):
            d = direction(j, imag)
            index[(j, imag, +1)] = len(pts)
            pts.append(z + h * d)
            index[(j, imag, -1)] = len(pts)
            pts.append(z - h * d)
    pair_index = {}
    for j in range(n):
        for k in range(j + 1, n):
            for a_im in (False, True):
                for b_im in (False, True):
                    da = direction(j, a_im)
                    db = direction(k, b_im)
                    for sa in (+1, -1):
                        for sb in (+1, -1):
                            pair_index[(j, k, a_im, b_im, sa, sb)] = len(pts)
                            pts.append(z + sa * h * da + sb * h * db)
    vals = _eval_batch(u, np.asarray(pts))
    u0 = vals[0]
    h2 = h * h

    def second(j: int, imag: bool) -> float:
        return (
            vals[index[(j, imag, +1)]] - 2.0 * u0 + vals[index[(j, imag, -1)]]
        ) / h2

    def mixed(j: int, k: int, a_im: bool, b_im: bool) -> float:
        return (
            vals[pair_index[(j, k, a_im, b_im, +1, +1)]]
            - vals[pair_index[(j, k, a_im, b_im, +1, -1)]]
            - vals[pair_index[(j, k, a_im, b_im, -1, +1)]]
            + vals[pair_index[(j, k, a_im, b_im, -1, -1)]]
        ) / (4.0 * h2)

    levi = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        levi[j, j] = (second(j, False) + second(j, True)) / 4.0
    for j in range(n):
        for k in range(j + 1, n):
            dxx = mixed(j, k, False, False)
            dyy = mixed(j, k, True, True)
            dxy = mixed(j, k, False, True)
            dyx = mixed(j, k, True, False)
            levi[j, k] = ((dxx + dyy) + 1j * (dxy - dyx)) / 4.0
            levi[k, j] = np.conj(levi[j, k])
    deviation = float(np.max(np.abs(levi - levi.conj().T))) if n > 1 else 0.0
    matrix = (levi + levi.conj().T) / 2.0
    matrix.flags.writeable = False
    return LeviForm(matrix=matrix, step=float(h), hermitian_deviation=deviation)


def hermitian_eigenvalues(
    h, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.

    Each rotation zeroes one off-diagonal entry after factoring out its
    phase; sweeps repeat until the largest off-diagonal magnitude falls
    below tol * scale.
    """
    a = np.array(h, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"need a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])
    scale = max(float(np.max(np.abs(a))), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        upper = np.triu(np.abs(a), k=1)
        if float(upper.max()) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= tol * scale * 1e-2:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n, dtype=np.complex128)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                a = rot.conj().T @ a @ rot
    return np.sort(np.diag(a).real)


def min_levi_eigenvalue(levi) -> float:
    """Smallest eigenvalue; closed form for n <= 2, Jacobi otherwise."""
    mat = levi.matrix if isinstance(levi, LeviForm) else np.asarray(levi)
    n = mat.shape[0]
    if n == 1:
        return float(mat[0, 0].real)
    if n == 2:
        a = mat[0, 0].real
        c = mat[1, 1].real
        b = mat[0, 1]
        disc = np.hypot(a - c, 2.0 * abs(b))
        return float(((a + c) - disc) / 2.0)
    return float(hermitian_eigenvalues(mat)[0])


def fd_laplacian(u, x, h: float | None = None) -> float:
    """Central-difference Laplacian of a real-domain function at x."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatchError("fd_laplacian expects a 1-D real point")
    m = x.shape[0]
    if h is None:
        h = _default_step(x)
    if not (h > 0 and np.isfinite(h)):
        raise DomainError(f"step must be positive finite, got {h}")
    pts = [x]
    for j in range(m):
        d = np.zeros(m)
        d[j] = h
        pts.append(x + d)
        pts.append(x - d)
    vals = _eval_batch(u, np.asarray(pts))
    u0 = vals[0]
    total = 0.0
    for j in range(m):
        total += vals[1 + 2 * j] + vals[2 + 2 * j] - 2.0 * u0
    return float(total / (h * h))


def line_subharmonic_check(
    u,
    z0,
    direction,
    disc_radii=(0.3, 0.2, 0.1),
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    key: tuple[int, ...] = (),
    workers: int = 1,
) -> Verdict:
    """Sub-mean test for u restricted to the complex line z0 + lambda*direction.

    Circle means over |lambda| = r must dominate u(z0) for every tested
    radius.  A center at -inf passes vacuously and is recorded as
    skipped.
    """
    z0 = np.asarray(z0, dtype=np.complex128)
    direction = np.asarray(direction, dtype=np.complex128)
    if direction.shape != z0.shape:
        raise DimensionMismatchError("direction and z0 must have the same shape")
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        raise DomainError("direction must be nonzero")
    d = direction / norm
    counts = _new_counts()
    counts["points"] = 1
    u0 = center_value(u, z0, allow_minus_inf=True)
    if u0 == float("-inf"):
        counts["skipped_minus_inf"] = 1
        return Verdict(
            "consistent", (), counts, (POINT_SKIPPED,)
        )
    witnesses = []
    worst = POINT_CONSISTENT
    for ir, r in enumerate(disc_radii):
        if not r > 0:
            raise DomainError(f"disc radius must be positive, got {r}")
        counts["configs"] += 1

        def run(factor, attempt, _r=r, _ir=ir):
            def sample(rng, size):
                theta = rng.random(size) * (2.0 * np.pi)
                lam = _r * np.exp(1j * theta)
                return z0[None, :] + lam[:, None] * d[None, :]

            est = mc_mean(
                sample, u, budget * factor, seed, key + (_ir, attempt), workers
            )
            if est.value == float("-inf"):
                return float("nan"), 0.0, est
            return est.value - u0, est.std_error, est

        margin, se, est, escalated = _escalating(run, counts)
        if margin != margin:
            counts["inconclusive"] += 1
            continue
        if margin < -3.0 * se:
            counts["violations"] += 1
            worst = POINT_VIOLATION
            witnesses.append(
                Witness(
                    point=tuple(z0.tolist()),
                    frame="line",
                    radii=(r,),
                    margin=margin,
                    std_error=se,
                    seed=seed,
                    budget=budget * (10 if escalated else 1),
                    key=key + (ir, 1 if escalated else 0),
                    escalated=escalated,
                    detail=(("direction", tuple(d.tolist())),),
                )
            )
    status = _aggregate((worst,), counts, require_tested=False)
    return Verdict(status, tuple(witnesses), counts, (worst,))
