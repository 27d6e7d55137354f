"""Finite-difference Levi form, Hermitian eigenvalues, and the
independent line-restriction subharmonicity check."""

import numpy as np
import pytest

from pshcheck.catalog import lookup
from pshcheck.errors import OracleUnavailableError
from pshcheck.oracle import (
    fd_laplacian,
    hermitian_eigenvalues,
    levi_form,
    line_subharmonic_check,
    min_levi_eigenvalue,
)
from pshcheck.vm import compile_expression


def test_levi_form_of_saddle_is_diag_plus_minus_one():
    u = lookup("remark-3.4").compile()
    lev = levi_form(u, np.zeros(2, complex))
    assert np.allclose(lev.matrix, np.diag([1.0, -1.0]), atol=1e-7)
    assert lev.hermitian_deviation < 1e-9


def test_levi_form_of_squared_norm_is_identity():
    u = lookup("ball-quadratic").compile()
    lev = levi_form(u, np.array([0.3 + 0.2j, -0.1j]))
    assert np.allclose(lev.matrix, np.eye(2), atol=1e-7)


def test_levi_form_off_diagonal():
    # u = |z1 + z2|^2 has Levi form all-ones (rank one, eigenvalues 2 and 0)
    u = compile_expression("abs(z1+z2)^2")
    lev = levi_form(u, np.array([0.1j, 0.2 + 0.1j]))
    assert np.allclose(lev.matrix, np.ones((2, 2)), atol=1e-6)
    assert min_levi_eigenvalue(lev) == pytest.approx(0.0, abs=1e-6)


def test_levi_form_richardson_convergence():
    # second-order central stencils: error drops ~4x when h halves
    u = lookup("exp-re").compile()
    z = np.array([0.21 + 0.1j, -0.05 + 0.3j])
    exact = np.exp(z[0].real) / 4.0  # d^2/dz1 dz1bar of exp(x1)
    errs = []
    for h in (0.02, 0.01, 0.005):
        lev = levi_form(u, z, h=h)
        errs.append(abs(lev.matrix[0, 0] - exact))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.3)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.3)


def test_levi_form_unavailable_on_minus_inf_stencil():
    u = lookup("log-modulus").compile()
    with pytest.raises(OracleUnavailableError):
        levi_form(u, np.array([0.0j, 0.5]))  # stencil straddles z1 = 0


def test_jacobi_matches_lapack_on_random_hermitian():
    rng = np.random.default_rng(44)
    for n in (2, 3, 4, 6):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (a + a.conj().T) / 2
        ours = hermitian_eigenvalues(h)
        ref = np.linalg.eigvalsh(h)
        assert np.allclose(np.sort(ours), ref, atol=1e-10)


def test_min_levi_eigenvalue_closed_forms():
    # n = 2 closed form against a hand-diagonalizable matrix
    h = np.array([[2.0, 1j], [-1j, 2.0]])
    assert min_levi_eigenvalue(h) == pytest.approx(1.0, abs=1e-12)
    assert min_levi_eigenvalue(np.array([[3.5]])) == 3.5


def test_fd_laplacian_closed_forms():
    u = lookup("radial-square").compile()
    assert fd_laplacian(u, np.zeros(4)) == pytest.approx(8.0, rel=1e-6)
    v = lookup("exp-x1").compile()
    assert fd_laplacian(v, np.array([0.3, 0, 0, 0])) == pytest.approx(
        np.exp(0.3), rel=1e-6
    )
    w = lookup("saddle-harmonic").compile()
    assert abs(fd_laplacian(w, np.array([0.2, -0.1, 0.4, 0.0]))) < 1e-7


def test_line_check_flags_saddle_along_bad_direction():
    u = lookup("remark-3.4").compile()
    v = line_subharmonic_check(
        u, np.zeros(2, complex), np.array([0.0, 1.0], complex), budget=40_000, seed=8
    )
    assert v.status == "violation"
    # restriction along e2 is -|w|^2: disc mean - center = -r^2 exactly
    w = v.witnesses[0]
    r = w.radii[0]
    assert w.margin == pytest.approx(-r * r, abs=5 * max(w.std_error, 1e-12))


def test_line_check_passes_psh_function():
    u = lookup("ball-quadratic").compile()
    for direction in (np.array([1.0, 0.0]), np.array([0.6, 0.8j])):
        v = line_subharmonic_check(
            u, np.array([0.1j, 0.05]), direction.astype(complex), budget=30_000, seed=9
        )
        assert v.status == "consistent"


def test_line_check_skips_minus_inf_center():
    u = lookup("log-modulus").compile()
    v = line_subharmonic_check(
        u, np.array([0.0j, 0.3]), np.array([1.0, 0.0], complex), budget=10_000, seed=1
    )
    assert v.status == "consistent"
    assert v.point_status == ("skipped-minus-inf",)


def test_line_check_agrees_with_levi_over_random_lines():
    # the saddle restricted to the line through 0 with direction d is
    # (|d1|^2 - |d2|^2) |w|^2: subharmonic iff the Levi quadratic form
    # is >= 0 at d.  50 random directions, both tools must agree.
    u = lookup("remark-3.4").compile()
    rng = np.random.default_rng(55)
    z0 = np.zeros(2, complex)
    disagreements = 0
    for _ in range(50):
        d = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        d /= np.linalg.norm(d)
        quad = abs(d[0]) ** 2 - abs(d[1]) ** 2
        if abs(quad) < 0.05:
            continue  # too close to the degenerate cone for a noisy test
        v = line_subharmonic_check(u, z0, d, budget=60_000, seed=101)
        expected = "consistent" if quad > 0 else "violation"
        if v.status != expected:
            disagreements += 1
    assert disagreements == 0
