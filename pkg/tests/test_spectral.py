import numpy as np
import pytest

from dncone import (
    DomainError,
    NonConvergence,
    SingularShift,
    SymmetryError,
    eig_sym,
    shifted_apply_inverse,
    symmetrize,
)
from dncone.rng import SplitMix64


def test_diagonal_matrix_is_its_own_decomposition():
    d = eig_sym(np.diag([4.0, 9.0]))
    assert np.allclose(d.eigenvalues, [4.0, 9.0], atol=0)
    assert np.allclose(np.abs(d.u), np.eye(2), atol=0)


def test_two_by_two_closed_form():
    # (a + c +- sqrt((a-c)^2 + 4 b^2)) / 2
    a, b, c = 2.0, 1.0, 2.0
    d = eig_sym(np.array([[a, b], [b, c]]))
    disc = np.sqrt((a - c) ** 2 + 4 * b * b)
    assert np.allclose(d.eigenvalues, [(a + c - disc) / 2, (a + c + disc) / 2], atol=1e-14)


def test_reconstruction_corpus():
    # 1000 random symmetric matrices, n <= 8, entries in [-10, 10]
    rng = SplitMix64(20240901)
    worst_recon = worst_ortho = 0.0
    for i in range(1000):
        n = 2 + i % 7
        m = 20.0 * rng.uniforms(n, n) - 10.0
        a = (m + m.T) / 2.0
        d = eig_sym(a)
        worst_recon = max(worst_recon, float(np.max(np.abs(d.reconstruct() - a))))
        worst_ortho = max(worst_ortho, float(np.max(np.abs(d.u.T @ d.u - np.eye(n)))))
    assert worst_recon <= 1e-9
    assert worst_ortho <= 1e-12


def test_trace_and_determinant_match():
    rng = SplitMix64(7)
    for i in range(200):
        n = 2 + i % 6
        m = 6.0 * rng.uniforms(n, n) - 3.0
        a = (m + m.T) / 2.0
        d = eig_sym(a)
        tr = float(np.trace(a))
        assert abs(float(np.sum(d.eigenvalues)) - tr) <= 1e-10 * max(1.0, abs(tr))
        det = float(np.linalg.det(a))
        assert abs(float(np.prod(d.eigenvalues)) - det) <= 1e-8 * max(1.0, abs(det))


def test_permutation_equivariant_eigenvalues():
    rng = SplitMix64(11)
    for i in range(50):
        n = 2 + i % 5
        m = rng.normals(n, n)
        a = (m + m.T) / 2.0
        p = np.eye(n)[rng.permutation(n)]
        lam1 = eig_sym(a).eigenvalues
        lam2 = eig_sym(p @ a @ p.T).eigenvalues
        assert np.max(np.abs(lam1 - lam2)) <= 1e-10


def test_eigenvalues_sorted_and_deterministic():
    m = SplitMix64(3).normals(6, 6)
    a = (m + m.T) / 2.0
    d1 = eig_sym(a)
    d2 = eig_sym(a)
    assert np.all(np.diff(d1.eigenvalues) >= 0)
    assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
    assert np.array_equal(d1.u, d2.u)


def test_nonconvergence_with_zero_sweep_budget():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    with pytest.raises(NonConvergence):
        eig_sym(a, max_sweeps=0)


def test_symmetrize_rejects_bad_inputs():
    with pytest.raises(DomainError):
        symmetrize(np.zeros((3, 2)))
    with pytest.raises(DomainError):
        symmetrize(np.zeros((1, 1)))
    with pytest.raises(DomainError):
        symmetrize(np.zeros((65, 65)))
    with pytest.raises(DomainError):
        symmetrize(np.array([[1.0, np.nan], [np.nan, 1.0]]))
    with pytest.raises(SymmetryError):
        symmetrize(np.array([[1.0, 2.0], [1.0, 1.0]]), asym_tol=1e-12)
    # mild asymmetry averages away when no strict tolerance is requested
    s = symmetrize(np.array([[1.0, 2.0], [1.0, 1.0]]))
    assert s[0, 1] == s[1, 0] == 1.5


def test_shifted_apply_inverse_diagonal():
    d = eig_sym(np.diag([1.0, 4.0]))
    out = shifted_apply_inverse(d, 1.0, np.eye(2))
    assert np.allclose(out, np.diag([0.5, 0.2]), atol=1e-14)


def test_shifted_apply_inverse_rank_one():
    a = np.ones((2, 2))
    d = eig_sym(a)
    out = shifted_apply_inverse(d, 1.0, a)
    assert np.allclose(out, a / 3.0, atol=1e-14)


def test_shifted_apply_inverse_zero_operand():
    d = eig_sym(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.array_equal(shifted_apply_inverse(d, 1.0, np.zeros((2, 2))), np.zeros((2, 2)))


def test_shifted_apply_inverse_singular_shift():
    d = eig_sym(np.diag([-2.0, 1.0]))
    with pytest.raises(SingularShift):
        shifted_apply_inverse(d, 1.0, np.eye(2))
