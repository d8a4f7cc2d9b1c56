"""Dense symmetric eigendecomposition and shifted solves.

Matrices are plain float64 ndarrays that have passed through
:func:`symmetrize`, which enforces the storage invariants (bit-exact
symmetry, finite entries, order between 2 and 64).  The eigensolver is a
row-cyclic Jacobi iteration: deterministic sweep order, no pivot searches,
accurate for the small dense matrices this package works with.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_cyclic
from .errors import DomainError, NonConvergence, SingularShift, SymmetryError

MAX_ORDER = 64

DEFAULT_ORTHO_TOL = 1e-12
DEFAULT_RECON_TOL_FACTOR = 1e-10
DEFAULT_SWEEP_TOL_FACTOR = 1e-14
DEFAULT_MAX_SWEEPS = 64


def symmetrize(a, asym_tol=None):
    """Validate a square matrix and return its bit-exactly symmetric part.

    The returned array is (a + a.T)/2, which is exactly symmetric in
    floating point.  If ``asym_tol`` is given, inputs whose asymmetry
    exceeds ``asym_tol * max(1, |a|_max)`` raise :class:`SymmetryError`
    instead of being silently averaged.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n < 2 or n > MAX_ORDER:
        raise DomainError(f"matrix order must be in [2, {MAX_ORDER}], got {n}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    if asym_tol is not None:
        scale = max(1.0, float(np.max(np.abs(a))))
        gap = float(np.max(np.abs(a - a.T)))
        if gap > asym_tol * scale:
            raise SymmetryError(
                f"asymmetry {gap:.3e} exceeds tolerance {asym_tol:.1e} * {scale:.3e}"
            )
    return (a + a.T) / 2.0


@dataclass(frozen=True)
class SpectralDecomp:
    """Orthogonal eigenvector matrix plus ascending eigenvalues."""

    u: np.ndarray
    eigenvalues: np.ndarray

    @property
    def n(self):
        return self.eigenvalues.shape[0]

    def apply(self, fvals):
        """U diag(fvals) U^T, symmetrized."""
        fvals = np.asarray(fvals, dtype=np.float64)
        m = (self.u * fvals) @ self.u.T
        return (m + m.T) / 2.0

    def reconstruct(self):
        return self.apply(self.eigenvalues)


def eig_sym(
    a,
    ortho_tol=DEFAULT_ORTHO_TOL,
    recon_tol_factor=DEFAULT_RECON_TOL_FACTOR,
    sweep_tol_factor=DEFAULT_SWEEP_TOL_FACTOR,
    max_sweeps=DEFAULT_MAX_SWEEPS,
):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Eigenvalues come back sorted ascending (stable sort, so degenerate
    clusters keep sweep order).  Raises :class:`NonConvergence` if the
    off-diagonal norm fails to drop below ``sweep_tol_factor * |a|_F``
    within ``max_sweeps`` sweeps, or if the result misses the orthogonality
    or reconstruction tolerances.
    """
    a = symmetrize(a)
    n = a.shape[0]
    work = a.copy()
    u = np.eye(n)
    fro = float(np.linalg.norm(a))
    if fro > 0.0:
        sweeps = jacobi_cyclic(work, u, sweep_tol_factor * fro, max_sweeps)
        if sweeps < 0:
            raise NonConvergence(
                f"jacobi sweep budget {max_sweeps} exhausted (n={n}, |A|_F={fro:.3e})"
            )
    lam = np.diag(work).copy()
    order = np.argsort(lam, kind="stable")
    d = SpectralDecomp(u=np.ascontiguousarray(u[:, order]), eigenvalues=lam[order])

    ortho_gap = float(np.max(np.abs(d.u.T @ d.u - np.eye(n))))
    if ortho_gap > ortho_tol:
        raise NonConvergence(f"orthogonality residual {ortho_gap:.3e} > {ortho_tol:.1e}")
    recon_tol = recon_tol_factor * max(1.0, float(np.max(np.abs(a))))
    recon_gap = float(np.max(np.abs(d.reconstruct() - a)))
    if recon_gap > recon_tol:
        raise NonConvergence(f"reconstruction residual {recon_gap:.3e} > {recon_tol:.1e}")
    return d


def shifted_apply_inverse(d, t, b):
    """(A + t*I)^{-1} @ B through the eigenbasis of A.

    Requires every shifted eigenvalue to be positive.
    """
    shifted = d.eigenvalues + t
    if np.min(shifted) <= 0.0:
        raise SingularShift(
            f"shift t={t} gives nonpositive eigenvalue {float(np.min(shifted)):.3e}"
        )
    b = symmetrize(b)
    if b.shape[0] != d.n:
        raise DomainError("operand order does not match decomposition")
    return (d.u * (1.0 / shifted)) @ (d.u.T @ b)
