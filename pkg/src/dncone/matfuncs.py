"""Matrix function evaluation: spectral f(A), entrywise f[A], Newton
interpolants with their summand products, resolvent products, and fractional
powers by quadrature.

Spectral evaluation clamps eigenvalues in [-psd_tol, 0) to zero before
applying f: the cone's boundary matters and eigenvalues that small are
numerical noise, not signal.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .cone import DEFAULT_PSD_TOL
from .divdiff import divided_differences
from .errors import DomainError, OrderUnsupported, QuadratureStall, SingularShift
from .funcs import PurePower
from .spectral import eig_sym, symmetrize

_GL_NODES, _GL_WEIGHTS = leggauss(15)


def _clamped_eigenvalues(d, psd_tol):
    lam = d.eigenvalues
    if lam[0] < -psd_tol:
        raise DomainError(
            f"matrix has eigenvalue {float(lam[0]):.3e} below -psd_tol={-psd_tol:.1e}"
        )
    return np.maximum(lam, 0.0)


def spectral_apply(a, f, psd_tol=DEFAULT_PSD_TOL, decomp=None):
    """f(A) = U f(diag lambda) U^T through the spectral decomposition."""
    a = symmetrize(a)
    d = eig_sym(a) if decomp is None else decomp
    lam = _clamped_eigenvalues(d, psd_tol)
    fvals = np.asarray(f.value(lam), dtype=np.float64)
    if not np.all(np.isfinite(fvals)):
        raise DomainError(f"{f.describe()} is undefined at a (clamped) eigenvalue")
    return d.apply(fvals)


def hadamard_apply(a, f):
    """Entrywise application f[A] = (f(a_ij))."""
    a = symmetrize(a)
    if np.min(a) < 0:
        raise DomainError(
            f"entry {float(np.min(a)):.3e} lies outside the domain [0, inf) of {f.describe()}"
        )
    out = np.asarray(f.value(a), dtype=np.float64)
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{f.describe()} is undefined at some entry")
    return symmetrize(out)


def newton_matrix_polynomial(a, f, psd_tol=DEFAULT_PSD_TOL, decomp=None):
    """Newton interpolant of f at the spectrum, evaluated at A.

    Returns (p(A), [P_1, ..., P_{n-1}]) where p interpolates f at the
    ascending eigenvalues and P_k = (A - lam_1 I) ... (A - lam_k I) are the
    summand products of the Newton form.  p(A) reproduces f(A) because the
    interpolation nodes are exactly the spectrum; coincident eigenvalues
    fall back to derivative-based (confluent) divided differences.
    """
    a = symmetrize(a)
    d = eig_sym(a) if decomp is None else decomp
    lam = _clamped_eigenvalues(d, psd_tol)
    table = divided_differences(f, lam)
    coeffs = table.coefficients()

    n = a.shape[0]
    eye = np.eye(n)
    products = []
    p = coeffs[0] * eye
    pk = eye
    for k in range(1, n):
        pk = pk @ (a - lam[k - 1] * eye)
        pk = (pk + pk.T) / 2.0
        products.append(pk)
        p = p + coeffs[k] * pk
    return (p + p.T) / 2.0, products


def resolvent_product(a, p, u, psd_tol=DEFAULT_PSD_TOL, decomp=None):
    """A^p (A + u I)^{-1} for integer p >= 0 and shift u > 0, in the eigenbasis."""
    if p < 0 or int(p) != p:
        raise DomainError(f"power p must be a nonnegative integer, got {p}")
    if not u > 0:
        raise DomainError(f"shift u must be positive, got {u}")
    a = symmetrize(a)
    d = eig_sym(a) if decomp is None else decomp
    lam = _clamped_eigenvalues(d, psd_tol)
    shifted = lam + u
    if np.min(shifted) <= 0:
        raise SingularShift(f"shift u={u} does not clear the spectrum")
    return d.apply(lam ** int(p) / shifted)


def explicit_offdiag_entry(a, u):
    """Closed-form (1,2) entry of A^{n-1} (A + u I)^{-1} for n in {2, 3}.

    Uses determinants and principal cofactors only, so it is an independent
    cross-check of the eigenbasis route.
    """
    a = symmetrize(a)
    if not u > 0:
        raise DomainError(f"shift u must be positive, got {u}")
    n = a.shape[0]
    if n == 2:
        det_shift = (a[0, 0] + u) * (a[1, 1] + u) - a[0, 1] ** 2
        return float(a[0, 1] * u / det_shift)
    if n == 3:
        a11, a12, a13 = a[0, 0], a[0, 1], a[0, 2]
        a22, a23, a33 = a[1, 1], a[1, 2], a[2, 2]
        det_a = (
            a11 * (a22 * a33 - a23**2)
            - a12 * (a12 * a33 - a23 * a13)
            + a13 * (a12 * a23 - a22 * a13)
        )
        c11 = a22 * a33 - a23**2
        c22 = a11 * a33 - a13**2
        c33 = a11 * a22 - a12**2
        shifted = a + u * np.eye(3)
        det_shift = (
            shifted[0, 0] * (shifted[1, 1] * shifted[2, 2] - shifted[1, 2] ** 2)
            - shifted[0, 1] * (shifted[0, 1] * shifted[2, 2] - shifted[1, 2] * shifted[0, 2])
            + shifted[0, 2] * (shifted[0, 1] * shifted[1, 2] - shifted[1, 1] * shifted[0, 2])
        )
        numer = a12 * det_a + a12 * u * (c11 + c22 + c33) + u**2 * (a12 * a11 + a12 * a22 + a13 * a23)
        return float(numer / det_shift)
    raise OrderUnsupported(f"closed form exists for n in {{2, 3}}, got n={n}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Fractional exponent q with its integer bracket k < q < k+1."""

    q: float
    k: int
    segments: int = 4
    rel_tol: float = 1e-8

    def __post_init__(self):
        if not (self.k >= 0 and self.k < self.q < self.k + 1):
            raise DomainError(f"need integer k >= 0 with k < q < k+1, got q={self.q}, k={self.k}")
        if self.segments < 1:
            raise DomainError("segments must be >= 1")
        if not 0 < self.rel_tol < 1:
            raise DomainError("rel_tol must be in (0, 1)")

    @staticmethod
    def for_exponent(q, segments=4, rel_tol=1e-8):
        k = math.floor(q)
        return QuadratureSpec(q=float(q), k=int(k), segments=segments, rel_tol=rel_tol)


def _gl_panel(fn, a, b):
    mid = (a + b) / 2.0
    half = (b - a) / 2.0
    total = None
    for xi, wi in zip(_GL_NODES, _GL_WEIGHTS):
        v = fn(mid + half * xi)
        total = wi * v if total is None else total + wi * v
    return half * total


def _adaptive_unit_integral(fn, segments, abs_tol, max_panels, norm):
    """Adaptive 15-point Gauss-Legendre on [0, 1] by panel bisection.

    Panels split until the two-level estimate agrees within a share of
    ``abs_tol`` proportional to panel width; accepted contributions are
    summed in left-to-right order for a deterministic floating-point result.
    """
    work = [(i / segments, (i + 1) / segments) for i in range(segments)]
    coarse = {iv: _gl_panel(fn, *iv) for iv in work}
    panels = segments
    accepted = []
    while work:
        lo, hi = work.pop()
        whole = coarse.pop((lo, hi))
        mid = (lo + hi) / 2.0
        left = _gl_panel(fn, lo, mid)
        right = _gl_panel(fn, mid, hi)
        panels += 2
        if panels > max_panels:
            raise QuadratureStall(
                f"panel budget {max_panels} exceeded before reaching tolerance"
            )
        if norm(whole - (left + right)) <= abs_tol * (hi - lo):
            accepted.append((lo, left))
            accepted.append((mid, right))
        else:
            work.append((mid, hi))
            coarse[(mid, hi)] = right
            work.append((lo, mid))
            coarse[(lo, mid)] = left
    accepted.sort(key=lambda t: t[0])
    total = None
    for _, v in accepted:
        total = v if total is None else total + v
    return total, panels


def _integral_pieces(weight_fn, resolvent_fn, spec, norm, max_panels):
    """sin((q-k)pi)/pi * int_0^inf t^(q-k-1) W(t) dt with both endpoint
    difficulties removed by substitution.

    Head [0,1]: t = s^(1/(q-k)) flattens the t^(q-k-1) singularity.
    Tail [1,inf): t = 1/tau brings the tail to (0,1] but leaves a
    tau^(-(q-k)) factor, so tau = w^(1/(k+1-q)) removes that as well.
    ``resolvent_fn(t)`` must return W(t) = A^{k+1} (A + t I)^{-1} and
    ``weight_fn`` its tail twin V(tau) = A^{k+1} (I + tau A)^{-1}.
    """
    gamma = spec.q - spec.k
    gamma2 = spec.k + 1 - spec.q
    prefactor = math.sin(gamma * math.pi) / math.pi

    def head(s):
        return resolvent_fn(s ** (1.0 / gamma)) / gamma

    def tail(w):
        return weight_fn(w ** (1.0 / gamma2)) / gamma2

    coarse = norm(_gl_panel(head, 0.0, 1.0)) + norm(_gl_panel(tail, 0.0, 1.0))
    abs_tol = 0.25 * spec.rel_tol * max(coarse, 1e-300)
    h, n1 = _adaptive_unit_integral(head, spec.segments, abs_tol, max_panels, norm)
    t, n2 = _adaptive_unit_integral(tail, spec.segments, abs_tol, max_panels, norm)
    return prefactor * (h + t), n1 + n2


def quadrature_power_scalar(x, spec, max_panels=4096):
    """x^q by the integral representation; sanity path for the matrix route."""
    if not x > 0:
        raise DomainError("scalar quadrature needs x > 0")
    xk1 = x ** (spec.k + 1)
    value, _ = _integral_pieces(
        weight_fn=lambda tau: xk1 / (1.0 + x * tau),
        resolvent_fn=lambda t: xk1 / (x + t),
        spec=spec,
        norm=abs,
        max_panels=max_panels,
    )
    return float(value)


def quadrature_power(a, spec, solve_mode="eigen", psd_tol=DEFAULT_PSD_TOL, max_panels=4096):
    """A^q for fractional q via the weighted resolvent integral.

    ``solve_mode="eigen"`` reuses one eigendecomposition for every shifted
    inverse, making this a consistency check of the integral identity;
    ``solve_mode="lu"`` computes A^{k+1} by repeated multiplication and each
    (A + t I)^{-1} by a dense LU solve, giving a route independent of the
    eigensolver.
    """
    a = symmetrize(a)
    n = a.shape[0]
    if solve_mode not in ("eigen", "lu"):
        raise DomainError(f"solve_mode must be 'eigen' or 'lu', got {solve_mode!r}")

    if solve_mode == "eigen":
        d = eig_sym(a)
        lam = _clamped_eigenvalues(d, psd_tol)
        lam_k1 = lam ** (spec.k + 1)

        def resolvent_fn(t):
            return lam_k1 / (lam + t)

        def weight_fn(tau):
            return lam_k1 / (1.0 + tau * lam)

        def vec_norm(v):
            return float(np.max(np.abs(v)))

        diag, _ = _integral_pieces(weight_fn, resolvent_fn, spec, vec_norm, max_panels)
        return d.apply(diag)

    # lu mode: no spectral information anywhere on this path
    lam_probe = eig_sym(a).eigenvalues
    if lam_probe[0] < -psd_tol:
        raise DomainError(
            f"matrix has eigenvalue {float(lam_probe[0]):.3e} below -psd_tol={-psd_tol:.1e}"
        )
    eye = np.eye(n)
    a_pow = eye
    for _ in range(spec.k + 1):
        a_pow = a_pow @ a

    def resolvent_fn(t):
        return np.linalg.solve(a + t * eye, a_pow)

    def weight_fn(tau):
        return np.linalg.solve(eye + tau * a, a_pow)

    def mat_norm(m):
        return float(np.max(np.abs(m)))

    out, _ = _integral_pieces(weight_fn, resolvent_fn, spec, mat_norm, max_panels)
    return symmetrize(out)


def power_apply(a, alpha, psd_tol=DEFAULT_PSD_TOL, decomp=None):
    """Convenience wrapper: spectral A^alpha."""
    return spectral_apply(a, PurePower(alpha), psd_tol=psd_tol, decomp=decomp)
