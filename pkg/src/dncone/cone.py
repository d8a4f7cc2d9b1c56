"""Membership tests, samplers, and projections for the doubly nonnegative cone.

A matrix is doubly nonnegative (DN) when it is positive semidefinite and
entrywise nonnegative.  Membership is decided with additive tolerances on
the minimum eigenvalue and minimum entry: the cone has a meaningful
boundary (singular matrices, zero entries), so relative tests would be the
wrong tool.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ProjectionStall, SamplerStall
from .rng import SplitMix64
from .spectral import eig_sym, symmetrize

STRATEGIES = ("gram_nonneg", "wishart_reject", "dykstra_project")

DEFAULT_PSD_TOL = 1e-10
DEFAULT_ENTRY_TOL = 1e-10

_WISHART_BATCH = 64
_WISHART_MAX_DRAWS = 1 << 21


@dataclass(frozen=True)
class DnVerdict:
    """Certificate for a DN membership decision."""

    is_dn: bool
    min_eigenvalue: float
    min_entry: float
    psd_tol: float
    entry_tol: float


def check_dn(a, psd_tol=DEFAULT_PSD_TOL, entry_tol=DEFAULT_ENTRY_TOL, decomp=None):
    """Decide DN membership of a symmetric matrix.

    ``decomp`` may pass a precomputed :class:`SpectralDecomp` of ``a`` to
    avoid a second eigensolve.
    """
    a = symmetrize(a)
    d = eig_sym(a) if decomp is None else decomp
    min_eig = float(d.eigenvalues[0])
    min_entry = float(np.min(a))
    return DnVerdict(
        is_dn=bool(min_eig >= -psd_tol and min_entry >= -entry_tol),
        min_eigenvalue=min_eig,
        min_entry=min_entry,
        psd_tol=float(psd_tol),
        entry_tol=float(entry_tol),
    )


@dataclass(frozen=True)
class DnSamplerConfig:
    """Sampling strategy plus the seed that makes draws replayable."""

    n: int
    strategy: str
    seed: int
    scale: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"sampler order must be >= 2, got {self.n}")
        if self.strategy not in STRATEGIES:
            raise DomainError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if not self.scale > 0:
            raise DomainError("scale must be positive")


def _strategy_key(strategy):
    return STRATEGIES.index(strategy)


def sample_dn(cfg, draw_index=0):
    """One DN matrix, deterministic per (cfg, draw_index).

    gram_nonneg and wishart_reject are DN by construction; dykstra_project
    starts from a seeded symmetric Gaussian and alternates projections, so
    it reaches boundary matrices (zero entries, zero eigenvalues) the other
    two strategies rarely produce.
    """
    rng = SplitMix64.derive(cfg.seed, _strategy_key(cfg.strategy), cfg.n, draw_index)
    n = cfg.n
    if cfg.strategy == "gram_nonneg":
        b = cfg.scale * rng.uniforms(n, n)
        return b @ b.T
    if cfg.strategy == "wishart_reject":
        drawn = 0
        while drawn < _WISHART_MAX_DRAWS:
            g = cfg.scale * rng.normals(_WISHART_BATCH, n, n)
            w = g @ np.swapaxes(g, 1, 2)
            ok = np.flatnonzero(w.reshape(_WISHART_BATCH, -1).min(axis=1) >= 0.0)
            drawn += _WISHART_BATCH
            if ok.size:
                return np.ascontiguousarray(w[ok[0]])
        raise SamplerStall(
            f"wishart_reject: no entrywise-nonnegative draw in {_WISHART_MAX_DRAWS} tries (n={n})"
        )
    # dykstra_project: a stalled projection (rare, nearly tangent geometry) is
    # retried from a fresh deterministic start rather than surfaced
    for _ in range(8):
        start = rng.normals(n, n)
        start = cfg.scale * (start + start.T) / 2.0
        try:
            return project_dn(start)
        except ProjectionStall:
            continue
    raise ProjectionStall(
        f"dykstra_project sampler: 8 consecutive starts failed to certify (n={n})"
    )


def project_dn(a, tol=1e-10, max_iters=10000, psd_tol=DEFAULT_PSD_TOL):
    """Dykstra's alternating projection onto {PSD} and {entrywise >= 0}.

    Stops once successive iterates differ by less than ``tol`` in max norm
    *and* the iterate certifies as DN; the successive-difference test alone
    can stall at visibly infeasible points, so certification gates the
    return.  Points already in the cone are returned unchanged.
    """
    a = symmetrize(a)
    d0 = eig_sym(a)
    if d0.eigenvalues[0] >= 0.0 and np.min(a) >= 0.0:
        return a

    x = a.copy()
    p = np.zeros_like(a)
    q = np.zeros_like(a)
    for _ in range(max_iters):
        d = eig_sym(x + p)
        y = d.apply(np.maximum(d.eigenvalues, 0.0))
        p = x + p - y
        x_new = np.maximum(y + q, 0.0)
        q = y + q - x_new
        gap = float(np.max(np.abs(x_new - x)))
        x = x_new
        if gap < tol:
            # entries are exactly nonnegative after the orthant step; only
            # the PSD side needs a certificate
            if eig_sym(x).eigenvalues[0] >= -psd_tol:
                return x
    raise ProjectionStall(f"dykstra projection did not certify within {max_iters} iterations")
