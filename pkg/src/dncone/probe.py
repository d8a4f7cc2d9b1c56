"""Empirical probes of the preservation phase transition.

The search below the critical exponent is hybrid: seeded round-robin
sampling over all three DN samplers, plus derivative-free local descent on
the minimum entry of f(A) started from the best near-misses.  Counterexample
pressure concentrates near the cone boundary (zero entries, zero
eigenvalues), which is exactly where the projection sampler lands, so random
draws already witness most violations; descent mops up the stubborn ones.
"""

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cone import DnSamplerConfig, STRATEGIES, check_dn, project_dn, sample_dn
from .errors import BracketStall, DomainError, InconsistentBracket, ProjectionStall
from .funcs import PurePower, PowerShift
from .rng import SplitMix64
from .scans import critical_threshold, derivative_sign_scan, exceptional_set
from .spectral import eig_sym
from .matfuncs import spectral_apply

DEFAULT_ENTRY_TOL = 1e-8
_NEAR_MISS_POOL = 8


def default_budget(n):
    """Trial budgets: search difficulty grows quickly with the order."""
    return 10_000 if n <= 5 else 100_000


@dataclass(frozen=True)
class Witness:
    matrix: np.ndarray
    entry: tuple
    value: float


@dataclass(frozen=True)
class ProbeReport:
    n: int
    func: dict
    verdict: str  # "preserved_on_sample" | "violation_found"
    witness: Optional[Witness]
    trials: int
    seed: int
    strategy: str
    elapsed: float

    @property
    def violation_found(self):
        return self.verdict == "violation_found"


def _min_entry_and_index(m):
    flat = int(np.argmin(m))
    i, j = divmod(flat, m.shape[1])
    return float(m[i, j]), (i, j)


def _confirm_witness(a, f, entry, entry_tol):
    """Re-verify a candidate at tightened eigensolver tolerance before
    declaring it a counterexample; numerical noise must not become a witness."""
    d = eig_sym(a, sweep_tol_factor=1e-16, max_sweeps=128)
    verdict = check_dn(a, decomp=d)
    if not verdict.is_dn:
        return None
    fa = spectral_apply(a, f, decomp=d)
    value = float(fa[entry])
    if value < -entry_tol:
        return Witness(matrix=a.copy(), entry=entry, value=value)
    return None


def find_violation(n, f, budget=None, seed=0, entry_tol=DEFAULT_ENTRY_TOL, scale=1.0,
                   descent_frac=0.2, jobs=1):
    """Search order-n DN matrices for one with a negative entry in f(A).

    Deterministic per seed.  An exhausted budget is a verdict
    ("preserved_on_sample"), not an error.  ``jobs`` > 1 evaluates sampling
    trials in a thread pool; the reported witness is still the one with the
    lowest trial index, so results match the sequential run.
    """
    budget = default_budget(n) if budget is None else int(budget)
    if budget < 1:
        raise DomainError("budget must be >= 1")
    t0 = time.perf_counter()
    func_cfg = f.to_config()
    strategy_desc = (
        f"round-robin {'/'.join(STRATEGIES)}; descent on {_NEAR_MISS_POOL} near-misses "
        f"(frac={descent_frac:g})"
    )
    cfgs = [DnSamplerConfig(n=n, strategy=s, seed=seed, scale=scale) for s in STRATEGIES]
    n_sample = budget - int(budget * descent_frac)

    near = []  # (min_entry, trial, matrix)

    def run_trial(trial):
        a = sample_dn(cfgs[trial % len(cfgs)], draw_index=trial)
        d = eig_sym(a)
        fa = spectral_apply(a, f, decomp=d)
        m, idx = _min_entry_and_index(fa)
        return a, m, idx

    def finish(verdict, witness, trials):
        return ProbeReport(
            n=n, func=func_cfg, verdict=verdict, witness=witness, trials=trials,
            seed=seed, strategy=strategy_desc, elapsed=time.perf_counter() - t0,
        )

    trials_done = 0
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for base in range(0, n_sample, 64):
                chunk = range(base, min(base + 64, n_sample))
                results = list(pool.map(run_trial, chunk))
                trials_done += len(results)
                for trial, (a, m, idx) in zip(chunk, results):
                    if m < -entry_tol:
                        w = _confirm_witness(a, f, idx, entry_tol)
                        if w is not None:
                            return finish("violation_found", w, trial + 1)
                    near.append((m, trial, a))
                if len(near) > 16 * _NEAR_MISS_POOL:
                    near.sort(key=lambda t: (t[0], t[1]))
                    del near[_NEAR_MISS_POOL:]
    else:
        for trial in range(n_sample):
            a, m, idx = run_trial(trial)
            trials_done += 1
            if m < -entry_tol:
                w = _confirm_witness(a, f, idx, entry_tol)
                if w is not None:
                    return finish("violation_found", w, trial + 1)
            near.append((m, trial, a))
            if len(near) > 16 * _NEAR_MISS_POOL:
                near.sort(key=lambda t: (t[0], t[1]))
                del near[_NEAR_MISS_POOL:]

    near.sort(key=lambda t: (t[0], t[1]))
    seeds = near[:_NEAR_MISS_POOL]
    descent_budget = budget - trials_done
    per_seed = descent_budget // max(1, len(seeds))
    rng = SplitMix64.derive(seed, n, 0xDE5CE47)
    for rank, (m0, _, a0) in enumerate(seeds):
        x, cur = a0.copy(), m0
        step = 0.25 * max(float(np.max(np.abs(a0))), 1e-6)
        for _ in range(per_seed):
            pert = rng.normals(n, n)
            pert = (pert + pert.T) / 2.0
            trials_done += 1
            try:
                cand = project_dn(x + step * pert)
            except ProjectionStall:
                step *= 0.5
                continue
            d = eig_sym(cand)
            fa = spectral_apply(cand, f, decomp=d)
            mc, idx = _min_entry_and_index(fa)
            if mc < cur:
                x, cur = cand, mc
                step *= 1.3
            else:
                step *= 0.8
            if cur < -entry_tol:
                w = _confirm_witness(x, f, idx, entry_tol)
                if w is not None:
                    return finish("violation_found", w, trials_done)
            if step < 1e-12:
                step = 0.1
    return finish("preserved_on_sample", None, trials_done)


@dataclass(frozen=True)
class AlphaFamily:
    """Parametrized exponent family for bracketing runs."""

    kind: str  # "power" | "power_shift"
    beta: float = 0.0
    u: float = 1.0

    def make(self, alpha):
        if self.kind == "power":
            return PurePower(alpha)
        if self.kind == "power_shift":
            return PowerShift(alpha, self.beta, self.u)
        raise DomainError(f"unknown family kind {self.kind!r}")

    def excluded(self, n):
        """Exponents the bisection must step around: they may preserve below
        the threshold, which would break bracket monotonicity."""
        pts = set(float(m) for m in range(0, n + 1))
        if self.kind == "power_shift":
            pts.update(float(v) for v in exceptional_set(n, self.beta))
        return sorted(pts)

    def asserted_preserving(self, n):
        """Exponents the theory guarantees preserve (checked separately)."""
        if self.kind == "power":
            return [float(m) for m in range(0, n - 2)]
        return []

    def threshold(self, n):
        beta = self.beta if self.kind == "power_shift" else 0.0
        return critical_threshold(n, beta)

    def describe(self):
        if self.kind == "power":
            return "power"
        return f"power_shift(beta={self.beta:g}, u={self.u:g})"

    def to_config(self):
        if self.kind == "power":
            return {"kind": "power"}
        return {"kind": "power_shift", "beta": float(self.beta), "u": float(self.u)}


@dataclass(frozen=True)
class ExponentEstimate:
    n: int
    family: dict
    alpha_lo: float
    alpha_hi: float
    resolution: float
    reports: tuple  # ((alpha, ProbeReport), ...) sorted by alpha

    def __post_init__(self):
        if not self.alpha_lo < self.alpha_hi:
            raise InconsistentBracket(
                f"bracket edges out of order: [{self.alpha_lo}, {self.alpha_hi}]"
            )
        if self.alpha_hi - self.alpha_lo > self.resolution * (1 + 1e-12):
            raise InconsistentBracket(
                f"bracket wider than resolution: width {self.alpha_hi - self.alpha_lo}"
            )


def _alpha_seed(seed, alpha):
    return SplitMix64.derive(seed, int(round(alpha * 1e9))).randint(1 << 62)


def _step_off_excluded(mid, excluded, lo, hi, resolution):
    """Keep bisection probes clear of exponents excluded from the bracket."""
    snap = resolution / 4.0
    for e in excluded:
        if abs(mid - e) < snap:
            up = e + resolution / 2.0
            down = e - resolution / 2.0
            if lo < up < hi:
                return up
            if lo < down < hi:
                return down
    return mid


def bracket_exponent(n, family, resolution=0.05, budget_per_alpha=None, seed=0,
                     entry_tol=DEFAULT_ENTRY_TOL, max_stall_retries=2):
    """Two-sided bracket of the family's critical exponent by bisection.

    A confirmed violation moves alpha_lo up; an exponent surviving both the
    matrix search and the derivative sign scan moves alpha_hi down.  An
    exponent where the scan reports a violation the search cannot witness is
    retried at nearby probes and then raises :class:`BracketStall` - by
    design, a falsifiable failure of the search strategy rather than a
    silently wrong bracket.
    """
    if resolution <= 0:
        raise DomainError("resolution must be positive")
    budget = default_budget(n) if budget_per_alpha is None else int(budget_per_alpha)
    excluded = family.excluded(n)
    reports = {}

    def probe(alpha):
        rep = find_violation(
            n, family.make(alpha), budget=budget, seed=_alpha_seed(seed, alpha),
            entry_tol=entry_tol,
        )
        reports[alpha] = rep
        return rep

    # theory-guaranteed exponents are verified outside the monotone bracket
    for alpha in family.asserted_preserving(n):
        rep = probe(alpha)
        if rep.violation_found:
            raise InconsistentBracket(
                f"witnessed a violation at guaranteed-preserving alpha={alpha:g}"
            )

    violations = []
    survivals = []

    def record(alpha, rep):
        if rep.violation_found:
            violations.append(alpha)
        else:
            survivals.append(alpha)
        if violations and survivals and max(violations) > min(survivals):
            raise InconsistentBracket(
                f"violation at alpha={max(violations):g} above survival at "
                f"alpha={min(survivals):g}; tolerances are suspect"
            )

    lo, hi = 0.0, float(n)
    top = _step_off_excluded(hi - resolution / 2.0, excluded, lo, hi + resolution, resolution)
    rep = probe(top)
    record(top, rep)
    if rep.violation_found:
        raise BracketStall(
            f"violation at the top probe alpha={top:g}; the family threshold "
            f"may lie outside the [0, n] bisection range"
        )
    hi = top

    while hi - lo > resolution:
        mid = _step_off_excluded((lo + hi) / 2.0, excluded, lo, hi, resolution)
        stalled = True
        for retry in range(max_stall_retries + 1):
            alpha = mid + retry * resolution / (max_stall_retries + 2)
            if not lo < alpha < hi:
                continue
            rep = probe(alpha)
            if rep.violation_found:
                record(alpha, rep)
                lo = alpha
                stalled = False
                break
            scan = derivative_sign_scan(family.make(alpha), n)
            if scan.all_nonneg:
                record(alpha, rep)
                hi = alpha
                stalled = False
                break
            # scan says a violation exists but the search could not witness
            # one: retry a nearby probe before giving up
        if stalled:
            raise BracketStall(
                f"search could not witness the scan-reported violation near "
                f"alpha={mid:g} (n={n})",
                estimate=None,
            )

    return ExponentEstimate(
        n=n,
        family=family.to_config(),
        alpha_lo=lo,
        alpha_hi=hi,
        resolution=float(resolution),
        reports=tuple(sorted(reports.items())),
    )
