"""Derivative sign scans and cone-preservation predicates on the scalar side.

A C^{n-1} function g >= 0 maps the order-n DN cone into itself exactly when
g and its first n-1 derivatives are nonnegative on (0, inf).  The scans
check that on a fixed grid covering both limiting regimes the theory cares
about: x -> 0+ (log-spaced down to 1e-8) and x -> inf (log-spaced up to
1e8).  A grid scan proves grid-nonnegativity only, so every result records
the grid it used; "all_nonneg" is an auditable claim, never a proof.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .divdiff import divided_differences
from .errors import ConditionViolation, DerivativeUnavailable, DomainError
from .funcs import ExpFamily, Tabulated, falling_product
from .rng import SplitMix64

DEFAULT_SIGN_TOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Scan grid: log-spaced span for the limits plus a uniform middle band."""

    log_points: int = 400
    log_lo: float = 1e-8
    log_hi: float = 1e8
    lin_points: int = 100
    lin_lo: float = 0.1
    lin_hi: float = 10.0

    def build(self):
        xs = np.concatenate(
            [
                np.geomspace(self.log_lo, self.log_hi, self.log_points),
                np.linspace(self.lin_lo, self.lin_hi, self.lin_points),
            ]
        )
        return np.unique(xs)

    def describe(self):
        return (
            f"grid(log {self.log_points} pts [{self.log_lo:g}, {self.log_hi:g}], "
            f"uniform {self.lin_points} pts [{self.lin_lo:g}, {self.lin_hi:g}])"
        )


@dataclass(frozen=True)
class Violation:
    order: int
    x: float
    value: float


@dataclass(frozen=True)
class SignScanResult:
    all_nonneg: bool
    first_violation: Optional[Violation]
    orders_checked: int
    grid: str


def _scan_orders(eval_order, n, xs, sign_tol, grid_desc):
    """Shared scan loop: eval_order(i) -> (values, scales) on xs."""
    for order in range(n):
        values, scales = eval_order(order)
        bad = values < -sign_tol * scales
        if np.any(bad):
            idx = int(np.argmax(bad))
            return SignScanResult(
                all_nonneg=False,
                first_violation=Violation(order=order, x=float(xs[idx]), value=float(values[idx])),
                orders_checked=n - 1,
                grid=grid_desc,
            )
    return SignScanResult(all_nonneg=True, first_violation=None, orders_checked=n - 1, grid=grid_desc)


def derivative_sign_scan(f, n, grid=None, sign_tol=DEFAULT_SIGN_TOL):
    """Scan f, f', ..., f^(n-1) for a negative value on the grid.

    The violation threshold at each point is ``sign_tol`` times the local
    magnitude of the largest term in the derivative's sum, so cancellation
    at a genuine zero (integer exponents) is not misreported.
    """
    if n < 2:
        raise DomainError(f"order must be >= 2, got {n}")
    if not f.supports_derivatives:
        raise DerivativeUnavailable(f"{f.describe()} has no derivatives to scan")
    grid = grid if grid is not None else GridSpec()
    xs = grid.build()

    def eval_order(order):
        return f.derivative_with_scale(xs, order)

    return _scan_orders(eval_order, n, xs, sign_tol, grid.describe())


def mw_preserves(f, n, node_budget=2000, seed=0, grid=None, sign_tol=DEFAULT_SIGN_TOL):
    """Does f preserve the order-n DN cone?

    Differentiable variants reduce to the derivative sign scan.  Tabulated
    functions have no derivatives, so the check samples ``node_budget``
    random node tuples of sizes 2..n and tests divided-difference
    nonnegativity; that is a necessary condition only, and the result's
    grid description says so.
    """
    if n < 2:
        raise DomainError(f"order must be >= 2, got {n}")
    if f.supports_derivatives:
        res = derivative_sign_scan(f, n, grid=grid, sign_tol=sign_tol)
        if res.first_violation is not None and res.first_violation.order == 0:
            raise DomainError(
                f"{f.describe()} is negative at x={res.first_violation.x:g}; "
                "preservation is only defined for nonnegative functions"
            )
        return res
    if not isinstance(f, Tabulated):
        raise DerivativeUnavailable(f"no preservation test for {f.describe()}")

    nodes = np.asarray(f.nodes)
    values = np.asarray(f.values)
    desc = f"tabulated-tuple sampler (budget={node_budget}, seed={seed}; necessary condition only)"
    scale = max(1.0, float(np.max(np.abs(values))))
    rng = SplitMix64.derive(seed, len(nodes))
    max_size = min(n, nodes.size)
    for draw in range(node_budget):
        size = 2 + draw % max(1, max_size - 1)
        if size > nodes.size:
            continue
        idx = rng.choice_indices(nodes.size, size)
        # distinct tabulated nodes may still repeat numerically; skip those
        sub = nodes[idx]
        if np.any(np.diff(sub) <= 0):
            continue
        table = divided_differences(f, sub)
        for j in range(1, size):
            col = table.order_entries(j)
            bad = col < -sign_tol * scale
            if np.any(bad):
                i = int(np.argmax(bad))
                return SignScanResult(
                    all_nonneg=False,
                    first_violation=Violation(order=j, x=float(sub[i]), value=float(col[i])),
                    orders_checked=n - 1,
                    grid=desc,
                )
    return SignScanResult(all_nonneg=True, first_violation=None, orders_checked=n - 1, grid=desc)


def exceptional_set(n, beta):
    """{m + max(beta, 0) : m = 0, ..., n-3}; empty when n == 2."""
    base = max(beta, 0.0)
    return np.asarray([m + base for m in range(n - 2)], dtype=np.float64)


def critical_threshold(n, beta=0.0):
    return n - 2 + max(beta, 0.0)


def exceptional_set_scan(beta, u, n, alpha_grid, grid=None, sign_tol=DEFAULT_SIGN_TOL):
    """Sign-scan x^alpha * (x+u)^(-beta) for each alpha in the grid."""
    from .funcs import PowerShift, PurePower

    results = []
    for alpha in np.asarray(alpha_grid, dtype=np.float64):
        f = PurePower(alpha) if beta == 0.0 else PowerShift(alpha, beta, u)
        results.append((float(alpha), derivative_sign_scan(f, n, grid=grid, sign_tol=sign_tol)))
    return results


@dataclass(frozen=True)
class ExceptionalScanReport:
    """Consistency of a scan against the predicted phase transition."""

    n: int
    beta: float
    threshold: float
    exceptional: tuple
    consistent: bool
    above_threshold_failures: tuple
    stray_preserving: tuple


def classify_against_exceptional_set(results, n, beta, snap=1e-9):
    """Check a scan outcome against the predicted threshold structure.

    Above n-2+max(beta,0) every alpha must scan clean; below it, any alpha
    that scans clean must sit (within ``snap``) inside the finite
    exceptional set.  Membership of that set is *not* asserted the other
    way around: below the threshold the set only contains the preserving
    values, it need not equal them.
    """
    threshold = critical_threshold(n, beta)
    exc = exceptional_set(n, beta)
    above_failures = []
    stray = []
    for alpha, res in results:
        if alpha >= threshold - snap:
            if not res.all_nonneg:
                above_failures.append(alpha)
        elif res.all_nonneg:
            if exc.size == 0 or float(np.min(np.abs(exc - alpha))) > snap:
                stray.append(alpha)
    return ExceptionalScanReport(
        n=n,
        beta=float(beta),
        threshold=float(threshold),
        exceptional=tuple(float(v) for v in exc),
        consistent=not above_failures and not stray,
        above_threshold_failures=tuple(above_failures),
        stray_preserving=tuple(stray),
    )


def _family_grid(f, n, grid):
    """Scan grid trimmed to where all needed derivatives of f stay finite."""
    grid = grid if grid is not None else GridSpec()
    xs = grid.build()
    finite = np.ones(xs.shape, dtype=bool)
    with np.errstate(over="ignore"):
        for i in range(n):
            finite &= np.isfinite(f.derivative(xs, i))
    if not np.all(finite):
        xs = xs[finite]
        if xs.size < 16:
            raise ConditionViolation(
                f"{f.describe()} overflows on nearly the whole scan grid"
            )
        desc = f"{grid.describe()} trimmed to [{xs[0]:g}, {xs[-1]:g}] where f stays finite"
    else:
        desc = grid.describe()
    return xs, desc


def _check_positivity_conditions(f, n, xs):
    """Numerical version of the conditions the exponential-family theory needs:
    f > 0 on the grid, positive and finite at the small-x end, and all
    derivatives through order n-1 nonnegative and finite at the small-x end.
    """
    vals = f.derivative(xs, 0)
    if np.any(vals <= 0):
        idx = int(np.argmax(vals <= 0))
        raise ConditionViolation(f"{f.describe()} is not positive at x={xs[idx]:g}")
    for i in range(1, n):
        d = f.derivative(xs, i)
        if np.any(d < 0):
            idx = int(np.argmax(d < 0))
            raise ConditionViolation(
                f"derivative order {i} of {f.describe()} is negative at x={xs[idx]:g}"
            )
        if not np.isfinite(d[0]):
            raise ConditionViolation(
                f"derivative order {i} of {f.describe()} diverges toward 0+"
            )


def family_exponent_scan(f, n, alpha_grid, grid=None, sign_tol=DEFAULT_SIGN_TOL):
    """Scan g = x^alpha * f(x) over alpha for an ExpFamily oracle f.

    g's derivatives expand through the product rule,

        g^(i)(x) = sum_l C(i,l) prod_{j<l}(alpha-j) x^(alpha-l) f^(i-l)(x),

    evaluated directly from f's derivative oracle.  The expected preserving
    set is the naturals together with [n-2, inf).
    """
    if n < 2:
        raise DomainError(f"order must be >= 2, got {n}")
    if not isinstance(f, ExpFamily):
        raise DomainError("family scan expects a derivative-oracle function")
    xs, desc = _family_grid(f, n, grid)
    _check_positivity_conditions(f, n, xs)

    fder = [np.asarray(f.derivative(xs, i), dtype=np.float64) for i in range(n)]
    results = []
    for alpha in np.asarray(alpha_grid, dtype=np.float64):
        if alpha < 0:
            raise DomainError("alpha grid must be >= 0")

        def eval_order(order, alpha=float(alpha)):
            with np.errstate(over="ignore", under="ignore"):
                total = np.zeros_like(xs)
                largest = np.zeros_like(xs)
                for l in range(order + 1):
                    coeff = math.comb(order, l) * falling_product(alpha, l)
                    term = coeff * xs ** (alpha - l) * fder[order - l]
                    total = total + term
                    largest = np.maximum(largest, np.abs(term))
            if not np.all(np.isfinite(total)):
                raise OverflowError(
                    f"family scan overflowed at alpha={alpha}, order={order}"
                )
            return total, largest

        results.append((float(alpha), _scan_orders(eval_order, n, xs, sign_tol, desc)))
    return results
