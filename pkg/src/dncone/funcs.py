"""Scalar function models used on both the spectral and entrywise sides.

All variants map [0, inf) into [0, inf).  The power-times-shifted-power
model x^a * (x+u)^(-b) carries a closed-form r-th derivative evaluated
through finite products of linear factors; the Gamma-ratio form of the same
coefficient is never used because it blows up at the integer degeneracies
where the products stay finite and correct.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DerivativeUnavailable, DomainError

MAX_DERIVATIVE_ORDER = 32


def _as_nonneg_array(x, what="argument"):
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError(f"{what} must be finite and >= 0")
    return x


def falling_product(alpha, r):
    """prod_{j=0}^{r-1} (alpha - j); empty product is 1."""
    out = 1.0
    for j in range(r):
        out *= alpha - j
    return out


def lemma_derivative_terms(alpha, beta, u, r, x):
    """Value and term-magnitude scale of d^r/dx^r [x^alpha * (x+u)^(-beta)].

    The derivative equals

        x^(alpha-r) * (x+u)^(-beta-r)
          * sum_i C(r,i) u^i x^(r-i) prod_{j<i}(alpha-j) prod_{i<=j<r}(alpha-beta-j)

    and the returned scale is the prefactor times the largest |summand|,
    which is the right yardstick for deciding whether a computed value is
    genuinely negative or mere cancellation noise.  Vectorized over ``x``.
    """
    if r < 0 or r > MAX_DERIVATIVE_ORDER:
        raise DomainError(f"derivative order must be in [0, {MAX_DERIVATIVE_ORDER}], got {r}")
    if not u > 0:
        raise DomainError("shift u must be positive")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise DomainError("the closed-form derivative needs x > 0")

    # prod1[i] = prod_{j=0}^{i-1}(alpha-j), prod2[i] = prod_{j=i}^{r-1}(alpha-beta-j)
    prod1 = np.empty(r + 1)
    prod1[0] = 1.0
    for i in range(1, r + 1):
        prod1[i] = prod1[i - 1] * (alpha - (i - 1))
    prod2 = np.empty(r + 1)
    prod2[r] = 1.0
    for i in range(r - 1, -1, -1):
        prod2[i] = (alpha - beta - i) * prod2[i + 1]

    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        prefactor = x ** (alpha - r) * (x + u) ** (-beta - r)
        total = np.zeros_like(x)
        largest = np.zeros_like(x)
        for i in range(r + 1):
            term = math.comb(r, i) * prod1[i] * prod2[i] * u**i * x ** (r - i)
            total = total + term
            largest = np.maximum(largest, np.abs(term))
        value = prefactor * total
        scale = np.abs(prefactor) * largest
    if not (np.all(np.isfinite(value)) and np.all(np.isfinite(scale))):
        raise OverflowError(
            f"derivative overflowed for alpha={alpha}, beta={beta}, u={u}, r={r}"
        )
    return value, scale


def lemma_derivative(alpha, beta, u, r, x):
    """d^r/dx^r of x^alpha * (x+u)^(-beta) at x > 0."""
    value, _ = lemma_derivative_terms(alpha, beta, u, r, x)
    if np.ndim(x) == 0:
        return float(value)
    return value


class ScalarFunc:
    """Common surface for the scalar function variants."""

    supports_derivatives = False

    def value(self, x):
        raise NotImplementedError

    def derivative(self, x, order):
        raise DerivativeUnavailable(f"{self.describe()} supplies no derivatives")

    def derivative_with_scale(self, x, order):
        """(values, magnitude scales) of the order-th derivative on x > 0."""
        v = self.derivative(x, order)
        return v, np.abs(v)

    def describe(self):
        raise NotImplementedError

    def to_config(self):
        raise NotImplementedError


@dataclass(frozen=True)
class PurePower(ScalarFunc):
    """x -> x^alpha with alpha >= 0 (0^0 taken as 1)."""

    alpha: float
    supports_derivatives = True

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise DomainError(f"power exponent must be finite and >= 0, got {self.alpha}")

    def value(self, x):
        x = _as_nonneg_array(x)
        with np.errstate(invalid="ignore"):
            out = x**self.alpha
        if self.alpha == 0.0:
            out = np.where(x == 0.0, 1.0, out)
        return out if out.ndim else float(out)

    def derivative(self, x, order):
        v, _ = self.derivative_with_scale(x, order)
        return v

    def derivative_with_scale(self, x, order):
        if order < 0 or order > MAX_DERIVATIVE_ORDER:
            raise DomainError(f"derivative order out of range: {order}")
        if order == 0:
            v = np.asarray(self.value(x), dtype=np.float64)
            return v, np.abs(v)
        x = _as_nonneg_array(x)
        coeff = falling_product(self.alpha, order)
        expo = self.alpha - order
        with np.errstate(divide="raise", over="ignore"):
            if np.any(x == 0.0):
                if expo < 0 and coeff != 0.0:
                    raise DomainError(
                        f"derivative of x^{self.alpha} of order {order} is unbounded at 0"
                    )
                powers = np.where(x == 0.0, 1.0 if expo == 0.0 else 0.0, x**expo)
            else:
                powers = x**expo
        v = coeff * powers
        return v, np.abs(v)

    def describe(self):
        return f"power(alpha={self.alpha:g})"

    def to_config(self):
        return {"kind": "power", "alpha": float(self.alpha)}


@dataclass(frozen=True)
class PowerShift(ScalarFunc):
    """x -> x^alpha * (x+u)^(-beta) with alpha >= 0 and u > 0."""

    alpha: float
    beta: float
    u: float
    supports_derivatives = True

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise DomainError(f"power exponent must be finite and >= 0, got {self.alpha}")
        if not (np.isfinite(self.beta) and np.isfinite(self.u) and self.u > 0):
            raise DomainError("power-shift model needs finite beta and u > 0")

    def value(self, x):
        x = _as_nonneg_array(x)
        with np.errstate(invalid="ignore"):
            out = x**self.alpha * (x + self.u) ** (-self.beta)
        if self.alpha == 0.0:
            out = np.where(x == 0.0, self.u**-self.beta, out)
        return out if out.ndim else float(out)

    def derivative(self, x, order):
        if order == 0:
            return np.asarray(self.value(x), dtype=np.float64)
        return lemma_derivative_terms(self.alpha, self.beta, self.u, order, x)[0]

    def derivative_with_scale(self, x, order):
        if order == 0:
            v = np.asarray(self.value(x), dtype=np.float64)
            return v, np.abs(v)
        return lemma_derivative_terms(self.alpha, self.beta, self.u, order, x)

    def describe(self):
        return f"power_shift(alpha={self.alpha:g}, beta={self.beta:g}, u={self.u:g})"

    def to_config(self):
        return {
            "kind": "power_shift",
            "alpha": float(self.alpha),
            "beta": float(self.beta),
            "u": float(self.u),
        }


@dataclass(frozen=True)
class ExpFamily(ScalarFunc):
    """Smooth nonnegative function given through a derivative oracle.

    ``deriv_fn(x, k)`` must return f^(k)(x) elementwise for k >= 0.  The
    positivity and finite-limit conditions the preservation theory needs
    are checked numerically where the scans use them, not at construction.
    """

    name: str
    deriv_fn: Callable = field(compare=False, repr=False)
    supports_derivatives = True

    @staticmethod
    def exp():
        return ExpFamily("exp", lambda x, k: np.exp(x))

    @staticmethod
    def cosh():
        return ExpFamily("cosh", lambda x, k: np.cosh(x) if k % 2 == 0 else np.sinh(x))

    def value(self, x):
        x = _as_nonneg_array(x)
        out = np.asarray(self.deriv_fn(x, 0), dtype=np.float64)
        return out if out.ndim else float(out)

    def derivative(self, x, order):
        if order < 0:
            raise DomainError(f"derivative order out of range: {order}")
        x = _as_nonneg_array(x)
        return np.asarray(self.deriv_fn(x, order), dtype=np.float64)

    def describe(self):
        return self.name

    def to_config(self):
        return {"kind": self.name}


@dataclass(frozen=True)
class Tabulated(ScalarFunc):
    """Nonnegative function known only at sorted sample nodes.

    Values between nodes are filled by linear interpolation (with edge
    clamping), which is enough for membership probes; no derivatives exist,
    so preservation checks fall back to sampled divided differences.
    """

    nodes: tuple
    values: tuple

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size == 0:
            raise DomainError("tabulated model needs matching 1-d nodes and values")
        if np.any(np.diff(nodes) < 0):
            raise DomainError("tabulated nodes must be sorted ascending")
        if np.any(nodes < 0) or np.any(values < 0):
            raise DomainError("tabulated nodes and values must be >= 0")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(values))):
            raise DomainError("tabulated nodes and values must be finite")
        object.__setattr__(self, "nodes", tuple(float(v) for v in nodes))
        object.__setattr__(self, "values", tuple(float(v) for v in values))

    def value(self, x):
        x = _as_nonneg_array(x)
        out = np.interp(x, self.nodes, self.values)
        return out if out.ndim else float(out)

    def describe(self):
        return f"tabulated(k={len(self.nodes)})"

    def to_config(self):
        return {"kind": "tabulated", "nodes": list(self.nodes), "values": list(self.values)}


def func_from_config(cfg):
    """Rebuild a scalar function from its serialized config dict."""
    kind = cfg.get("kind")
    if kind == "power":
        return PurePower(cfg["alpha"])
    if kind == "power_shift":
        return PowerShift(cfg["alpha"], cfg["beta"], cfg["u"])
    if kind == "exp":
        return ExpFamily.exp()
    if kind == "cosh":
        return ExpFamily.cosh()
    if kind == "tabulated":
        return Tabulated(tuple(cfg["nodes"]), tuple(cfg["values"]))
    raise DomainError(f"unknown scalar function kind {kind!r}")
