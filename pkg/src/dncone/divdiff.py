"""Divided-difference tables with confluent (repeated-node) support.

The table follows the standard recurrence for distinct nodes; a block of
r+1 coincident nodes at x contributes f^(r)(x)/r!.  Nodes that are distinct
but closer than 1e-10 times the node scale would make the recurrence divide
by numerical noise, so those either switch to the derivative rule (when the
function has one) or raise IllConditioned.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DerivativeUnavailable, DomainError, IllConditioned

COINCIDENT_GAP_FACTOR = 1e-10


@dataclass(frozen=True)
class DividedDiffTable:
    """Triangular table dd[i, j] = f[x_i, ..., x_{i+j}]."""

    nodes: np.ndarray
    table: np.ndarray

    @property
    def order(self):
        return self.nodes.shape[0] - 1

    def entry(self, i, j):
        if j < 0 or i < 0 or i + j > self.order:
            raise IndexError(f"no entry ({i}, {j}) in a table on {self.order + 1} nodes")
        return float(self.table[i, j])

    def coefficients(self):
        """Newton-form coefficients f[x_0], f[x_0,x_1], ..."""
        return self.table[0, :].copy()

    def order_entries(self, j):
        """All divided differences of a fixed order j."""
        return self.table[: self.order + 1 - j, j].copy()


def divided_differences(f, nodes):
    """Divided-difference table of ``f`` over sorted nonnegative nodes."""
    nodes = np.asarray(nodes, dtype=np.float64)
    if nodes.ndim != 1 or nodes.size == 0:
        raise DomainError("nodes must be a nonempty 1-d sequence")
    if np.any(nodes < 0) or not np.all(np.isfinite(nodes)):
        raise DomainError("nodes must be finite and >= 0")
    if np.any(np.diff(nodes) < 0):
        raise DomainError("nodes must be sorted ascending")

    k = nodes.size - 1
    gap_tol = COINCIDENT_GAP_FACTOR * max(1.0, float(np.max(nodes)))
    table = np.zeros((k + 1, k + 1))
    table[:, 0] = np.asarray(f.value(nodes), dtype=np.float64)
    for j in range(1, k + 1):
        for i in range(0, k + 1 - j):
            h = nodes[i + j] - nodes[i]
            if h > gap_tol:
                table[i, j] = (table[i + 1, j - 1] - table[i, j - 1]) / h
            else:
                if not f.supports_derivatives:
                    if h == 0.0:
                        raise DerivativeUnavailable(
                            f"repeated node {nodes[i]:g} needs derivatives "
                            f"that {f.describe()} cannot supply"
                        )
                    raise IllConditioned(
                        f"nodes {nodes[i]:.17g} and {nodes[i + j]:.17g} are "
                        f"closer than {gap_tol:.1e} and no derivative rule applies"
                    )
                x_rep = 0.5 * (nodes[i] + nodes[i + j])
                d = np.asarray(f.derivative(np.asarray([x_rep]), j)).reshape(-1)[0]
                table[i, j] = float(d) / math.factorial(j)
    if not np.all(np.isfinite(table)):
        raise DomainError("divided-difference table has non-finite entries")
    return DividedDiffTable(nodes=nodes.copy(), table=table)
