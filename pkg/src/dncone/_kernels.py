"""Hot numerical kernels, written as plain loops.

Every kernel here is compiled with numba when it is importable and runs as
ordinary Python otherwise.  Both paths execute the same floating-point
operations in the same order, so results are deterministic per environment.
"""

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without the accel extra
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def jacobi_cyclic(a, u, fro_tol, max_sweeps):
    """Row-cyclic Jacobi diagonalization of the symmetric matrix ``a``.

    ``a`` is overwritten with the (eventually diagonal) iterate and ``u``
    accumulates the rotations, so that u @ diag(a) @ u.T reconstructs the
    input.  Sweeps run over pairs (p, q) in fixed row-major order; the
    iteration stops once the off-diagonal Frobenius norm drops below
    ``fro_tol``.  Returns the number of sweeps used, or -1 if ``max_sweeps``
    was not enough.
    """
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if math.sqrt(2.0 * off) <= fro_tol:
            return sweep
        if sweep == max_sweeps:
            return -1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                app = a[p, p]
                aqq = a[q, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = c * aip - s * aiq
                        a[p, i] = a[i, p]
                        a[i, q] = s * aip + c * aiq
                        a[q, i] = a[i, q]
                for i in range(n):
                    uip = u[i, p]
                    uiq = u[i, q]
                    u[i, p] = c * uip - s * uiq
                    u[i, q] = s * uip + c * uiq
    return -1


# splitmix64 constants
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = 0xFFFFFFFFFFFFFFFF


def _splitmix_fill_py(state, out):
    s = int(state)
    for i in range(out.shape[0]):
        s = (s + _GOLDEN) & _MASK
        z = s
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        z = z ^ (z >> 31)
        out[i] = z
    return s


if HAVE_NUMBA:

    @njit(cache=True)
    def _splitmix_fill_nb(state, out):
        s = np.uint64(state)
        golden = np.uint64(_GOLDEN)
        m1 = np.uint64(_MIX1)
        m2 = np.uint64(_MIX2)
        for i in range(out.shape[0]):
            s = s + golden
            z = s
            z = (z ^ (z >> np.uint64(30))) * m1
            z = (z ^ (z >> np.uint64(27))) * m2
            z = z ^ (z >> np.uint64(31))
            out[i] = z
        return s

    def splitmix_fill(state, out):
        return int(_splitmix_fill_nb(np.uint64(state), out))

else:
    splitmix_fill = _splitmix_fill_py
