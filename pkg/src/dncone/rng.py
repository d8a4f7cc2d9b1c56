"""Seeded splitmix64 generator.

Every random draw in the package flows through this generator so that any
probe or sample is replayable from a 64-bit seed, independent of numpy's
generator versioning.  Streams for sub-tasks are derived by hashing the
parent seed with integer keys, so trials indexed (seed, trial) are
independent and order-insensitive.
"""

import math

import numpy as np

from ._kernels import splitmix_fill

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 2.0 ** -53


def _mix(z):
    z = (z + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """64-bit splitmix stream with uniform/normal helpers."""

    def __init__(self, seed):
        self._state = int(seed) & _MASK

    @classmethod
    def derive(cls, *keys):
        """Deterministic child stream keyed by a tuple of integers."""
        h = 0
        for k in keys:
            h = _mix(h ^ _mix(int(k) & _MASK))
        return cls(h)

    def u64(self, count):
        out = np.empty(int(count), dtype=np.uint64)
        self._state = splitmix_fill(self._state, out)
        return out

    def uniforms(self, *shape):
        """iid uniforms on [0, 1), shaped array (or scalar for no shape)."""
        count = 1
        for s in shape:
            count *= int(s)
        vals = (self.u64(count) >> np.uint64(11)).astype(np.float64) * _INV_2_53
        if not shape:
            return float(vals[0])
        return vals.reshape(shape)

    def normals(self, *shape):
        """iid standard normals via Box-Muller."""
        count = 1
        for s in shape:
            count *= int(s)
        pairs = (count + 1) // 2
        raw = self.u64(2 * pairs)
        u1 = ((raw[:pairs] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
        u2 = (raw[pairs:] >> np.uint64(11)).astype(np.float64) * _INV_2_53
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * math.pi * u2
        vals = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:count]
        if not shape:
            return float(vals[0])
        return vals.reshape(shape)

    def randint(self, n):
        """Integer uniform on [0, n) by rejection-free modulo of a wide draw."""
        if n <= 0:
            raise ValueError("randint needs n >= 1")
        return int(self.u64(1)[0] % np.uint64(n))

    def choice_indices(self, n, k):
        """k distinct indices from range(n), order sorted."""
        if k > n:
            raise ValueError("cannot draw more distinct indices than available")
        pool = list(range(n))
        picked = []
        for i in range(k):
            j = self.randint(n - i)
            picked.append(pool.pop(j))
        picked.sort()
        return picked

    def permutation(self, n):
        """Fisher-Yates shuffle of range(n)."""
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randint(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm
