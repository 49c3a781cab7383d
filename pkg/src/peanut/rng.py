"""Portable counter-based random numbers.

The generator is SplitMix64 (Steele, Lea & Flood 2014) used in counter mode:
output ``i`` of the stream with key ``k`` is ``mix64(k + (i + 1) * GAMMA)``
with all arithmetic modulo 2**64. This is exactly the sequence a sequential
SplitMix64 seeded with ``k`` produces, so any language can reproduce it, and
every draw can be computed independently of evaluation order.

Substreams are derived by hashing a parent key with an integer label, which
is how per-tree, per-fold and per-cell streams are obtained from one master
seed.
"""

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1
_TWO_M53 = 2.0 ** -53


def mix64(z):
    """SplitMix64 finalizer on a uint64 scalar or array."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _as_key(x):
    return np.uint64(int(x) & _MASK)


def derive(key, *labels):
    """Derive a child key from ``key`` and integer labels.

    ``derive(seed, i)`` is the key of substream ``i``; further labels are
    folded in one at a time.
    """
    with np.errstate(over="ignore"):
        h = mix64(_as_key(key) + GAMMA)
        for label in labels:
            h = mix64(h ^ mix64(_as_key(label) + GAMMA))
    return int(h)


def raw(key, start, count):
    """Raw 64-bit outputs ``start .. start+count-1`` of stream ``key``."""
    i = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(_as_key(key) + i * GAMMA)


def to_unit(z):
    """Map uint64 outputs to doubles in [0, 1) using the top 53 bits."""
    return (np.asarray(z, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * _TWO_M53


class Stream:
    """Sequential view of one counter-based stream.

    >>> s = Stream(42)
    >>> u = s.uniform(3)
    >>> bool(((0 <= u) & (u < 1)).all())
    True
    """

    def __init__(self, key):
        self.key = int(key) & _MASK
        self.counter = 0

    def _take(self, count):
        out = raw(self.key, self.counter, count)
        self.counter += count
        return out

    def uniform(self, size):
        return to_unit(self._take(size))

    def normal(self, size):
        """Standard normals by the Box-Muller transform.

        Each pair of uniforms gives two normals, so a request for ``size``
        values consumes ``2 * ceil(size / 2)`` outputs.
        """
        half = (size + 1) // 2
        u = to_unit(self._take(2 * half)).reshape(half, 2)
        r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        theta = 2.0 * np.pi * u[:, 1]
        z = np.empty((half, 2))
        z[:, 0] = r * np.cos(theta)
        z[:, 1] = r * np.sin(theta)
        return z.ravel()[:size]

    def integers(self, high, size):
        """Integers in ``[0, high)`` by scaling a uniform (bias < 2**-53 * high)."""
        idx = np.floor(self.uniform(size) * high).astype(np.int64)
        return np.minimum(idx, high - 1)

    def permutation(self, n):
        """A permutation of ``range(n)``: argsort of n raw draws."""
        return np.argsort(self._take(n), kind="stable")


def derive_many(key, labels):
    """Vectorized ``[derive(key, l) for l in labels]`` as a uint64 array."""
    labels = np.asarray(labels).astype(np.uint64)
    with np.errstate(over="ignore"):
        h = mix64(_as_key(key) + GAMMA)
        return mix64(h ^ mix64(labels + GAMMA))


def normal_rows(keys, size):
    """Row ``i`` equals ``Stream(keys[i]).normal(size)``."""
    keys = np.asarray(keys, dtype=np.uint64)
    half = (size + 1) // 2
    j = np.arange(1, 2 * half + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        u = to_unit(mix64(keys[:, None] + j[None, :] * GAMMA))
    u = u.reshape(len(keys), half, 2)
    r = np.sqrt(-2.0 * np.log1p(-u[..., 0]))
    theta = 2.0 * np.pi * u[..., 1]
    z = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)
    return z.reshape(len(keys), 2 * half)[:, :size]
