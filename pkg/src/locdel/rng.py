"""Deterministic random streams (xoshiro256** seeded via splitmix64).

Every source of randomness in the package is an xoshiro256** generator
whose 256-bit state is derived from a ``(seed, stream)`` key with the
splitmix64 mixer, so independent trials draw from independent streams
and any run is exactly reproducible from its manifest.

The same algorithm is exposed in three bindings:

* :class:`Xoshiro` — pure-Python generator (Python integers) used by
  the framework code;
* array-state helpers (:func:`seed_state`, :func:`next_u64`,
  :func:`uniform_below`, :func:`random_float`) operating on a
  ``numpy.uint64[4]`` state vector, compiled with numba and callable
  from inside other compiled kernels;
* a pure-Python binding of the same array helpers, selected when numba
  is disabled (``LOCDEL_NUMBA=0``).  The separate binding avoids
  numpy's silent uint64 -> float64 promotion in interpreted code.

All three produce bit-identical sequences for the same key.
"""

import numpy as np

from ._compat import USE_NUMBA, njit

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # splitmix64 increment
_STREAM_SALT = 0xD2B74407B1CE6E93  # odd salt decorrelating stream keys
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def _splitmix64(x):
    """One splitmix64 step: returns (new_counter, output_word)."""
    x = (x + _GAMMA) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return x, z ^ (z >> 31)


def _seed_words(keys):
    """Derive the four xoshiro256** state words from a key chain.

    ``keys`` is a sequence of integers, typically ``(seed, stream)``;
    longer chains arise from ``Xoshiro.split``.  Each key perturbs the
    splitmix64 counter, then four outputs are drawn.
    """
    x = 0
    for k in keys:
        x = (x ^ ((int(k) & _MASK) * _STREAM_SALT)) & _MASK
        x, _ = _splitmix64(x)
    words = []
    for _ in range(4):
        x, w = _splitmix64(x)
        words.append(w)
    if not any(words):  # xoshiro must never start from the all-zero state
        words[3] = 1
    return words


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro:
    """xoshiro256** generator keyed by (seed, stream).

    ``split(key)`` derives an independent child stream; the child's
    identity is the parent key chain extended by ``key``, so splits are
    reproducible and never depend on how much the parent has generated.
    """

    __slots__ = ("_s", "key")

    def __init__(self, seed=0, stream=0, _key=None):
        self.key = _key if _key is not None else (int(seed), int(stream))
        self._s = _seed_words(self.key)

    def split(self, key):
        """Return a new independent generator for child stream ``key``."""
        return Xoshiro(_key=self.key + (int(key),))

    def next_u64(self):
        s = self._s
        x = (s[1] * 5) & _MASK
        result = (_rotl(x, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self):
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def below(self, n):
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        threshold = (_MASK + 1 - n) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items):
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def state_array(self):
        """Copy of the current state as a uint64[4] array (for kernels)."""
        return np.array(self._s, dtype=np.uint64)


def seed_state(seed, stream):
    """uint64[4] xoshiro state for (seed, stream) — kernel-side seeding.

    Matches ``Xoshiro(seed, stream).state_array()`` exactly.
    """
    return np.array(_seed_words((int(seed), int(stream))), dtype=np.uint64)


# --- array-state bindings -------------------------------------------------
#
# The numba binding relies on wrapping uint64 arithmetic inside nopython
# code; the pure-Python binding does the same arithmetic on Python ints
# and writes masked values back, so both see identical sequences.

@njit(cache=True)
def _next_u64_nb(state):
    x = state[1] * np.uint64(5)
    result = ((x << np.uint64(7)) | (x >> np.uint64(57))) * np.uint64(9)
    t = state[1] << np.uint64(17)
    state[2] ^= state[0]
    state[3] ^= state[1]
    state[1] ^= state[2]
    state[0] ^= state[3]
    state[2] ^= t
    state[3] = (state[3] << np.uint64(45)) | (state[3] >> np.uint64(19))
    return result


@njit(cache=True)
def _uniform_below_nb(state, n):
    n64 = np.uint64(n)
    threshold = (np.uint64(0) - n64) % n64
    while True:
        x = _next_u64_nb(state)
        if x >= threshold:
            return np.int64(x % n64)


@njit(cache=True)
def _random_float_nb(state):
    return np.float64(_next_u64_nb(state) >> np.uint64(11)) * 1.1102230246251565e-16


def _next_u64_py(state):
    s0, s1, s2, s3 = (int(state[0]), int(state[1]), int(state[2]),
                      int(state[3]))
    x = (s1 * 5) & _MASK
    result = (_rotl(x, 7) * 9) & _MASK
    t = (s1 << 17) & _MASK
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    state[0] = np.uint64(s0)
    state[1] = np.uint64(s1)
    state[2] = np.uint64(s2)
    state[3] = np.uint64(s3)
    return np.uint64(result)


def _uniform_below_py(state, n):
    threshold = (_MASK + 1 - n) % n
    while True:
        x = int(_next_u64_py(state))
        if x >= threshold:
            return x % n


def _random_float_py(state):
    return (int(_next_u64_py(state)) >> 11) * _INV_2_53


if USE_NUMBA:
    next_u64 = _next_u64_nb
    uniform_below = _uniform_below_nb
    random_float = _random_float_nb
else:
    next_u64 = _next_u64_py
    uniform_below = _uniform_below_py
    random_float = _random_float_py
