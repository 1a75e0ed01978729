"""Seeded randomness with a machine-independent bit stream.

Every random draw goes through numpy's PCG64 raw 64-bit output; bounded
integers and Bernoulli trials are derived from it here rather than through
``numpy.random.Generator`` so that results do not depend on numpy's
sampling algorithms, which are not stream-stable across releases.
"""

from __future__ import annotations

import hashlib

import numpy as np

RNG_DESCRIPTION = {
    "bit_generator": "numpy PCG64 (raw 64-bit output)",
    "seeding": "numpy SeedSequence(entropy=seed, spawn_key=path)",
    "shuffle": "Fisher-Yates; n-1 words drawn up front, step i uses w % (i+1), "
               "words in the biased tail replaced by fresh draws",
    "bernoulli": "u = (word >> 11) * 2**-53, success iff u < p",
}

_TWO64 = 1 << 64


def family_tag(name: str) -> int:
    """Stable 32-bit integer tag for a string (used in seed paths)."""
    return int.from_bytes(hashlib.sha256(name.encode()).digest()[:4], "little")


class SeededStream:
    """A reproducible stream of 64-bit words.

    ``path`` extends the seed the way ``SeedSequence.spawn_key`` does, so
    ``SeededStream(s, (a, b))`` is independent of ``SeededStream(s, (a, c))``.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.path = tuple(int(x) for x in path)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        self._bits = np.random.PCG64(ss)

    def words(self, size: int) -> np.ndarray:
        if size == 0:
            return np.zeros(0, dtype=np.uint64)
        return np.asarray(self._bits.random_raw(size), dtype=np.uint64)

    def word(self) -> int:
        return int(self._bits.random_raw())

    def below(self, m: int) -> int:
        """Uniform integer in [0, m)."""
        if m <= 0:
            raise ValueError("m must be positive")
        limit = _TWO64 - (_TWO64 % m)
        while True:
            w = self.word()
            if w < limit:
                return w % m

    def permutation(self, n: int) -> list[int]:
        """Fisher-Yates shuffle of ``range(n)``.

        Step ``i`` (from n-1 down to 1) consumes the next word ``w`` and swaps
        with ``w % (i+1)``; a word in the biased tail is replaced by the next
        fresh word from the stream.
        """
        perm = list(range(n))
        words = self.words(max(n - 1, 0)).tolist()
        for step, i in enumerate(range(n - 1, 0, -1)):
            m = i + 1
            w = words[step]
            limit = _TWO64 - (_TWO64 % m)
            while w >= limit:
                w = self.word()
            j = w % m
            perm[i], perm[j] = perm[j], perm[i]
        return perm

    def bernoulli(self, p: float, size: int) -> np.ndarray:
        u = (self.words(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return u < p

    def seed64(self) -> int:
        """A derived 64-bit seed, handy for printing and re-running."""
        return self.word()


def derive_seed(master_seed: int, *path: int) -> int:
    """Per-instance seed from a master seed and an integer path."""
    return SeededStream(master_seed, path).seed64()
