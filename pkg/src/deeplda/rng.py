"""Deterministic random numbers built on the SplitMix64 mixing function.

Every stochastic step in this package (weight initialization, epoch
shuffling, dropout masks) draws from :class:`SplitMix64` so that a run is
fully determined by its seed. SplitMix64 is counter based: draw ``i`` of a
stream is ``mix64(seed + (i + 1) * GAMMA)`` in 64-bit wrapping arithmetic,
which makes the sequence identical on every platform and lets a block of
draws be produced in one vectorized numpy pass. Platform or library RNGs
are deliberately not used anywhere.

State is just ``(seed, counter)``. A generator must not be shared between
threads; everything else in the package is pure and shareable.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
# 2**-53: maps the top 53 bits of a mixed word onto [0, 1).
_DOUBLE_SCALE = 1.0 / float(1 << 53)


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer over a uint64 array (wrapping arithmetic)."""
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Seeded stream of uniform doubles with an explicit draw counter."""

    def __init__(self, seed: int, counter: int = 0):
        if counter < 0:
            raise ValueError("counter must be non-negative")
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.counter = int(counter)

    def __repr__(self) -> str:
        return f"SplitMix64(seed={self.seed}, counter={self.counter})"

    def _next_words(self, n: int) -> np.ndarray:
        """Advance the counter by n and return n mixed 64-bit words."""
        if n < 0:
            raise ValueError("n must be non-negative")
        start = self.counter + 1
        idx = np.arange(start, start + n, dtype=np.uint64)
        self.counter += n
        return _mix64(np.uint64(self.seed) + idx * _GAMMA)

    def uniforms(self, n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
        """n independent doubles in [lo, hi), advancing the state by n."""
        if not lo < hi:
            raise ValueError(f"empty interval: lo={lo!r} must be < hi={hi!r}")
        u = (self._next_words(n) >> np.uint64(11)).astype(np.float64) * _DOUBLE_SCALE
        out = lo + u * (hi - lo)
        # Rounding of lo + u*(hi-lo) can land exactly on hi; keep [lo, hi).
        return np.minimum(out, np.nextafter(hi, lo))

    def next_uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """One double in [lo, hi), advancing the state by one draw."""
        return float(self.uniforms(1, lo, hi)[0])

    def uniform_matrix(self, rows: int, cols: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
        """A (rows, cols) float64 matrix of uniforms, filled row-major."""
        if rows < 1 or cols < 1:
            raise ValueError(f"matrix dims must be positive, got {rows}x{cols}")
        return self.uniforms(rows * cols, lo, hi).reshape(rows, cols)

    def permutation(self, n: int) -> np.ndarray:
        """Deterministic uniform permutation of range(n).

        Sorts n fresh uniform keys; stable sort makes the (vanishingly
        unlikely) tie case deterministic as well.
        """
        return np.argsort(self.uniforms(n), kind="stable")
