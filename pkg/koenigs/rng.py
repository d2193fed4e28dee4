"""
Counter-based random numbers for reproducible Monte-Carlo walks.

Each draw is a pure function of (seed, walk index, step), so an estimate
does not depend on how walks are split across workers.
"""

import numpy as np

PHILOX_M = np.uint64(0xD2511F53)
PHILOX_W = np.uint64(0x9E3779B9)
MASK32 = np.uint64(0xFFFFFFFF)
SHIFT32 = np.uint64(32)
UINT32_TO_FLOAT = 2.0 ** -32


def philox2x32_10(
    counter_lo: np.ndarray, counter_hi: np.ndarray, key: int
) -> tuple[np.ndarray, np.ndarray]:
    """
    Ten rounds of Philox2x32 applied elementwise.

    Args:
        counter_lo: Low counter words (any integer array)
        counter_hi: High counter words, broadcastable against counter_lo
        key: 32-bit key

    Returns:
        Pair of uint64 arrays holding the two 32-bit output words
    """
    lo = np.asarray(counter_lo, dtype=np.uint64) & MASK32
    hi = np.asarray(counter_hi, dtype=np.uint64) & MASK32
    lo, hi = np.broadcast_arrays(lo, hi)
    lo = lo.copy()
    hi = hi.copy()
    k = np.uint64(key) & MASK32

    for _ in range(10):
        product = PHILOX_M * lo
        new_hi = (product >> SHIFT32) & MASK32
        new_lo = product & MASK32
        lo = (new_hi ^ k ^ hi) & MASK32
        hi = new_lo
        k = (k + PHILOX_W) & MASK32

    return lo, hi


class CounterStream:
    """
    Uniform and angular draws addressed by walk index and step number.

    Example:
        >>> stream = CounterStream(seed=7)
        >>> u = stream.uniform(np.arange(4), step=0)
        >>> u.shape
        (4,)
    """

    def __init__(self, seed: int) -> None:
        self.seed = int(seed) & 0xFFFFFFFF

    @classmethod
    def for_point(cls, seed: int, z: complex) -> "CounterStream":
        """
        Substream of ``seed`` keyed by the bit pattern of an evaluation point.

        Estimates at different points draw from unrelated streams, while
        repeated estimates at one point share their walks.
        """
        z = complex(z)
        key = int(seed) & 0xFFFFFFFF
        for word in np.array([z.real, z.imag], dtype=np.float64).view(np.uint64):
            lo, _hi = philox2x32_10(word & MASK32, word >> SHIFT32, key)
            key = int(lo)
        return cls(key)

    def uniform(self, walk_index: np.ndarray, step: int) -> np.ndarray:
        """Uniform numbers in (0, 1), one per walk index"""
        lo, _hi = philox2x32_10(
            np.full(np.shape(walk_index), step, dtype=np.uint64),
            np.asarray(walk_index, dtype=np.uint64),
            self.seed,
        )
        return (lo.astype(np.float64) + 0.5) * UINT32_TO_FLOAT

    def angle(self, walk_index: np.ndarray, step: int) -> np.ndarray:
        """Uniform angles in (0, 2*pi)"""
        return 2.0 * np.pi * self.uniform(walk_index, step)

    def stratified_angle(self, walk_index: np.ndarray, strata: int) -> np.ndarray:
        """
        Angle jittered inside arc (walk_index mod strata) of ``strata`` equal arcs.

        Uses the step-0 draw, so callers continue with ``angle(index, 1)``.
        """
        u = self.uniform(walk_index, 0)
        arc = np.asarray(walk_index, dtype=np.uint64) % np.uint64(strata)
        return 2.0 * np.pi * (arc.astype(np.float64) + u) / strata

    def points_in_box(
        self,
        n: int,
        re_range: tuple[float, float],
        im_range: tuple[float, float],
        start: int = 0,
    ) -> np.ndarray:
        """
        Deterministic uniform points in a rectangle, used by sampled property checks.
        """
        index = np.arange(start, start + n, dtype=np.uint64)
        u = self.uniform(index, 0)
        v = self.uniform(index, 1)
        re = re_range[0] + (re_range[1] - re_range[0]) * u
        im = im_range[0] + (im_range[1] - im_range[0]) * v
        return re + 1j * im
