"""Platform-independent pseudo-random stream.

All seeded randomness in the package (splits, bootstrap draws, feature
subsampling, fold assignment) goes through :class:`SplitMix64` so that a
given seed yields the same artifacts on every platform and numpy version.

SplitMix64 (Steele, Lea & Flood, 2014): the state advances by the golden
gamma ``0x9E3779B97F4A7C15`` and each output is the state passed through
:func:`mix64`.  Bounded draws use rejection sampling, so they are unbiased.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z):
    """SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed, index):
    """Seed for sub-stream ``index`` of ``master_seed``.

    ``mix64(mix64(master_seed) + (index + 1) * GOLDEN_GAMMA)``.  Sub-streams
    depend only on their own index, so adding trees never changes the
    earlier ones.
    """
    return mix64((mix64(master_seed) + (index + 1) * GOLDEN_GAMMA) & MASK64)


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def below(self, n):
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items):
        """In-place Fisher-Yates shuffle (Durstenfeld, descending ``i``)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def sample(self, n, k):
        """``k`` distinct values from ``range(n)`` by a partial Fisher-Yates pass."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} of {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
