"""Deterministic splitmix64 generator.

Pure integer arithmetic so that instance streams are identical on every
platform; ``random.Random`` is avoided on purpose (its algorithm is an
implementation detail of CPython).
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound > 1 << 64:
            # compose 64-bit words for very large ranges
            words = (bound.bit_length() + 63) // 64
            limit = (1 << (64 * words)) - ((1 << (64 * words)) % bound)
            while True:
                x = 0
                for _ in range(words):
                    x = (x << 64) | self.next_u64()
                if x < limit:
                    return x % bound
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def sample_distinct(self, population: int, k: int) -> list[int]:
        """``k`` distinct integers from ``range(population)`` (Floyd's algorithm), sorted."""
        if k > population:
            raise ValueError(f"cannot draw {k} distinct values from {population}")
        chosen: set[int] = set()
        for j in range(population - k, population):
            t = self.below(j + 1)
            chosen.add(j if t in chosen else t)
        return sorted(chosen)
