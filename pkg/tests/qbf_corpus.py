"""Seeded random QBF corpus shared by the elimination tests."""
from chainbench.qbf import EXISTS, FORALL, count_width_clauses, random_qbf
from chainbench.rng import SplitMix64

CORPUS_SEED = 0x5EED_0B0F
CORPUS_SIZE = 1000


def random_corpus(count: int = CORPUS_SIZE, seed: int = CORPUS_SEED):
    """Instances with 2..10 variables, 1..20 clauses, width 2 or 3.

    Even indices use a strictly alternating prefix, odd ones blocks of 2 or 3.
    """
    rng = SplitMix64(seed)
    out = []
    for i in range(count):
        n = 2 + rng.below(9)
        width = min(n, 2 + rng.below(2))
        alternation = "strict" if i % 2 == 0 else f"blocks:{2 + rng.below(2)}"
        n_clauses = 1 + rng.below(min(20, count_width_clauses(n, width)))
        innermost = EXISTS if rng.below(2) else FORALL
        out.append(random_qbf(n, n_clauses, width, alternation, rng.next_u64(), innermost))
    return out
