"""Two-level representations of boolean functions and their sizes.

Run: python demos/minimal_covers.py
"""
from chainbench.boolfn import TruthTable, extensional_dnf, format_cover, minimize
from chainbench.devices import complete_tree_nodes, decision_tree_device
from chainbench.oracles import minimal_cover_size
from chainbench.rng import SplitMix64

# Parity is the worst case for sum-of-products: every true point is its own term.
for m in (2, 3, 4, 5):
    t = TruthTable.parity(m)
    print(f"parity({m}): exact terms {minimize(t).term_count}, "
          f"tree nodes {decision_tree_device(t).nodes()} of {complete_tree_nodes(m)}")

# A function with structure compresses well.
t = TruthTable.from_points(4, [p for p in range(16) if p >> 3 or p & 1])
print("x0 or x3:", [str(c) for c in minimize(t)], "vs", extensional_dnf(t).term_count, "minterms")
print(format_cover(minimize(t)))

# Exact and greedy covers on random 6-input functions; arity 4 is checked
# against the exhaustive union-of-cubes search.
rng = SplitMix64(6)
for _ in range(5):
    t = TruthTable(6, rng.below(1 << 64))
    print(f"random(6): exact {minimize(t).term_count}, greedy {minimize(t, 'greedy').term_count}")
t4 = TruthTable(4, rng.below(1 << 16))
print("random(4): exact", minimize(t4).term_count, "exhaustive", minimal_cover_size(t4))
