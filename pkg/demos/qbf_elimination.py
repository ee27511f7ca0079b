"""Quantifier elimination on a small QBF, step by step.

Run: python demos/qbf_elimination.py
"""
from chainbench.elim import evaluate_qbf, iter_elimination
from chainbench.oracles import qbf_brute_force
from chainbench.qbf import emit_qdimacs, parse_qdimacs, random_qbf

# A two-variable formula: for every x1 there is an x2 different from it.
formula = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n")
print(emit_qdimacs(formula))

# Elimination runs innermost first.  Each step shows the matrix before,
# right after the quantifier rule, and after simplification.
for step in iter_elimination(formula, "L1"):
    print(f"eliminate {step.quantifier} x{step.variable}:",
          list(step.before), "->", list(step.after_elim), "->", list(step.after_simp))
print("verdict:", evaluate_qbf(formula).verdict, "| oracle:", qbf_brute_force(formula))

# On a random instance the three simplification levels give different
# size profiles but the same verdict.
q = random_qbf(8, 16, 3, "strict", seed=42)
for level in ("L0", "L1", "L2"):
    trace = evaluate_qbf(q, level)
    print(f"{level}: verdict={trace.verdict} literals after each step={trace.sizes()}")
print("oracle:", qbf_brute_force(q))
