"""Brute-force reference procedures.

These are deliberately naive and do not import the elimination engine or
the minimizer's search code; tests compare the engines against them.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .boolfn import CapExceeded, TruthTable
from .qbf import FORALL, ClauseSet, Qbf

QBF_VAR_CAP = 20
EQUIV_VAR_CAP = 20
PURE_EXHAUSTION_ARITY = 4
DELEGATED_ARITY_CAP = 14


def _clause_true(clause, assignment: dict[int, bool]) -> bool:
    return any(assignment[abs(lit)] == (lit > 0) for lit in clause)


def _matrix_true(clauses, assignment: dict[int, bool]) -> bool:
    return all(_clause_true(c, assignment) for c in clauses)


def qbf_brute_force(qbf: Qbf, cap: int = QBF_VAR_CAP) -> bool:
    """Truth value of a closed QBF by recursive expansion of the prefix."""
    if len(qbf.prefix) > cap:
        raise CapExceeded(f"{len(qbf.prefix)} variables exceed the oracle cap {cap}")
    clauses = list(qbf.matrix)

    def go(i: int, assignment: dict[int, bool]) -> bool:
        if i == len(qbf.prefix):
            return _matrix_true(clauses, assignment)
        q, v = qbf.prefix[i]
        results = []
        for value in (True, False):
            assignment[v] = value
            results.append(go(i + 1, assignment))
        del assignment[v]
        return all(results) if q == FORALL else any(results)

    return go(0, {})


def equivalent_matrices(s1: ClauseSet, s2: ClauseSet, variables, cap: int = EQUIV_VAR_CAP) -> bool:
    """True iff both matrices agree on every assignment to ``variables``."""
    variables = sorted(set(variables))
    if len(variables) > cap:
        raise CapExceeded(f"{len(variables)} variables exceed the equivalence cap {cap}")
    for bits in product((False, True), repeat=len(variables)):
        a = dict(zip(variables, bits))
        if _matrix_true(s1, a) != _matrix_true(s2, a):
            return False
    return True


def matrix_table(clauses: ClauseSet, variables) -> TruthTable:
    """Truth table of a matrix; ``variables[0]`` is the most significant input bit."""
    variables = list(variables)
    m = len(variables)
    bits = 0
    for idx in range(1 << m):
        a = {v: bool(idx >> (m - 1 - k) & 1) for k, v in enumerate(variables)}
        if _matrix_true(clauses, a):
            bits |= 1 << idx
    return TruthTable(m, bits)


@lru_cache(maxsize=None)
def _union_distance(arity: int) -> np.ndarray:
    """For every set of points (as a 2^arity-bit mask), the fewest cubes whose union is exactly that set.

    Breadth-first search over unions of cubes: level k holds every set
    expressible as a union of k cubes.
    """
    n_points = 1 << arity
    cubes = []
    for pattern in product("01-", repeat=arity):
        mask = 0
        for idx in range(n_points):
            bits = format(idx, f"0{arity}b") if arity else ""
            if all(p == "-" or p == b for p, b in zip(pattern, bits)):
                mask |= 1 << idx
        cubes.append(mask)
    cubes = np.array(sorted(set(cubes)), dtype=np.int64)
    dist = np.full(1 << n_points, -1, dtype=np.int16)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        nxt = np.unique((frontier[:, None] | cubes[None, :]).ravel())
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = level
        frontier = nxt
    return dist


def minimal_cover_size(table: TruthTable, form: str = "dnf") -> int:
    """Fewest terms (``dnf``) or clauses (``cnf``) of any equivalent two-level form.

    Up to arity 4 this is a pure exhaustive search; above that (to arity 14)
    it defers to the exact prime-implicant minimizer.
    """
    if form not in ("dnf", "cnf"):
        raise ValueError(f"unknown form {form!r}")
    target = table if form == "dnf" else table.complement()
    if table.arity <= PURE_EXHAUSTION_ARITY:
        return int(_union_distance(table.arity)[target.bits])
    if table.arity > DELEGATED_ARITY_CAP:
        raise CapExceeded(f"arity {table.arity} above cap {DELEGATED_ARITY_CAP}")
    from .boolfn import minimize

    return minimize(target, "exact").term_count


def minimal_cnf_size_by_clause_search(table: TruthTable) -> int:
    """Fewest clauses of an equivalent CNF, by trying clause sets of increasing size.

    Independent of the cube-union search; only practical for arity <= 3.
    """
    m = table.arity
    clauses = []
    for pattern in product((0, 1, -1), repeat=m):
        # 1 = positive literal, -1 = negative literal, 0 = absent
        falsified = 0
        for idx in range(1 << m):
            bits = [(idx >> (m - 1 - k)) & 1 for k in range(m)]
            if all(p == 0 or (p == 1 and b == 0) or (p == -1 and b == 1) for p, b in zip(pattern, bits)):
                falsified |= 1 << idx
        clauses.append(falsified)
    off = table.complement().bits
    useful = sorted({c for c in clauses if c & ~off == 0})

    for k in range(len(useful) + 1):
        for combo in combinations(useful, k):
            acc = 0
            for c in combo:
                acc |= c
            if acc == off:
                return k
    raise AssertionError("unreachable: the full set of maxterms always works")
