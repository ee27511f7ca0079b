from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from chainbench.boolfn import (CapExceeded, Cover, Cube, TruthTable, best_cover_with_cycles,
                               extensional_dnf, format_cover, format_table, minimize, parse_cover,
                               parse_table, prime_implicants)
from chainbench.oracles import (equivalent_matrices, matrix_table, minimal_cnf_size_by_clause_search,
                                minimal_cover_size, qbf_brute_force)
from chainbench.qbf import EXISTS, FORALL, ClauseSet, Qbf

REACH = TruthTable.from_points(6, ["000010", "001100"])


def test_extensional_dnf():
    assert extensional_dnf(REACH).term_count == 2
    assert all(c.literal_count == 6 for c in extensional_dnf(REACH))
    assert extensional_dnf(TruthTable.constant(3, False)).term_count == 0
    assert extensional_dnf(TruthTable.constant(2, True)).term_count == 4


def test_minimize_examples():
    assert minimize(TruthTable.parity(3)).term_count == 4
    cube = Cube.parse("1-0-")
    assert minimize(Cover(4, [cube]).to_table()).cubes == (cube,)
    assert [str(c) for c in minimize(TruthTable.constant(3, True))] == ["---"]
    with pytest.raises(CapExceeded):
        minimize(TruthTable(15, 1), "exact")


def test_parity_primes_are_minterms():
    for m in (2, 3, 4, 5):
        primes = prime_implicants(m, TruthTable.parity(m).bits)
        assert len(primes) == 1 << (m - 1) and all(p.literal_count == m for p in primes)


@settings(max_examples=150, deadline=None)
@given(arity=st.integers(1, 6), data=st.data())
def test_minimize_modes_are_equivalent_covers(arity, data):
    bits = data.draw(st.integers(0, (1 << (1 << arity)) - 1))
    t = TruthTable(arity, bits)
    exact, greedy = minimize(t, "exact"), minimize(t, "greedy")
    assert exact.to_table() == t and greedy.to_table() == t
    assert exact.term_count <= greedy.term_count
    if arity <= 4:
        assert exact.term_count == minimal_cover_size(t)


def test_exact_ties_are_deterministic():
    t = TruthTable.from_points(3, ["000", "001", "011", "111", "110", "100"])
    assert minimize(t) == minimize(TruthTable(3, t.bits))
    assert minimize(t).term_count == 3


def test_cycle_selection_completes_subcube():
    # {00-} minus one point; the missing point closes the cube
    reach = TruthTable.from_points(3, ["000"])
    chosen, cover = best_cover_with_cycles(reach, [["001"], ["110"]])
    assert chosen == (0,) and [str(c) for c in cover] == ["00-"]
    none, plain = best_cover_with_cycles(reach, [])
    assert none == () and plain == minimize(reach)
    isolated, cov = best_cover_with_cycles(reach, [["111"]])
    assert isolated == () and cov.term_count == 1


def test_greedy_cycle_selection_never_worse_than_empty():
    reach = TruthTable.from_points(4, ["0000", "0011"])
    cycles = [["0001"], ["0010"], ["1111", "1110"]]
    _, greedy = best_cover_with_cycles(reach, cycles, search="greedy")
    _, exact = best_cover_with_cycles(reach, cycles)
    assert exact.cost() <= greedy.cost() <= minimize(reach).cost()


def test_table_and_cover_files_round_trip():
    t = TruthTable(7, 0x1234_5678_9ABC_DEF0_0FED_CBA9_8765_4321)
    assert parse_table(format_table(t)) == t
    c = minimize(t)
    assert parse_cover(format_cover(c)) == c
    assert parse_cover("arity 2\n*\n") == Cover(2, [Cube.parse("--")])
    for bad in ("arity 2\n010\n", "nope\n", "arity 2\nv0 !v0\n", "arity 2\nv5\n"):
        with pytest.raises(ValueError):
            (parse_table if "010" in bad or "nope" in bad else parse_cover)(bad)


# ---- oracles -----------------------------------------------------------------------------

def test_qbf_oracle_examples():
    assert qbf_brute_force(Qbf(((EXISTS, 1),), ClauseSet([(1,)])))
    assert qbf_brute_force(Qbf(((FORALL, 1), (EXISTS, 2)), ClauseSet([(1, 2), (-1, -2)])))
    assert not qbf_brute_force(Qbf(((FORALL, 1), (FORALL, 2)), ClauseSet([(1, 2)])))


def test_equivalence_oracle_examples():
    y, x = 2, 1
    assert equivalent_matrices(ClauseSet([(y, x), (y, -x)]), ClauseSet([(y,)]), [1, 2])
    assert not equivalent_matrices(ClauseSet(), ClauseSet.contradiction(), [1])
    s = ClauseSet([(1, -2)])
    assert equivalent_matrices(s, s, [1, 2])


def test_minimal_cover_oracles_agree_at_arity_three():
    for bits in range(256):
        t = TruthTable(3, bits)
        assert minimal_cover_size(t, "cnf") == minimal_cnf_size_by_clause_search(t)


def test_minimal_cover_oracle_examples():
    assert minimal_cover_size(TruthTable.parity(4)) == 8
    assert minimal_cover_size(TruthTable.constant(4, False)) == 0
    assert minimal_cover_size(TruthTable.constant(4, False), "cnf") == 1


def test_matrix_table_orders_variables_msb_first():
    t = matrix_table(ClauseSet([(1,)]), [1, 2])
    assert [t(p) for p in ("00", "01", "10", "11")] == [0, 0, 1, 1]


def test_cube_union_search_brute_force_at_arity_two():
    cubes = [Cube.parse("".join(p)).minterm_mask() for p in
             (a + b for a in "01-" for b in "01-")]
    for bits in range(16):
        best = next(k for k in range(5) if any(
            _union(c) == bits for c in combinations(cubes, k)))
        assert minimal_cover_size(TruthTable(2, bits)) == best


def _union(cs):
    acc = 0
    for c in cs:
        acc |= c
    return acc
