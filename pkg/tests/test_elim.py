import math

import pytest
from hypothesis import given, settings, strategies as st

from chainbench.boolfn import CapExceeded
from chainbench.elim import (CSV_COLUMNS, CorpusItem, ResourceCapExceeded, SimplifyLevel,
                             condition_b_report, eliminate_exists, eliminate_forall, evaluate_qbf,
                             iter_elimination, loglog_fit, report_csv_rows, simplify)
from chainbench.oracles import equivalent_matrices, qbf_brute_force
from chainbench.qbf import EXISTS, FORALL, ClauseSet, Qbf, count_width_clauses, random_qbf, size_metric

X, Y, Z = 1, 2, 3
S = ClauseSet([(X, Y), (-X, Z), (Y, Z)])


def test_forall_examples():
    assert eliminate_forall(S, X) == ClauseSet([(Y,), (Z,), (Y, Z)])
    assert eliminate_forall(ClauseSet([(X,)]), X).has_empty_clause()
    assert eliminate_forall(ClauseSet([(Y, Z)]), X) == ClauseSet([(Y, Z)])


def test_exists_examples():
    assert eliminate_exists(S, X) == ClauseSet([(Y, Z)])
    assert eliminate_exists(ClauseSet([(X, Y), (-X, -Y)]), X) == ClauseSet()
    assert eliminate_exists(ClauseSet([(Y, Z)]), X) == ClauseSet([(Y, Z)])


def test_simplify_examples():
    assert simplify(ClauseSet([(Y, X), (Y, -X)]), "L1") == ClauseSet([(Y,)])
    assert simplify(ClauseSet([(Y,), (Y, Z)]), "L1") == ClauseSet([(Y,)])
    assert simplify(ClauseSet([(Y, -Y), (Z,)]), "L0") == ClauseSet([(Z,)])


def test_l2_cap():
    wide = ClauseSet([tuple(range(1, 17))])
    with pytest.raises(CapExceeded):
        simplify(wide, SimplifyLevel("L2", l2_cap=8))
    with pytest.raises(ValueError):
        SimplifyLevel("L3")


@settings(max_examples=80, deadline=None)
@given(n=st.integers(2, 7), seed=st.integers(0, 2**32), width=st.integers(2, 3))
def test_levels_dominate_and_preserve_equivalence(n, seed, width):
    width = min(width, n)
    m = random_qbf(n, min(count_width_clauses(n, width), 1 + seed % 12), width, seed=seed).matrix
    sizes = [len(simplify(m, lv)) for lv in ("L0", "L1", "L2")]
    assert sizes[2] <= sizes[1] <= sizes[0]
    for lv in ("L0", "L1", "L2"):
        assert equivalent_matrices(m, simplify(m, lv), range(1, n + 1))


def test_evaluate_examples():
    t = evaluate_qbf(Qbf(((EXISTS, 1),), ClauseSet([(1,)])))
    assert t.verdict is True and len(t.steps) == 1
    assert evaluate_qbf(Qbf(((FORALL, 1),), ClauseSet([(1,)]))).verdict is False
    q = Qbf(((FORALL, 1), (EXISTS, 2)), ClauseSet([(1, 2), (-1, -2)]))
    assert evaluate_qbf(q).verdict is True and qbf_brute_force(q)


def test_early_exit_pads_trace():
    q = Qbf(((EXISTS, 1), (EXISTS, 2), (FORALL, 3)), ClauseSet([(3,), (1, 2)]))
    t = evaluate_qbf(q)
    assert t.verdict is False and t.early_exit and len(t.steps) == 3
    assert t.sizes() == [0, 0, 0] and t.steps[1].before.clauses == 0


def test_trace_records_sizes_before_and_after_simplification():
    q = random_qbf(6, 12, 3, seed=8)
    trace = evaluate_qbf(q, "L1")
    steps = list(iter_elimination(q, "L1"))
    for rec, s in zip(trace.steps, steps):
        assert (rec.before, rec.after_elim, rec.after_simp) == (
            size_metric(s.before), size_metric(s.after_elim), size_metric(s.after_simp))


def test_resource_cap_keeps_partial_trace():
    q = random_qbf(8, 30, 3, seed=2)
    with pytest.raises(ResourceCapExceeded) as info:
        evaluate_qbf(q, "L0", max_clauses=1)
    assert info.value.trace.capped and info.value.trace.steps


def test_loglog_fit():
    assert loglog_fit([3], [3]) is None
    slope, intercept, residual = loglog_fit([2, 4, 8, 16], [2, 4, 8, 16])
    assert math.isclose(slope, 1.0, abs_tol=1e-9) and abs(intercept) < 1e-9 and residual < 1e-18


def test_condition_b_report_rows():
    q = random_qbf(4, 6, 2, seed=1)
    corpus = [CorpusItem("a", q, 1), CorpusItem("b", q, 2)]
    rep = condition_b_report(corpus, "L1")
    a, b = rep["instances"]
    assert {k: v for k, v in a.items() if k not in ("instance_id", "seed")} == \
           {k: v for k, v in b.items() if k not in ("instance_id", "seed")}
    rows = list(report_csv_rows(rep))
    assert len(rows) == 2 * len(q.prefix) and all(len(r) == len(CSV_COLUMNS) for r in rows)
    single = condition_b_report(corpus[:1], "L1")
    assert single["aggregate"]["slope"] is None
