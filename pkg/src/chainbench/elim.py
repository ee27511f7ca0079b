"""Innermost-first quantifier elimination on CNF matrices, with size tracing."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .boolfn import EXACT_ARITY_CAP, CapExceeded, TruthTable, _cube_mask, minimize
from .qbf import (FORALL, ClauseSet, Qbf, SizeMetric, is_tautology, make_clause,
                  partition, size_metric, strip_literal)

LEVELS = ("L0", "L1", "L2")
DEFAULT_MAX_CLAUSES = 1 << 20


@dataclass(frozen=True)
class SimplifyLevel:
    level: str = "L1"
    l2_cap: int = EXACT_ARITY_CAP

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown simplification level {self.level!r}")


def _level(level) -> SimplifyLevel:
    return level if isinstance(level, SimplifyLevel) else SimplifyLevel(level)


def _finish(clauses) -> ClauseSet:
    out = ClauseSet(clauses)
    if out.has_empty_clause():
        return ClauseSet.contradiction()
    return out


def eliminate_forall(clauses: ClauseSet, var: int) -> ClauseSet:
    """``forall var. S`` as a CNF: drop every ``var`` literal from every clause."""
    part = partition(clauses, var)
    out = list(part.free)
    out.extend(strip_literal(c, var) for c in part.positive)
    out.extend(strip_literal(c, var) for c in part.negative)
    return _finish(out)


def eliminate_exists(clauses: ClauseSet, var: int) -> ClauseSet:
    """``exists var. S`` as a CNF: free clauses plus all non-tautological pairwise resolvents."""
    part = partition(clauses, var)
    out = list(part.free)
    pos = [strip_literal(c, var) for c in part.positive]
    neg = [strip_literal(c, var) for c in part.negative]
    for a in pos:
        for b in neg:
            merged = make_clause(a + b)
            if not is_tautology(merged):
                out.append(merged)
    return _finish(out)


def _l0(clauses: ClauseSet) -> ClauseSet:
    return _finish(c for c in clauses if not is_tautology(c))


def _subsumption(clauses: list[frozenset]) -> list[frozenset]:
    keep: list[frozenset] = []
    for c in sorted(clauses, key=len):
        if not any(k <= c for k in keep):
            keep.append(c)
    return keep


def _l1(clauses: ClauseSet) -> ClauseSet:
    current = {frozenset(c) for c in _l0(clauses)}
    while True:
        reduced = _subsumption(list(current))
        merged = set(reduced)
        changed = len(reduced) != len(current)
        # (phi or x), (phi or -x)  ->  phi
        index = set(reduced)
        for c in reduced:
            for lit in c:
                if lit > 0:
                    partner = (c - {lit}) | {-lit}
                    if partner in index:
                        merged.discard(c)
                        merged.discard(partner)
                        merged.add(c - {lit})
                        changed = True
        current = merged
        if not changed:
            break
    return _finish(tuple(c) for c in current)


def _l2(clauses: ClauseSet, cap: int) -> ClauseSet:
    variables = clauses.variables()
    if len(variables) > cap:
        raise CapExceeded(f"L2 simplification capped at {cap} variables, got {len(variables)}")
    if clauses.has_empty_clause():
        return ClauseSet.contradiction()
    m = len(variables)
    # falsifying assignments: the complement of the matrix, as a DNF over variables (MSB first)
    off = 0
    pos = {v: m - 1 - k for k, v in enumerate(variables)}
    for c in clauses:
        # points falsifying clause c form a cube
        care = val = 0
        for lit in c:
            bit = 1 << pos[abs(lit)]
            care |= bit
            if lit < 0:
                val |= bit
        off |= _cube_mask(m, care, val)
    cover = minimize(TruthTable(m, off), "exact", cap=cap)
    out = []
    for cube in cover:
        lits = []
        for k, v in enumerate(variables):
            bit = 1 << (m - 1 - k)
            if cube.care & bit:
                # the clause is the negation of the cube
                lits.append(-v if cube.val & bit else v)
        out.append(lits)
    return _finish(out)


def simplify(clauses: ClauseSet, level="L1") -> ClauseSet:
    """Equivalence-preserving simplification.

    L0 removes tautologies and duplicates.  L1 also removes subsumed
    clauses and merges complementary pairs to a fixpoint.  L2 replaces the
    matrix by a minimum-clause equivalent CNF.
    """
    lv = _level(level)
    if lv.level == "L0":
        return _l0(clauses)
    if lv.level == "L1":
        return _l1(clauses)
    return _l2(_l1(clauses), lv.l2_cap)


@dataclass(frozen=True)
class StepRecord:
    index: int
    quantifier: str
    variable: int
    before: SizeMetric
    after_elim: SizeMetric
    after_simp: SizeMetric


@dataclass
class EliminationTrace:
    steps: list[StepRecord] = field(default_factory=list)
    verdict: bool | None = None
    early_exit: bool = False
    capped: bool = False

    def sizes(self, metric: str = "literals", stage: str = "after_simp") -> list[int]:
        return [getattr(getattr(s, stage), metric) for s in self.steps]


class ResourceCapExceeded(RuntimeError):
    def __init__(self, message: str, trace: EliminationTrace):
        super().__init__(message)
        self.trace = trace


def evaluate_qbf(qbf: Qbf, level="L1", max_clauses: int = DEFAULT_MAX_CLAUSES) -> EliminationTrace:
    """Eliminate quantifiers innermost first, simplifying after each step.

    Stops early once the empty clause appears; the remaining steps are
    recorded with zero sizes so the trace always has one record per
    quantifier.
    """
    lv = _level(level)
    trace = EliminationTrace()
    matrix = qbf.matrix
    zero = SizeMetric(0, 0)
    order = list(reversed(qbf.prefix))
    for i, (q, v) in enumerate(order, start=1):
        if trace.early_exit:
            trace.steps.append(StepRecord(i, q, v, zero, zero, zero))
            continue
        before = size_metric(matrix)
        matrix = eliminate_forall(matrix, v) if q == FORALL else eliminate_exists(matrix, v)
        after_elim = size_metric(matrix)
        if after_elim.clauses > max_clauses:
            trace.steps.append(StepRecord(i, q, v, before, after_elim, after_elim))
            trace.capped = True
            raise ResourceCapExceeded(
                f"{after_elim.clauses} clauses after eliminating x{v} exceed cap {max_clauses}", trace)
        matrix = simplify(matrix, lv)
        trace.steps.append(StepRecord(i, q, v, before, after_elim, size_metric(matrix)))
        if matrix.has_empty_clause():
            trace.verdict = False
            trace.early_exit = True
    if trace.verdict is None:
        if matrix.has_empty_clause():
            trace.verdict = False
        elif len(matrix) == 0:
            trace.verdict = True
        else:
            raise AssertionError("variables remain after all eliminations")
    return trace


@dataclass(frozen=True)
class MatrixStep:
    quantifier: str
    variable: int
    before: ClauseSet
    after_elim: ClauseSet
    after_simp: ClauseSet


def iter_elimination(qbf: Qbf, level="L1"):
    """Yield the matrices around each elimination step, stopping after a contradiction."""
    lv = _level(level)
    matrix = qbf.matrix
    for q, v in reversed(qbf.prefix):
        before = matrix
        elim = eliminate_forall(matrix, v) if q == FORALL else eliminate_exists(matrix, v)
        matrix = simplify(elim, lv)
        yield MatrixStep(q, v, before, elim, matrix)
        if matrix.has_empty_clause():
            return


# ---- condition-B reporting -------------------------------------------------

@dataclass(frozen=True)
class CorpusItem:
    instance_id: str
    qbf: Qbf
    seed: int | None = None
    alternation: str = ""


@dataclass
class InstanceRow:
    item: CorpusItem
    level: str
    n: int
    q: int
    trace: EliminationTrace

    @property
    def max_size(self) -> int:
        return max(self.trace.sizes(), default=0)

    @property
    def max_clauses(self) -> int:
        return max(self.trace.sizes("clauses"), default=0)

    @property
    def monotone_after_peak(self) -> bool:
        s = self.trace.sizes()
        if not s:
            return True
        peak = s.index(max(s))
        return all(a >= b for a, b in zip(s[peak:], s[peak + 1:]))


def run_instance(item: CorpusItem, level="L1", max_clauses: int = DEFAULT_MAX_CLAUSES) -> InstanceRow:
    lv = _level(level)
    try:
        trace = evaluate_qbf(item.qbf, lv, max_clauses)
    except ResourceCapExceeded as exc:
        trace = exc.trace
    return InstanceRow(item, lv.level, item.qbf.input_size(), len(item.qbf.prefix), trace)


def loglog_fit(ns: Sequence[float], sizes: Sequence[float]):
    """Least-squares line through ``(log n, log size)``; ``None`` when underdetermined.

    Returns ``(slope, intercept, residual)`` with ``residual`` the residual
    sum of squares.
    """
    pts = [(math.log(n), math.log(s)) for n, s in zip(ns, sizes) if n > 0 and s > 0]
    if len(pts) < 2 or len({x for x, _ in pts}) < 2:
        return None
    k = len(pts)
    mx = sum(x for x, _ in pts) / k
    my = sum(y for _, y in pts) / k
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    sxy = sum((x - mx) * (y - my) for x, y in pts)
    slope = sxy / sxx
    intercept = my - slope * mx
    rss = sum((y - (intercept + slope * x)) ** 2 for x, y in pts)
    return slope, intercept, rss


def _alternation_label(item: CorpusItem) -> str:
    return item.alternation or item.qbf.alternation_pattern()


def condition_b_report(corpus: Sequence, level="L1", max_clauses: int = DEFAULT_MAX_CLAUSES,
                       rows: Sequence[InstanceRow] | None = None) -> dict:
    """Per-instance size traces plus a log-log growth fit of peak size against input size.

    ``corpus`` holds :class:`CorpusItem` or bare :class:`Qbf` values.
    Precomputed ``rows`` (same order) may be passed to skip evaluation.
    """
    items = [c if isinstance(c, CorpusItem) else CorpusItem(f"q{i:05d}", c)
             for i, c in enumerate(corpus)]
    if rows is None:
        rows = [run_instance(it, level, max_clauses) for it in items]
    instances = []
    for row in rows:
        t = row.trace
        instances.append({
            "instance_id": row.item.instance_id,
            "seed": row.item.seed,
            "n_vars": row.item.qbf.num_vars,
            "n_clauses": len(row.item.qbf.matrix),
            "alternation": _alternation_label(row.item),
            "level": row.level,
            "n": row.n,
            "q": row.q,
            "sizes": t.sizes(),
            "max_size": row.max_size,
            "max_clauses": row.max_clauses,
            "verdict": None if t.verdict is None else ("T" if t.verdict else "F"),
            "early_exit": t.early_exit,
            "capped": t.capped,
            "monotone_after_peak": row.monotone_after_peak,
            "steps": [_step_dict(s) for s in t.steps],
        })
    usable = [r for r in rows if not r.trace.capped]
    fit = loglog_fit([r.n for r in usable], [r.max_size for r in usable])
    aggregate = {
        "instances": len(rows),
        "slope": None if fit is None else fit[0],
        "intercept": None if fit is None else fit[1],
        "residual": None if fit is None else fit[2],
        "fit_defined": fit is not None,
        "monotone_after_peak_count": sum(1 for r in rows if r.monotone_after_peak),
        "capped_count": sum(1 for r in rows if r.trace.capped),
    }
    return {"instances": instances, "aggregate": aggregate}


def _step_dict(s: StepRecord) -> dict:
    return {
        "step_index": s.index,
        "quantifier": s.quantifier,
        "variable": s.variable,
        "clauses_before": s.before.clauses,
        "lits_before": s.before.literals,
        "clauses_after_elim": s.after_elim.clauses,
        "lits_after_elim": s.after_elim.literals,
        "clauses_after_simp": s.after_simp.clauses,
        "lits_after_simp": s.after_simp.literals,
    }


CSV_COLUMNS = ("instance_id", "seed", "n_vars", "n_clauses", "alternation", "level", "step_index",
               "quantifier", "variable", "clauses_before", "lits_before", "clauses_after_elim",
               "lits_after_elim", "clauses_after_simp", "lits_after_simp", "verdict", "capped")


def report_csv_rows(report: dict):
    """Flatten a report to one row per elimination step, in ``CSV_COLUMNS`` order."""
    for inst in report["instances"]:
        for step in inst["steps"]:
            row = {k: inst.get(k) for k in ("instance_id", "seed", "n_vars", "n_clauses",
                                             "alternation", "level", "verdict", "capped")}
            row.update(step)
            yield [row[c] for c in CSV_COLUMNS]
