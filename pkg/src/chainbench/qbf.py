"""QBF data model, QDIMACS I/O, clause partitioning and a seeded generator.

Literals are DIMACS-style signed integers: ``v`` is the positive literal of
variable ``v`` and ``-v`` its negation.  A clause is a tuple of literals in
canonical order (by variable, negative literal first); a :class:`ClauseSet`
is a deduplicated, sorted tuple of clauses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .rng import SplitMix64

Clause = tuple[int, ...]

FORALL = "a"
EXISTS = "e"


class QdimacsError(ValueError):
    """Malformed QDIMACS input; ``line`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class InfeasibleParameters(ValueError):
    pass


def literal_key(lit: int) -> tuple[int, int]:
    return (abs(lit), 1 if lit > 0 else 0)


def make_clause(lits: Iterable[int]) -> Clause:
    """Canonical clause: duplicate literals removed, sorted by (variable, polarity)."""
    out = set()
    for lit in lits:
        if lit == 0:
            raise ValueError("0 is not a literal")
        out.add(int(lit))
    return tuple(sorted(out, key=literal_key))


def is_tautology(clause: Clause) -> bool:
    seen = set(clause)
    return any(-lit in seen for lit in clause)


def clause_key(clause: Clause):
    return tuple(literal_key(lit) for lit in clause)


class ClauseSet:
    """Immutable CNF matrix in canonical order."""

    __slots__ = ("clauses", "_hash")

    def __init__(self, clauses: Iterable[Iterable[int]] = ()):
        canon = {make_clause(c) for c in clauses}
        self.clauses: tuple[Clause, ...] = tuple(sorted(canon, key=clause_key))
        self._hash = hash(self.clauses)

    @classmethod
    def contradiction(cls) -> "ClauseSet":
        return cls([()])

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __contains__(self, clause) -> bool:
        return make_clause(clause) in set(self.clauses)

    def __eq__(self, other) -> bool:
        return isinstance(other, ClauseSet) and self.clauses == other.clauses

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("(" + " ".join(map(str, c)) + ")" for c in self.clauses)
        return f"ClauseSet[{body}]"

    def has_empty_clause(self) -> bool:
        return bool(self.clauses) and self.clauses[0] == ()

    def variables(self) -> list[int]:
        return sorted({abs(lit) for c in self.clauses for lit in c})

    def evaluate(self, assignment: dict[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class SizeMetric:
    clauses: int
    literals: int


def size_metric(clauses: ClauseSet) -> SizeMetric:
    return SizeMetric(len(clauses), sum(len(c) for c in clauses))


@dataclass(frozen=True)
class Partition:
    positive: tuple[Clause, ...]
    negative: tuple[Clause, ...]
    free: tuple[Clause, ...]
    tautological: tuple[Clause, ...]


def partition(clauses: ClauseSet, var: int) -> Partition:
    """Split clauses by occurrence of ``var``.

    Clauses holding both ``var`` and ``-var`` are satisfied whatever the value
    of ``var``; they are returned separately in ``tautological``.
    """
    pos, neg, free, taut = [], [], [], []
    for c in clauses:
        has_pos = var in c
        has_neg = -var in c
        if has_pos and has_neg:
            taut.append(c)
        elif has_pos:
            pos.append(c)
        elif has_neg:
            neg.append(c)
        else:
            free.append(c)
    return Partition(tuple(pos), tuple(neg), tuple(free), tuple(taut))


def strip_literal(clause: Clause, var: int) -> Clause:
    return tuple(lit for lit in clause if abs(lit) != var)


@dataclass(frozen=True)
class Qbf:
    """Closed prenex QBF: ``prefix`` lists ``(quantifier, variable)`` outermost first."""

    prefix: tuple[tuple[str, int], ...]
    matrix: ClauseSet
    num_vars: int = 0

    def __post_init__(self):
        prefix = tuple((q, int(v)) for q, v in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        seen = set()
        for q, v in prefix:
            if q not in (FORALL, EXISTS):
                raise ValueError(f"unknown quantifier {q!r}")
            if v < 1:
                raise ValueError(f"bad variable id {v}")
            if v in seen:
                raise ValueError(f"variable {v} quantified twice")
            seen.add(v)
        free = [v for v in self.matrix.variables() if v not in seen]
        if free:
            raise ValueError(f"free variables {free}")
        top = max([v for _, v in prefix] + self.matrix.variables() + [0])
        if self.num_vars < top:
            object.__setattr__(self, "num_vars", top)

    @property
    def variables(self) -> list[int]:
        return [v for _, v in self.prefix]

    def alternation_pattern(self) -> str:
        """Quantifier blocks outermost first, e.g. ``'aea'``."""
        out = ""
        for q, _ in self.prefix:
            if not out or out[-1] != q:
                out += q
        return out

    def strictly_alternating(self) -> bool:
        qs = [q for q, _ in self.prefix]
        return all(a != b for a, b in zip(qs, qs[1:]))

    def input_size(self) -> int:
        """Instance size used for growth fits: matrix literal count plus prefix length."""
        return size_metric(self.matrix).literals + len(self.prefix)


def parse_qdimacs(text: str) -> Qbf:
    """Parse the QDIMACS dialect used throughout the package.

    Comments start with ``c``; one ``p cnf V C`` line; then ``a``/``e``
    lines; then one clause per line, each terminated by ``0``.
    """
    header = None
    prefix: list[tuple[str, int]] = []
    clauses: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        head = tokens[0]
        if head == "p":
            if header is not None:
                raise QdimacsError("second problem line", lineno)
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise QdimacsError("expected 'p cnf <vars> <clauses>'", lineno)
            try:
                header = (int(tokens[2]), int(tokens[3]))
            except ValueError:
                raise QdimacsError("non-integer in problem line", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise QdimacsError("negative count in problem line", lineno)
            continue
        if header is None:
            raise QdimacsError("content before problem line", lineno)
        if head in (FORALL, EXISTS):
            if clauses:
                raise QdimacsError("quantifier line after clauses", lineno)
            nums = _ints(tokens[1:], lineno)
            if not nums or nums[-1] != 0 or 0 in nums[:-1]:
                raise QdimacsError("quantifier line must end with a single 0", lineno)
            for v in nums[:-1]:
                if v <= 0 or v > header[0]:
                    raise QdimacsError(f"bad quantified variable {v}", lineno)
                if any(v == w for _, w in prefix):
                    raise QdimacsError(f"variable {v} quantified twice", lineno)
                prefix.append((head, v))
            continue
        nums = _ints(tokens, lineno)
        if nums[-1] != 0 or 0 in nums[:-1]:
            raise QdimacsError("clause must be terminated by 0", lineno)
        lits = nums[:-1]
        bound = {v for _, v in prefix}
        for lit in lits:
            if abs(lit) > header[0]:
                raise QdimacsError(f"literal {lit} exceeds declared variable count", lineno)
            if abs(lit) not in bound:
                raise QdimacsError(f"free variable {abs(lit)}", lineno)
        clauses.append(lits)
    if header is None:
        raise QdimacsError("missing problem line")
    if len(clauses) != header[1]:
        raise QdimacsError(f"problem line declares {header[1]} clauses, found {len(clauses)}")
    return Qbf(tuple(prefix), ClauseSet(clauses), header[0])


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise QdimacsError("non-integer token", lineno) from None


def emit_qdimacs(qbf: Qbf, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {qbf.num_vars} {len(qbf.matrix)}")
    block_q, block = None, []
    for q, v in qbf.prefix:
        if q != block_q and block:
            lines.append(f"{block_q} {' '.join(map(str, block))} 0")
            block = []
        block_q = q
        block.append(v)
    if block:
        lines.append(f"{block_q} {' '.join(map(str, block))} 0")
    for c in qbf.matrix:
        lines.append(" ".join(map(str, c + (0,))))
    return "\n".join(lines) + "\n"


def parse_alternation(spec: str) -> tuple[str, int]:
    """``'strict'`` -> ('strict', 1); ``'blocks:3'`` -> ('blocks', 3)."""
    if spec == "strict":
        return ("strict", 1)
    kind, _, k = spec.partition(":")
    if kind == "blocks" and k.isdigit() and int(k) >= 1:
        return ("blocks", int(k))
    raise ValueError(f"bad alternation {spec!r}; use 'strict' or 'blocks:k'")


def _prefix_for(n_vars: int, alternation: str, innermost: str) -> tuple[tuple[str, int], ...]:
    _, k = parse_alternation(alternation)
    other = FORALL if innermost == EXISTS else EXISTS
    prefix = []
    for v in range(1, n_vars + 1):
        block_from_inside = (n_vars - v) // k
        prefix.append((innermost if block_from_inside % 2 == 0 else other, v))
    return tuple(prefix)


def _unrank_clause(index: int, n_vars: int, width: int) -> Clause:
    n_sign = 1 << width
    comb_index, signs = divmod(index, n_sign)
    # lexicographic unranking of width-subsets of 1..n_vars
    chosen = []
    v = 1
    remaining = width
    while remaining:
        block = math.comb(n_vars - v, remaining - 1)
        if comb_index < block:
            chosen.append(v)
            remaining -= 1
        else:
            comb_index -= block
        v += 1
    lits = [var if (signs >> i) & 1 else -var for i, var in enumerate(chosen)]
    return make_clause(lits)


def count_width_clauses(n_vars: int, width: int) -> int:
    """Distinct non-tautological clauses with exactly ``width`` variables."""
    return math.comb(n_vars, width) << width


def random_qbf(n_vars: int, n_clauses: int, clause_width: int, alternation: str = "strict",
               seed: int = 0, innermost: str = EXISTS) -> Qbf:
    """Seeded random QBF over ``x1..xn`` with ``x_n`` innermost.

    Clauses are drawn uniformly without replacement from all width-exact
    non-tautological clauses.
    """
    if not 1 <= clause_width <= n_vars:
        raise InfeasibleParameters("clause width must be in 1..n_vars")
    total = count_width_clauses(n_vars, clause_width)
    if n_clauses > total:
        raise InfeasibleParameters(
            f"{n_clauses} clauses requested but only {total} distinct width-{clause_width} "
            f"clauses exist over {n_vars} variables")
    rng = SplitMix64(seed)
    picks = rng.sample_distinct(total, n_clauses)
    matrix = ClauseSet(_unrank_clause(i, n_vars, clause_width) for i in picks)
    return Qbf(_prefix_for(n_vars, alternation, innermost), matrix, n_vars)


def all_width_clauses(n_vars: int, width: int) -> list[Clause]:
    """Every width-exact clause (reference enumeration used by tests)."""
    out = []
    for vars_ in combinations(range(1, n_vars + 1), width):
        for signs in range(1 << width):
            out.append(make_clause(v if (signs >> i) & 1 else -v for i, v in enumerate(vars_)))
    return out
