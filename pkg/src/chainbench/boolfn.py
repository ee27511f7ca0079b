"""Truth tables, cubes and two-level (DNF) minimization.

Inputs are bit strings read left to right; variable ``i`` is the ``i``-th
character, and the table index is the string read as a binary number, so
``v0`` is the most significant bit.  Internally a cube is the pair
``(care, val)`` of index-bit masks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

EXACT_ARITY_CAP = 14
CYCLE_SELECTION_CAP = 16


class CapExceeded(ValueError):
    """An exhaustive procedure was asked to run past its configured size cap."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _index(point, arity: int) -> int:
    if isinstance(point, str):
        if len(point) != arity:
            raise ValueError(f"point {point!r} does not have arity {arity}")
        return int(point, 2)
    if not 0 <= point < 1 << arity:
        raise ValueError(f"index {point} out of range for arity {arity}")
    return int(point)


@dataclass(frozen=True)
class TruthTable:
    arity: int
    bits: int  # bit i holds f(i)

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError("arity must be nonnegative")
        if self.bits >> (1 << self.arity):
            raise ValueError("table has bits beyond 2^arity")

    @classmethod
    def from_points(cls, arity: int, points: Iterable) -> "TruthTable":
        bits = 0
        for p in points:
            bits |= 1 << _index(p, arity)
        return cls(arity, bits)

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "TruthTable":
        n = len(values)
        arity = n.bit_length() - 1
        if n != 1 << arity:
            raise ValueError("value count must be a power of two")
        bits = 0
        for i, v in enumerate(values):
            if v not in (0, 1, True, False):
                raise ValueError(f"non-boolean value {v!r}")
            if v:
                bits |= 1 << i
        return cls(arity, bits)

    @classmethod
    def constant(cls, arity: int, value: bool) -> "TruthTable":
        return cls(arity, (1 << (1 << arity)) - 1 if value else 0)

    @classmethod
    def parity(cls, arity: int) -> "TruthTable":
        return cls.from_points(arity, (i for i in range(1 << arity) if _popcount(i) % 2))

    @property
    def size(self) -> int:
        return 1 << self.arity

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def __call__(self, point) -> int:
        return (self.bits >> _index(point, self.arity)) & 1

    def values(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.size)]

    def on_set(self) -> list[int]:
        return [i for i in range(self.size) if (self.bits >> i) & 1]

    def count(self) -> int:
        return _popcount(self.bits)

    def complement(self) -> "TruthTable":
        return TruthTable(self.arity, self.full_mask & ~self.bits)

    def __or__(self, other: "TruthTable") -> "TruthTable":
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        return TruthTable(self.arity, self.bits | other.bits)


class Cube:
    """Conjunctive term over ``arity`` variables."""

    __slots__ = ("arity", "care", "val")

    def __init__(self, arity: int, care: int, val: int):
        self.arity = arity
        self.care = care
        self.val = val & care

    @classmethod
    def parse(cls, text: str) -> "Cube":
        """From a pattern such as ``'1-0'`` (``-`` is don't-care)."""
        arity = len(text)
        care = val = 0
        for i, ch in enumerate(text):
            bit = 1 << (arity - 1 - i)
            if ch == "1":
                care |= bit
                val |= bit
            elif ch == "0":
                care |= bit
            elif ch != "-":
                raise ValueError(f"bad cube character {ch!r}")
        return cls(arity, care, val)

    @classmethod
    def minterm(cls, arity: int, point) -> "Cube":
        full = (1 << arity) - 1
        return cls(arity, full, _index(point, arity))

    def __str__(self) -> str:
        out = []
        for i in range(self.arity):
            bit = 1 << (self.arity - 1 - i)
            out.append("-" if not self.care & bit else ("1" if self.val & bit else "0"))
        return "".join(out)

    def __repr__(self) -> str:
        return f"Cube({str(self)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Cube) and (self.arity, self.care, self.val) == (
            other.arity, other.care, other.val)

    def __hash__(self) -> int:
        return hash((self.arity, self.care, self.val))

    @property
    def literal_count(self) -> int:
        return _popcount(self.care)

    @property
    def encoding(self) -> str:
        """Two bits per variable: ``00`` don't-care, ``10`` negative, ``11`` positive."""
        return "".join({"-": "00", "0": "10", "1": "11"}[ch] for ch in str(self))

    def contains(self, point) -> bool:
        return (_index(point, self.arity) & self.care) == self.val

    def minterm_mask(self) -> int:
        """Bitmask over table indices covered by this cube."""
        return _cube_mask(self.arity, self.care, self.val)


def _cube_mask(arity: int, care: int, val: int) -> int:
    mask = 1 << val
    for b in range(arity):
        if not care >> b & 1:
            mask |= mask << (1 << b)
    return mask


def cube_order_key(cube: Cube) -> str:
    return cube.encoding


class Cover:
    """Disjunction of distinct cubes, kept in canonical (encoding) order."""

    __slots__ = ("arity", "cubes")

    def __init__(self, arity: int, cubes: Iterable[Cube] = ()):
        self.arity = arity
        uniq = set(cubes)
        for c in uniq:
            if c.arity != arity:
                raise ValueError("cube arity mismatch")
        self.cubes: tuple[Cube, ...] = tuple(sorted(uniq, key=cube_order_key))

    def __len__(self) -> int:
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cover) and (self.arity, self.cubes) == (other.arity, other.cubes)

    def __repr__(self) -> str:
        return f"Cover({[str(c) for c in self.cubes]})"

    @property
    def term_count(self) -> int:
        return len(self.cubes)

    @property
    def literal_count(self) -> int:
        return sum(c.literal_count for c in self.cubes)

    def cost(self) -> tuple[int, int]:
        return (self.term_count, self.literal_count)

    def __call__(self, point) -> int:
        idx = _index(point, self.arity)
        return int(any((idx & c.care) == c.val for c in self.cubes))

    def to_table(self) -> TruthTable:
        bits = 0
        for c in self.cubes:
            bits |= c.minterm_mask()
        return TruthTable(self.arity, bits)


def extensional_dnf(table: TruthTable) -> Cover:
    """One full-arity term per true point."""
    return Cover(table.arity, (Cube.minterm(table.arity, i) for i in table.on_set()))


def prime_implicants(arity: int, on: int, dc: int = 0) -> list[Cube]:
    """All prime implicants of ``on | dc`` by iterated pairwise merging."""
    full = (1 << arity) - 1
    points = on | dc
    current = {(full, i) for i in range(1 << arity) if points >> i & 1}
    primes: set[tuple[int, int]] = set()
    while current:
        merged: set[tuple[int, int]] = set()
        used: set[tuple[int, int]] = set()
        for care, val in current:
            b = care
            while b:
                bit = b & -b
                b ^= bit
                if not val & bit:
                    partner = (care, val | bit)
                    if partner in current:
                        merged.add((care & ~bit, val))
                        used.add((care, val))
                        used.add(partner)
        primes.update(current - used)
        current = merged
    return sorted((Cube(arity, c, v) for c, v in primes), key=cube_order_key)


def minimize(table: TruthTable, mode: str = "exact", dont_care: TruthTable | None = None,
             cap: int = EXACT_ARITY_CAP) -> Cover:
    """Two-level minimization.

    ``exact`` returns a cover with the fewest terms, then fewest literals,
    then the lexicographically least sorted cube encodings.  ``greedy``
    returns an irredundant prime cover.
    """
    arity = table.arity
    dc = dont_care.bits & ~table.bits if dont_care is not None else 0
    if mode == "exact" and arity > cap:
        raise CapExceeded(f"exact minimization capped at arity {cap}, got {arity}")
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    on = table.bits
    if not on:
        return Cover(arity)
    primes = prime_implicants(arity, on, dc)
    coverage = [p.minterm_mask() & on for p in primes]
    if mode == "exact":
        chosen = _exact_cover(primes, coverage, on)
    else:
        chosen = _greedy_cover(primes, coverage, on)
    return Cover(arity, (primes[i] for i in chosen))


def _essentials(coverage: list[int], on: int) -> tuple[list[int], int]:
    """Indices of primes that are the only cover of some minterm, and what remains uncovered."""
    essential = []
    covered = 0
    # minterms covered exactly once
    once = 0
    twice = 0
    for cov in coverage:
        twice |= once & cov
        once |= cov
    unique = once & ~twice & on
    for i, cov in enumerate(coverage):
        if cov & unique:
            essential.append(i)
            covered |= cov
    return essential, on & ~covered


def _exact_cover(primes: list[Cube], coverage: list[int], on: int) -> list[int]:
    essential, uncovered = _essentials(coverage, on)
    lits = [p.literal_count for p in primes]
    enc = [p.encoding for p in primes]
    base_terms = len(essential)
    base_lits = sum(lits[i] for i in essential)
    cand = [i for i in range(len(primes)) if coverage[i] & uncovered and i not in essential]
    if not uncovered:
        return essential

    # candidates covering each minterm, in preferred branching order
    order = sorted(cand, key=lambda i: (-_popcount(coverage[i] & uncovered), lits[i], enc[i]))
    by_minterm: dict[int, list[int]] = {}
    m = uncovered
    while m:
        low = m & -m
        m ^= low
        idx = low.bit_length() - 1
        by_minterm[idx] = [i for i in order if coverage[i] >> idx & 1]
    min_lit = min(lits[i] for i in cand)

    best: list = [None]  # (terms, lits, encodings, indices)

    # seed the bound with the greedy answer
    greedy = _greedy_from(order, coverage, uncovered, lits, enc)
    g_terms = base_terms + len(greedy)
    g_lits = base_lits + sum(lits[i] for i in greedy)
    best[0] = (g_terms, g_lits, tuple(sorted([enc[i] for i in essential + greedy])), greedy)

    def lower_bound(unc: int) -> int:
        count = 0
        blocked = 0
        mm = unc
        while mm:
            low = mm & -mm
            mm ^= low
            if blocked & low:
                continue
            count += 1
            for i in by_minterm[low.bit_length() - 1]:
                blocked |= coverage[i]
        return count

    def search(chosen: list[int], unc: int, n_lits: int):
        terms = base_terms + len(chosen)
        total_lits = base_lits + n_lits
        if not unc:
            key = (terms, total_lits,
                   tuple(sorted([enc[i] for i in essential] + [enc[i] for i in chosen])))
            if key < best[0][:3]:
                best[0] = key + (list(chosen),)
            return
        lb = lower_bound(unc)
        bound = (terms + lb, total_lits + lb * min_lit)
        if bound > best[0][:2]:
            return
        # branch on the uncovered minterm with the fewest candidates
        options = None
        mm = unc
        while mm:
            low = mm & -mm
            mm ^= low
            opts = by_minterm[low.bit_length() - 1]
            if options is None or len(opts) < len(options):
                options = opts
                if len(opts) == 1:
                    break
        for i in options:
            chosen.append(i)
            search(chosen, unc & ~coverage[i], n_lits + lits[i])
            chosen.pop()

    search([], uncovered, 0)
    return essential + best[0][3]


def _greedy_from(order, coverage, uncovered, lits, enc) -> list[int]:
    chosen = []
    unc = uncovered
    while unc:
        i = max(order, key=lambda j: (_popcount(coverage[j] & unc), -lits[j], _neg_key(enc[j])))
        chosen.append(i)
        unc &= ~coverage[i]
    return chosen


def _neg_key(s: str) -> tuple[int, ...]:
    # lexicographically smaller encodings win ties inside max()
    return tuple(-ord(ch) for ch in s)


def _greedy_cover(primes: list[Cube], coverage: list[int], on: int) -> list[int]:
    essential, uncovered = _essentials(coverage, on)
    lits = [p.literal_count for p in primes]
    enc = [p.encoding for p in primes]
    cand = [i for i in range(len(primes)) if coverage[i] & uncovered and i not in essential]
    chosen = essential + (_greedy_from(cand, coverage, uncovered, lits, enc) if uncovered else [])
    # drop redundant cubes, most literals first
    for i in sorted(chosen, key=lambda j: (-lits[j], enc[j])):
        others = 0
        for j in chosen:
            if j != i:
                others |= coverage[j]
        if coverage[i] & ~others == 0:
            chosen = [j for j in chosen if j != i]
    return chosen


def _as_index_set(arity: int, points) -> set[int]:
    return {_index(p, arity) for p in points}


def best_cover_with_cycles(reachable: TruthTable, cycles: Sequence[Sequence], mode: str = "exact",
                           search: str = "exhaustive", cap: int = CYCLE_SELECTION_CAP):
    """Choose which whole cycles to add to ``reachable`` for the smallest cover.

    Returns ``(selection, cover)`` where ``selection`` is a tuple of cycle
    indices.  Exhaustive search ranks every subset by (terms, literals,
    number of cycles, selection bit-vector); ``greedy`` search adds cycles one
    at a time while the cover strictly improves.
    """
    arity = reachable.arity
    masks = []
    for cyc in cycles:
        pts = _as_index_set(arity, cyc)
        m = 0
        for p in pts:
            m |= 1 << p
        if m & reachable.bits:
            raise ValueError("cycle overlaps the reachable set")
        masks.append(m)

    def cover_for(sel) -> Cover:
        bits = reachable.bits
        for i in sel:
            bits |= masks[i]
        return minimize(TruthTable(arity, bits), mode)

    if search == "exhaustive":
        if len(cycles) > cap:
            raise CapExceeded(f"{len(cycles)} cycles exceed the exhaustive cap {cap}")
        best = None
        for subset in range(1 << len(cycles)):
            sel = tuple(i for i in range(len(cycles)) if subset >> i & 1)
            cov = cover_for(sel)
            selvec = tuple(1 if i in sel else 0 for i in range(len(cycles)))
            key = (cov.term_count, cov.literal_count, len(sel), selvec)
            if best is None or key < best[0]:
                best = (key, sel, cov)
        return best[1], best[2]
    if search != "greedy":
        raise ValueError(f"unknown search {search!r}")

    # seed from a don't-care minimization: cycles the relaxed cover swallows whole
    dc_bits = 0
    for m in masks:
        dc_bits |= m
    relaxed = minimize(reachable, "greedy", TruthTable(arity, dc_bits), cap=arity)
    covered = relaxed.to_table().bits
    seeded = tuple(i for i, m in enumerate(masks) if m & covered == m)
    sel = ()
    cur = cover_for(sel)
    if seeded:
        cand = cover_for(seeded)
        if cand.cost() < cur.cost():
            sel, cur = seeded, cand
    improved = True
    while improved:
        improved = False
        for i in range(len(cycles)):
            trial = tuple(sorted(set(sel) ^ {i}))
            cov = cover_for(trial)
            if cov.cost() < cur.cost():
                sel, cur, improved = trial, cov, True
    return sel, cur


# ---- table and cover files -------------------------------------------------

def format_table(table: TruthTable) -> str:
    vals = "".join(str(v) for v in table.values())
    rows = [vals[i:i + 64] for i in range(0, len(vals), 64)] or [""]
    return f"arity {table.arity}\n" + "\n".join(rows) + "\n"


def parse_table(text: str) -> TruthTable:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("arity"):
        raise ValueError("table file must start with 'arity <m>'")
    head = lines[0].split()
    if len(head) != 2 or not head[1].isdigit():
        raise ValueError("bad arity header")
    arity = int(head[1])
    body = "".join("".join(ln.split()) for ln in lines[1:])
    if len(body) != 1 << arity or set(body) - {"0", "1"}:
        raise ValueError(f"expected {1 << arity} value bits")
    return TruthTable.from_values([int(ch) for ch in body])


def format_cover(cover: Cover) -> str:
    lines = [f"arity {cover.arity}"]
    for c in cover:
        s = str(c)
        terms = [("" if ch == "1" else "!") + f"v{i}" for i, ch in enumerate(s) if ch != "-"]
        lines.append(" ".join(terms) if terms else "*")
    return "\n".join(lines) + "\n"


def parse_cover(text: str) -> Cover:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("arity"):
        raise ValueError("cover file must start with 'arity <m>'")
    head = lines[0].split()
    if len(head) != 2 or not head[1].isdigit():
        raise ValueError("bad arity header")
    arity = int(head[1])
    cubes = []
    for ln in lines[1:]:
        pattern = ["-"] * arity
        if ln != "*":
            for tok in ln.split():
                neg = tok.startswith("!")
                name = tok[1:] if neg else tok
                if not name.startswith("v") or not name[1:].isdigit():
                    raise ValueError(f"bad literal {tok!r}")
                i = int(name[1:])
                if i >= arity:
                    raise ValueError(f"variable {name} beyond arity {arity}")
                want = "0" if neg else "1"
                if pattern[i] not in ("-", want):
                    raise ValueError(f"contradictory term {ln!r}")
                pattern[i] = want
        cubes.append(Cube.parse("".join(pattern)))
    return Cover(arity, cubes)
