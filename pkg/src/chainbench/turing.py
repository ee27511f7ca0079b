"""Deterministic single-tape Turing machines and machine-level transforms.

The blank symbol is written ``_``.  Moves are ``L``, ``R`` and ``S``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

BLANK = "_"
MOVES = {"L": -1, "R": 1, "S": 0}

Transition = tuple[str, str, str]


class MachineError(ValueError):
    pass


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    tape_alphabet: tuple[str, ...]
    start: str
    accept: str
    delta: Mapping[tuple[str, str], Transition] = field(default_factory=dict)
    reject: str | None = None
    blank: str = BLANK

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
        object.__setattr__(self, "tape_alphabet", tuple(self.tape_alphabet))
        object.__setattr__(self, "delta", dict(self.delta))
        states, gamma = set(self.states), set(self.tape_alphabet)
        if len(states) != len(self.states) or len(gamma) != len(self.tape_alphabet):
            raise MachineError("duplicate state or symbol name")
        if states & gamma:
            raise MachineError(f"names used as both state and symbol: {sorted(states & gamma)}")
        if self.blank not in gamma:
            raise MachineError("blank must be a tape symbol")
        if self.blank in self.input_alphabet:
            raise MachineError("blank must not be an input symbol")
        if not set(self.input_alphabet) <= gamma:
            raise MachineError("input alphabet must be a subset of the tape alphabet")
        for s in (self.start, self.accept) + ((self.reject,) if self.reject else ()):
            if s not in states:
                raise MachineError(f"unknown state {s!r}")
        if self.start == self.accept:
            raise MachineError("start and accept states must differ")
        for (q, a), (r, b, mv) in self.delta.items():
            if q not in states or r not in states:
                raise MachineError(f"transition uses unknown state: {(q, a)} -> {(r, b, mv)}")
            if a not in gamma or b not in gamma:
                raise MachineError(f"transition uses unknown symbol: {(q, a)} -> {(r, b, mv)}")
            if mv not in MOVES:
                raise MachineError(f"bad move {mv!r}")

    def __hash__(self):
        return hash((self.states, self.tape_alphabet, self.start, self.accept,
                     tuple(sorted(self.delta.items()))))

    def transition(self, state: str, symbol: str) -> Transition | None:
        return self.delta.get((state, symbol))


def parse_machine(text: str) -> TuringMachine:
    """Read the line-based machine description format (see README)."""
    fields: dict[str, list[str]] = {}
    delta: dict[tuple[str, str], Transition] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise MachineError(f"line {lineno}: expected 'key: value'")
        key = key.strip()
        tokens = rest.split()
        if key == "delta":
            if len(tokens) != 6 or tokens[2] != "->":
                raise MachineError(f"line {lineno}: expected 'delta: q a -> r b M'")
            q, a, _, r, b, mv = tokens
            if (q, a) in delta:
                raise MachineError(f"line {lineno}: second transition for {(q, a)}")
            delta[(q, a)] = (r, b, mv)
        elif key in ("states", "input_alphabet", "tape_alphabet", "start", "accept", "reject"):
            if key in fields:
                raise MachineError(f"line {lineno}: duplicate '{key}'")
            fields[key] = tokens
        else:
            raise MachineError(f"line {lineno}: unknown key {key!r}")
    for key in ("states", "input_alphabet", "tape_alphabet", "start", "accept"):
        if key not in fields:
            raise MachineError(f"missing '{key}'")
    for key in ("start", "accept", "reject"):
        if key in fields and len(fields[key]) != 1:
            raise MachineError(f"'{key}' takes exactly one state")
    return TuringMachine(
        states=fields["states"],
        input_alphabet=fields["input_alphabet"],
        tape_alphabet=fields["tape_alphabet"],
        start=fields["start"][0],
        accept=fields["accept"][0],
        reject=fields["reject"][0] if "reject" in fields else None,
        delta=delta,
    )


def format_machine(m: TuringMachine) -> str:
    lines = [
        "states: " + " ".join(m.states),
        "input_alphabet: " + " ".join(m.input_alphabet),
        "tape_alphabet: " + " ".join(m.tape_alphabet),
        f"start: {m.start}",
        f"accept: {m.accept}",
    ]
    if m.reject:
        lines.append(f"reject: {m.reject}")
    order = {s: i for i, s in enumerate(m.states)}
    sym = {s: i for i, s in enumerate(m.tape_alphabet)}
    for (q, a), (r, b, mv) in sorted(m.delta.items(), key=lambda kv: (order[kv[0][0]], sym[kv[0][1]])):
        lines.append(f"delta: {q} {a} -> {r} {b} {mv}")
    return "\n".join(lines) + "\n"


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def normalize_single_accept(m: TuringMachine) -> TuringMachine:
    """Machine with the same accepted inputs whose only accepting configuration is
    the accept state at cell 1 over an all-blank tape.

    Cell 1 is marked with a hatted copy of its symbol and blanks written by
    ``m`` become a visited-blank symbol, so after acceptance the machine can
    walk back to cell 1 and erase rightwards up to the first pristine blank.
    That final sweep needs one cell beyond the region ``m`` used (the input
    plus every visited cell); runs that fill the whole tape fall off the right
    edge and become rejecting self-loops.
    """
    taken = set(m.states) | set(m.tape_alphabet)
    copy = {q: _fresh(f"m.{q}", taken) for q in m.states}
    erase = _fresh("norm.erase", taken)
    ret = _fresh("norm.return", taken)
    hat = {a: _fresh(f"^{a}", taken) for a in m.tape_alphabet}
    visited_blank = _fresh("~", taken)
    blank = m.blank

    def plain_write(b: str) -> str:
        return visited_blank if b == blank else b

    delta: dict[tuple[str, str], Transition] = {}
    # mark cell 1 and hand over to the copy of m's start state
    for a in m.tape_alphabet:
        delta[(m.start, a)] = (copy[m.start], hat[a], "S")
    for (q, a), (r, b, mv) in m.delta.items():
        if q == m.accept:
            continue
        reads = [a] + ([visited_blank] if a == blank else [])
        for read in reads:
            delta[(copy[q], read)] = (copy[r], plain_write(b), mv)
        delta[(copy[q], hat[a])] = (copy[r], hat[b], mv)
    # accepted: walk left to the marked cell, erase rightwards, come back
    acc = copy[m.accept]
    for a in m.tape_alphabet:
        if a != blank:
            delta[(acc, a)] = (acc, a, "L")
        delta[(acc, hat[a])] = (erase, hat[blank], "R")
    delta[(acc, visited_blank)] = (acc, visited_blank, "L")
    delta[(acc, blank)] = (acc, blank, "L")
    for a in list(m.tape_alphabet) + [visited_blank]:
        if a != blank:
            delta[(erase, a)] = (erase, blank, "R")
    delta[(erase, blank)] = (ret, blank, "L")
    delta[(ret, blank)] = (ret, blank, "L")
    delta[(ret, hat[blank])] = (m.accept, blank, "S")

    states = [m.start, m.accept] + [copy[q] for q in m.states] + [erase, ret]
    gamma = list(m.tape_alphabet) + [visited_blank] + [hat[a] for a in m.tape_alphabet]
    return TuringMachine(states, m.input_alphabet, gamma, m.start, m.accept, delta,
                         reject=copy[m.reject] if m.reject else None, blank=blank)


def loopback_transform(m: TuringMachine, x) -> TuringMachine:
    """From the accepting configuration, rewrite ``x`` on the blank tape and restart.

    ``m`` must be normalized (no transitions out of its accept state).
    """
    x = list(x)
    if any((m.accept, a) in m.delta for a in m.tape_alphabet):
        raise MachineError("loopback needs a normalized machine (accept state has transitions)")
    for sym in x:
        if sym not in m.input_alphabet:
            raise MachineError(f"input symbol {sym!r} not in the input alphabet")
    taken = set(m.states) | set(m.tape_alphabet)
    delta = dict(m.delta)
    extra: list[str] = []
    blank = m.blank
    n = len(x)
    if n == 0:
        delta[(m.accept, blank)] = (m.start, blank, "S")
    elif n == 1:
        delta[(m.accept, blank)] = (m.start, x[0], "S")
    else:
        writers = {i: _fresh(f"loop.w{i}", taken) for i in range(2, n + 1)}
        backs = {k: _fresh(f"loop.b{k}", taken) for k in range(1, n - 1)}
        extra += [writers[i] for i in range(2, n + 1)] + [backs[k] for k in range(n - 2, 0, -1)]
        delta[(m.accept, blank)] = (writers[2], x[0], "R")
        for i in range(2, n):
            delta[(writers[i], blank)] = (writers[i + 1], x[i - 1], "R")
        delta[(writers[n], blank)] = (backs[n - 2] if n > 2 else m.start, x[n - 1], "L")
        for k in range(1, n - 1):
            target = backs[k - 1] if k > 1 else m.start
            for a in m.input_alphabet:
                delta[(backs[k], a)] = (target, a, "L")
    return TuringMachine(list(m.states) + extra, m.input_alphabet, m.tape_alphabet, m.start,
                         m.accept, delta, reject=m.reject, blank=blank)
