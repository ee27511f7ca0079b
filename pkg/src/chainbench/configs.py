"""Bit-level configurations and the configuration spaces built on them.

A configuration for space bound ``T`` is ``T + 1`` blocks of ``alpha`` bits:
the ``T`` tape symbols with the state code inserted just left of the head
cell.  Every space below exposes the same small interface
(:class:`ConfigSpace`), which is all the chain checker needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .turing import MOVES, TuringMachine

ACCEPT = "accept"
REJECT_LOOP = "reject-loop"
STEP_CAP = "step-cap-exceeded"


class ConfigurationError(ValueError):
    pass


class EnumerationLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class EncodingScheme:
    symbols: tuple[str, ...]

    @classmethod
    def for_machine(cls, m: TuringMachine) -> "EncodingScheme":
        return cls(tuple(m.states) + tuple(m.tape_alphabet))

    @property
    def alpha(self) -> int:
        return max(1, (len(self.symbols) - 1).bit_length())

    def code(self, symbol: str) -> str:
        try:
            return format(self.symbols.index(symbol), f"0{self.alpha}b")
        except ValueError:
            raise ConfigurationError(f"symbol {symbol!r} not in the alphabet") from None

    def symbol(self, block: str) -> str | None:
        i = int(block, 2)
        return self.symbols[i] if i < len(self.symbols) else None


@dataclass(frozen=True)
class SpaceBound:
    T: int

    def __post_init__(self):
        if self.T < 1:
            raise ConfigurationError("space bound must be positive")

    def width(self, scheme: EncodingScheme) -> int:
        return (self.T + 1) * scheme.alpha


def _scheme(m, scheme):
    return scheme if scheme is not None else EncodingScheme.for_machine(m)


def encode_configuration(m: TuringMachine, scheme: EncodingScheme | None, bound: SpaceBound,
                         state: str, tape: Sequence[str], head: int) -> str:
    scheme = _scheme(m, scheme)
    if len(tape) != bound.T:
        raise ConfigurationError(f"tape has {len(tape)} cells, bound is {bound.T}")
    if not 1 <= head <= bound.T:
        raise ConfigurationError(f"head {head} outside 1..{bound.T}")
    if state not in m.states:
        raise ConfigurationError(f"unknown state {state!r}")
    for a in tape:
        if a not in m.tape_alphabet:
            raise ConfigurationError(f"symbol {a!r} not in the tape alphabet")
    blocks = [scheme.code(a) for a in tape]
    blocks.insert(head - 1, scheme.code(state))
    return "".join(blocks)


def decode_configuration(m: TuringMachine, scheme: EncodingScheme | None, bound: SpaceBound,
                         c: str):
    """``(state, tape, head)`` or ``None`` when ``c`` is not a configuration."""
    scheme = _scheme(m, scheme)
    a = scheme.alpha
    if len(c) != bound.width(scheme):
        raise ConfigurationError(f"expected {bound.width(scheme)} bits, got {len(c)}")
    states = set(m.states)
    syms = [scheme.symbol(c[i:i + a]) for i in range(0, len(c), a)]
    if any(s is None for s in syms):
        return None
    positions = [i for i, s in enumerate(syms) if s in states]
    if len(positions) != 1 or positions[0] == bound.T:
        return None
    p = positions[0]
    return syms[p], tuple(syms[:p] + syms[p + 1:]), p + 1


def initial_configuration(m, scheme, bound, x) -> str:
    x = list(x)
    for a in x:
        if a not in m.input_alphabet:
            raise ConfigurationError(f"input symbol {a!r} not in the input alphabet")
    if len(x) > bound.T:
        raise ConfigurationError(f"input of length {len(x)} exceeds space bound {bound.T}")
    return encode_configuration(m, scheme, bound, m.start, x + [m.blank] * (bound.T - len(x)), 1)


def accepting_configuration(m, scheme, bound) -> str:
    return encode_configuration(m, scheme, bound, m.accept, [m.blank] * bound.T, 1)


def _step(m: TuringMachine, bound: SpaceBound, state, tape, head):
    t = m.delta.get((state, tape[head - 1]))
    if t is None:
        return None
    r, b, mv = t
    nh = head + MOVES[mv]
    if not 1 <= nh <= bound.T:
        return None
    new_tape = tape[:head - 1] + (b,) + tape[head:]
    return r, new_tape, nh


class ConfigSpace:
    """Interface shared by concrete and composite configuration graphs."""

    width: int

    def initial(self, x) -> str:
        raise NotImplementedError

    def is_valid(self, c: str) -> bool:
        raise NotImplementedError

    def is_accepting(self, c: str) -> bool:
        raise NotImplementedError

    def accepting_configs(self) -> list[str]:
        raise NotImplementedError

    def next(self, c: str) -> str | None:
        """Successor, or ``None`` when ``c`` has none."""
        raise NotImplementedError

    def previous(self, c: str) -> tuple[str, ...]:
        raise NotImplementedError

    def configurations(self) -> list[str]:
        """All valid configurations, in lexicographic order."""
        raise NotImplementedError

    def count(self) -> int:
        return len(self.configurations())

    def describe(self, c: str) -> str:
        return c


class MachineSpace(ConfigSpace):
    """Configuration graph of a machine under a fixed space bound."""

    def __init__(self, m: TuringMachine, bound: SpaceBound | int, scheme: EncodingScheme | None = None):
        self.m = m
        self.bound = bound if isinstance(bound, SpaceBound) else SpaceBound(bound)
        self.scheme = _scheme(m, scheme)
        self.width = self.bound.width(self.scheme)
        self.c_accept = accepting_configuration(m, self.scheme, self.bound)
        self._next: dict[str, str | None] = {}
        self._prev: dict[str, tuple[str, ...]] = {}
        self._all: list[str] | None = None

    def encode(self, state, tape, head) -> str:
        return encode_configuration(self.m, self.scheme, self.bound, state, tape, head)

    def decode(self, c: str):
        return decode_configuration(self.m, self.scheme, self.bound, c)

    def initial(self, x) -> str:
        return initial_configuration(self.m, self.scheme, self.bound, x)

    def is_valid(self, c: str) -> bool:
        return len(c) == self.width and self.decode(c) is not None

    def is_accepting(self, c: str) -> bool:
        return c == self.c_accept

    def accepting_configs(self) -> list[str]:
        return [self.c_accept]

    def _require(self, c: str):
        if len(c) != self.width:
            raise ConfigurationError(f"expected {self.width} bits, got {len(c)}")
        d = self.decode(c)
        if d is None:
            raise ConfigurationError(f"{c} is not a valid configuration")
        return d

    def next(self, c: str) -> str | None:
        if c in self._next:
            return self._next[c]
        state, tape, head = self._require(c)
        if c == self.c_accept and (self.m.accept, self.m.blank) not in self.m.delta:
            out = None
        else:
            moved = _step(self.m, self.bound, state, tape, head)
            out = c if moved is None else self.encode(*moved)
        self._next[c] = out
        return out

    def previous(self, c: str) -> tuple[str, ...]:
        if c in self._prev:
            return self._prev[c]
        state, tape, head = self._require(c)
        found = set()
        for (q, a), (r, b, mv) in self.m.delta.items():
            if r != state:
                continue
            h0 = head - MOVES[mv]
            if not 1 <= h0 <= self.bound.T or tape[h0 - 1] != b:
                continue
            prior = self.encode(q, tape[:h0 - 1] + (a,) + tape[h0:], h0)
            if self.next(prior) == c:
                found.add(prior)
        if self.next(c) == c:
            found.add(c)
        out = tuple(sorted(found))
        self._prev[c] = out
        return out

    def configurations(self) -> list[str]:
        if self._all is None:
            T = self.bound.T
            tapes = [()]
            for _ in range(T):
                tapes = [t + (a,) for t in tapes for a in self.m.tape_alphabet]
            self._all = sorted(self.encode(q, t, h) for q in self.m.states for t in tapes
                               for h in range(1, T + 1))
        return self._all

    def count(self) -> int:
        return len(self.m.states) * len(self.m.tape_alphabet) ** self.bound.T * self.bound.T

    def describe(self, c: str) -> str:
        d = self.decode(c)
        if d is None:
            return f"{c} (invalid)"
        state, tape, head = d
        cells = " ".join(f"[{a}]" if i + 1 == head else a for i, a in enumerate(tape))
        return f"{state}: {cells}"


# ---- whole-machine helpers ---------------------------------------------------

def next_config(m, scheme, bound, c: str) -> str:
    space = MachineSpace(m, bound, scheme)
    out = space.next(c)
    if out is None:
        raise ConfigurationError("the accepting configuration has no successor")
    return out


def previous_configs(m, scheme, bound, c: str) -> tuple[str, ...]:
    return MachineSpace(m, bound, scheme).previous(c)


@dataclass(frozen=True)
class SimOutcome:
    verdict: str
    steps_used: int
    final: str
    trace: tuple[str, ...] | None = None


def simulate_space(space: ConfigSpace, start: str, step_cap: int | None = None,
                   trace: bool = False) -> SimOutcome:
    c = start
    seen = {c}
    path = [c]
    steps = 0
    while True:
        if space.is_accepting(c):
            verdict = ACCEPT
            break
        if step_cap is not None and steps >= step_cap:
            verdict = STEP_CAP
            break
        nxt = space.next(c)
        if nxt is None:
            # terminal without acceptance: a dead end counts as a rejecting loop
            verdict = REJECT_LOOP
            break
        c = nxt
        steps += 1
        path.append(c)
        if c in seen:
            verdict = REJECT_LOOP
            break
        seen.add(c)
    return SimOutcome(verdict, steps, c, tuple(path) if trace else None)


def simulate(m: TuringMachine, scheme, bound, x, step_cap: int | None = None,
             trace: bool = False) -> SimOutcome:
    space = MachineSpace(m, bound, scheme)
    return simulate_space(space, space.initial(x), step_cap, trace)


# ---- step-counter annotation ---------------------------------------------------

class CounterSpace(ConfigSpace):
    """Configurations prefixed by a ``B``-bit step counter that every step increments."""

    def __init__(self, base: ConfigSpace, counter_bits: int | None = None):
        B = base.width if counter_bits is None else counter_bits
        if B < base.width:
            raise ConfigurationError(f"counter needs at least {base.width} bits, got {B}")
        self.base = base
        self.B = B
        self.top = (1 << B) - 1
        self.width = B + base.width

    def split(self, c: str) -> tuple[int, str]:
        return int(c[:self.B], 2), c[self.B:]

    def join(self, r: int, c: str) -> str:
        return format(r, f"0{self.B}b") + c

    def initial(self, x) -> str:
        return self.join(0, self.base.initial(x))

    def is_valid(self, c: str) -> bool:
        return len(c) == self.width and self.base.is_valid(c[self.B:])

    def is_accepting(self, c: str) -> bool:
        return self.base.is_accepting(c[self.B:])

    def accepting_configs(self) -> list[str]:
        return [self.join(r, a) for r in range(self.top + 1) for a in self.base.accepting_configs()]

    def next(self, c: str) -> str | None:
        r, inner = self.split(c)
        nxt = self.base.next(inner)
        if nxt is None or r == self.top:
            return None
        return self.join(r + 1, nxt)

    def previous(self, c: str) -> tuple[str, ...]:
        r, inner = self.split(c)
        if r == 0:
            return ()
        return tuple(self.join(r - 1, p) for p in self.base.previous(inner))

    def configurations(self) -> list[str]:
        base = self.base.configurations()
        return [self.join(r, c) for r in range(self.top + 1) for c in base]

    def count(self) -> int:
        return (self.top + 1) * self.base.count()

    def describe(self, c: str) -> str:
        r, inner = self.split(c)
        return f"r={r} {self.base.describe(inner)}"


def step_counter_transform(m: TuringMachine, bound, counter_bits: int | None = None,
                           scheme: EncodingScheme | None = None) -> CounterSpace:
    return CounterSpace(MachineSpace(m, bound, scheme), counter_bits)


# ---- all-inputs composite --------------------------------------------------------

RUN, MARK_ACCEPT, MARK_REJECT, HALT = 0, 1, 2, 3
PHASE_NAMES = {RUN: "run", MARK_ACCEPT: "mark-accept", MARK_REJECT: "mark-reject", HALT: "halt"}


class AllInputsSpace(ConfigSpace):
    """Runs ``m`` on every length-``n`` input from ``start`` to ``last`` in turn.

    A configuration is ``phase | input rank | step count | inner configuration``.
    After each sub-run the view enters a marker phase (accept or reject)
    holding only the tested input, then moves to the next input or halts.
    A sub-run is judged rejecting when it stalls (self-loop), enters the
    reject state, or exhausts its step counter, which is wide enough that
    only a cycling run can exhaust it.
    """

    def __init__(self, m: TuringMachine, n: int, start: str, last: str, T: int | None = None):
        self.m = m
        self.n = n
        self.sigma = tuple(m.input_alphabet)
        self.inner = MachineSpace(m, SpaceBound(T if T is not None else n + 1))
        self.first = self.rank(start)
        self.last = self.rank(last)
        if self.first > self.last:
            raise ConfigurationError(f"start input {start!r} comes after {last!r}")
        self.y_bits = (len(self.sigma) ** n - 1).bit_length()
        self.cap = max(1, self.inner.count())
        self.k_bits = self.cap.bit_length()
        self.width = 2 + self.y_bits + self.k_bits + self.inner.width
        self._zero_inner = "0" * self.inner.width

    def rank(self, x) -> int:
        x = list(x)
        if len(x) != self.n:
            raise ConfigurationError(f"input {''.join(x)!r} does not have length {self.n}")
        r = 0
        for a in x:
            if a not in self.sigma:
                raise ConfigurationError(f"input symbol {a!r} not in the input alphabet")
            r = r * len(self.sigma) + self.sigma.index(a)
        return r

    def unrank(self, r: int) -> str:
        out = []
        for _ in range(self.n):
            r, d = divmod(r, len(self.sigma))
            out.append(self.sigma[d])
        return "".join(reversed(out))

    def pack(self, phase: int, y: int, k: int, inner: str) -> str:
        return (format(phase, "02b") + (format(y, f"0{self.y_bits}b") if self.y_bits else "")
                + format(k, f"0{self.k_bits}b") + inner)

    def unpack(self, c: str) -> tuple[int, int, int, str]:
        i = 2 + self.y_bits
        j = i + self.k_bits
        return int(c[:2], 2), int(c[2:i], 2) if self.y_bits else 0, int(c[i:j], 2), c[j:]

    def initial(self, x=None) -> str:
        y = self.first if x is None else self.rank(x)
        return self.pack(RUN, y, 0, self.inner.initial(self.unrank(y)))

    def is_valid(self, c: str) -> bool:
        if len(c) != self.width:
            return False
        phase, y, k, inner = self.unpack(c)
        if not self.first <= y <= self.last:
            return False
        if phase == RUN:
            return k <= self.cap and self.inner.is_valid(inner)
        if phase == HALT and y != self.last:
            return False
        return k == 0 and inner == self._zero_inner

    def is_accepting(self, c: str) -> bool:
        return False

    def accepting_configs(self) -> list[str]:
        return []

    def halt_configuration(self) -> str:
        return self.pack(HALT, self.last, 0, self._zero_inner)

    def _sub_run_rejects(self, k: int, inner: str) -> bool:
        state = self.inner.decode(inner)[0]
        return self.inner.next(inner) == inner or state == self.m.reject or k >= self.cap

    def next(self, c: str) -> str | None:
        phase, y, k, inner = self.unpack(c)
        if phase == HALT:
            return None
        if phase == RUN:
            if self.inner.is_accepting(inner):
                return self.pack(MARK_ACCEPT, y, 0, self._zero_inner)
            if self._sub_run_rejects(k, inner):
                return self.pack(MARK_REJECT, y, 0, self._zero_inner)
            return self.pack(RUN, y, k + 1, self.inner.next(inner))
        if y >= self.last:
            return self.halt_configuration()
        return self.pack(RUN, y + 1, 0, self.inner.initial(self.unrank(y + 1)))

    def previous(self, c: str) -> tuple[str, ...]:
        phase, y, k, inner = self.unpack(c)
        cands: list[str] = []
        if phase == HALT:
            cands = [self.pack(p, y, 0, self._zero_inner) for p in (MARK_ACCEPT, MARK_REJECT)]
        elif phase == RUN and k == 0:
            if y > self.first and inner == self.inner.initial(self.unrank(y)):
                cands = [self.pack(p, y - 1, 0, self._zero_inner) for p in (MARK_ACCEPT, MARK_REJECT)]
        elif phase == RUN:
            cands = [self.pack(RUN, y, k - 1, p) for p in self.inner.previous(inner)]
        elif phase == MARK_ACCEPT:
            cands = [self.pack(RUN, y, j, a) for j in range(self.cap + 1)
                     for a in self.inner.accepting_configs()]
        else:
            cands = [self.pack(RUN, y, j, p) for j in range(self.cap + 1)
                     for p in self.inner.configurations()]
        return tuple(sorted(p for p in cands if self.is_valid(p) and self.next(p) == c))

    def configurations(self) -> list[str]:
        raise EnumerationLimitExceeded("the all-inputs view is not enumerated")

    def describe(self, c: str) -> str:
        phase, y, k, inner = self.unpack(c)
        base = f"{PHASE_NAMES[phase]} input={self.unrank(y)!r}"
        if phase == RUN:
            return f"{base} k={k} {self.inner.describe(inner)}"
        return base

    def markers(self, max_steps: int | None = None) -> list[tuple[str, str]]:
        """``(input, 'accept' | 'reject')`` for each marker phase on the run from the start input."""
        out = []
        c = self.initial()
        steps = 0
        while c is not None:
            phase, y, _, _ = self.unpack(c)
            if phase == MARK_ACCEPT:
                out.append((self.unrank(y), ACCEPT))
            elif phase == MARK_REJECT:
                out.append((self.unrank(y), "reject"))
            c = self.next(c)
            steps += 1
            if max_steps is not None and steps > max_steps:
                raise RuntimeError("composite run exceeded the step limit")
        return out


def all_inputs_machine(m: TuringMachine, n: int, start_input: str, m_max: str,
                       T: int | None = None) -> AllInputsSpace:
    return AllInputsSpace(m, n, start_input, m_max, T)


def iter_bitstrings(width: int) -> Iterator[str]:
    for i in range(1 << width):
        yield format(i, f"0{width}b") if width else ""
