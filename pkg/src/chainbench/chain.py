"""Chain checking of devices against a configuration graph, and device search.

A device ``f`` is chained at configuration ``c`` (budget ``P``) when either
``f(c) = 0`` and ``c`` is not the initial configuration, or ``f(c) = 1``,
some predecessor of ``c`` has value 1 (unless ``c`` is initial) and the
successor of ``c`` has value 1 (unless ``c`` is accepting or has no
successor).  A device passes when it is chained at every valid
configuration.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .configs import ConfigSpace, EnumerationLimitExceeded
from .devices import CoverDevice, Device, TruthTableDevice

DEFAULT_MAX_CONFIGS = 1 << 16


class DeviceBudgetExceeded(RuntimeError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Budget:
    P: int
    D: int | None = None
    step_cap: int | None = None

    def __post_init__(self):
        for name in ("P", "D", "step_cap"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"budget field {name} must be positive")


@dataclass(frozen=True)
class ChainReport:
    passed: bool
    witness: str | None
    configs_checked: int


def eval_bounded(f: Device, c: str, P: int) -> int | None:
    return f.evaluate(c, P)


def chained(space: ConfigSpace, x, f: Device, c: str, P: int, init: str | None = None) -> int:
    if not space.is_valid(c):
        raise ValueError(f"{c} is not a valid configuration")
    init = space.initial(x) if init is None else init
    v = f.evaluate(c, P)
    if v is None:
        return 0
    if v == 0:
        return int(c != init)
    if c != init and not any(f.evaluate(p, P) == 1 for p in space.previous(c)):
        return 0
    if not space.is_accepting(c):
        nxt = space.next(c)
        if nxt is not None and f.evaluate(nxt, P) != 1:
            return 0
    return 1


def _enumerable(space: ConfigSpace, max_configs: int) -> list[str]:
    n = space.count()
    if n > max_configs:
        raise EnumerationLimitExceeded(f"{n} configurations exceed the limit {max_configs}")
    return space.configurations()


def check_all(space: ConfigSpace, x, f: Device, P: int,
              max_configs: int = DEFAULT_MAX_CONFIGS) -> ChainReport:
    init = space.initial(x)
    checked = 0
    for c in _enumerable(space, max_configs):
        checked += 1
        if not chained(space, x, f, c, P, init):
            return ChainReport(False, c, checked)
    return ChainReport(True, None, checked)


def reachable_set(space: ConfigSpace, x, step_cap: int | None = None) -> frozenset[str]:
    c = space.initial(x)
    seen = {c}
    steps = 0
    while step_cap is None or steps < step_cap:
        c = space.next(c)
        if c is None or c in seen:
            break
        seen.add(c)
        steps += 1
    return frozenset(seen)


def decide_via_device(space: ConfigSpace, f: Device, P: int) -> str:
    """``accept`` iff ``f`` holds at some accepting configuration."""
    for a in space.accepting_configs():
        v = f.evaluate(a, P)
        if v is None:
            raise DeviceBudgetExceeded(f"device exceeded budget {P} at {a}")
        if v == 1:
            return "accept"
    return "reject"


def functional_cycles(space: ConfigSpace, max_configs: int = DEFAULT_MAX_CONFIGS) -> list[list[str]]:
    """Every cycle of the successor graph, each starting at its least member, sorted."""
    state: dict[str, int] = {}  # 1 on the current path, 2 finished
    cycles = []
    for start in _enumerable(space, max_configs):
        if start in state:
            continue
        path = []
        c = start
        while c is not None and c not in state:
            state[c] = 1
            path.append(c)
            c = space.next(c)
        if c is not None and state[c] == 1:
            cyc = path[path.index(c):]
            k = cyc.index(min(cyc))
            cycles.append(cyc[k:] + cyc[:k])
        for p in path:
            state[p] = 2
    return sorted(cycles)


def spurious_cycles(space: ConfigSpace, x, max_configs: int = DEFAULT_MAX_CONFIGS) -> list[list[str]]:
    reach = reachable_set(space, x)
    return [cyc for cyc in functional_cycles(space, max_configs) if not reach.intersection(cyc)]


def augment_with_cycles(space: ConfigSpace, reachable, cycles) -> TruthTableDevice:
    reachable = set(reachable)
    points = set(reachable)
    for cyc in cycles:
        if reachable.intersection(cyc):
            raise ValueError("selected cycle overlaps the reachable set")
        points.update(cyc)
    return TruthTableDevice.indicator(space.configurations(), points, space.width)


def exact_indicator(space: ConfigSpace, x) -> TruthTableDevice:
    return TruthTableDevice.indicator(space.configurations(), reachable_set(space, x), space.width)


# ---- device classes ----------------------------------------------------------------

class DeviceClass:
    """An enumerable family of devices with fixed-length canonical encodings."""

    encoding_length: int

    def members(self) -> Iterator[tuple[str, Device]]:
        """``(encoding, device)`` pairs in increasing encoding order."""
        raise NotImplementedError


class TruthTableClass(DeviceClass):
    def __init__(self, space: ConfigSpace):
        self.domain = space.configurations()
        self.arity = space.width
        self.encoding_length = len(self.domain)

    def members(self):
        L = self.encoding_length
        for i in range(1 << L):
            bits = format(i, f"0{L}b") if L else ""
            yield bits, TruthTableDevice(self.domain, bits, self.arity)


class CoverClass(DeviceClass):
    """Covers with at most ``max_terms`` terms, one fixed-width slot per term."""

    def __init__(self, arity: int, max_terms: int):
        self.arity = arity
        self.max_terms = max_terms
        self.encoding_length = 2 * arity * max_terms

    def members(self):
        slot_codes = sorted({"01" * self.arity} | set(_cube_codes(self.arity)))

        def rec(prefix: str, left: int):
            if not left:
                yield prefix
                return
            for code in slot_codes:
                yield from rec(prefix + code, left - 1)

        for bits in rec("", self.max_terms):
            yield bits, CoverDevice.from_encoding(self.arity, bits)


def _cube_codes(arity: int) -> list[str]:
    codes = [""]
    for _ in range(arity):
        codes = [c + p for c in codes for p in ("00", "10", "11")]
    return codes


class RestrictedClass(DeviceClass):
    """Members of ``base`` satisfying ``keep``."""

    def __init__(self, base: DeviceClass, keep: Callable[[Device], bool]):
        self.base = base
        self.keep = keep
        self.encoding_length = base.encoding_length

    def members(self):
        for bits, dev in self.base.members():
            if self.keep(dev):
                yield bits, dev


@dataclass
class SearchResult:
    device: Device | None
    encoding: str | None
    oracle_calls: int
    encoding_length: int
    checks: int


class _ExhaustiveOracle:
    """Is there a passing class member whose encoding is below ``s``?"""

    def __init__(self, space, x, cls: DeviceClass, P: int, max_checks: int | None):
        self.space, self.x, self.cls, self.P = space, x, cls, P
        self.max_checks = max_checks
        self.results: dict[str, bool] = {}
        self.devices: dict[str, Device] = {}
        self.calls = 0

    def passes(self, bits: str, dev: Device) -> bool:
        if bits not in self.results:
            if self.max_checks is not None and len(self.results) >= self.max_checks:
                raise SearchBudgetExceeded(f"more than {self.max_checks} device checks")
            self.results[bits] = check_all(self.space, self.x, dev, self.P).passed
            self.devices[bits] = dev
        return self.results[bits]

    def __call__(self, s: int) -> bool:
        self.calls += 1
        for bits, dev in self.cls.members():
            if (int(bits, 2) if bits else 0) >= s:
                return False
            if self.passes(bits, dev):
                return True
        return False


def find_device(space: ConfigSpace, x, budget: Budget, device_class: DeviceClass,
                max_checks: int | None = None) -> SearchResult:
    """Binary search for the least-encoded passing device using an exhaustive existence oracle.

    Issues at most ``encoding_length + 1`` oracle calls.
    """
    L = device_class.encoding_length
    if budget.D is not None and L > budget.D:
        return SearchResult(None, None, 0, L, 0)
    oracle = _ExhaustiveOracle(space, x, device_class, budget.P, max_checks)
    hi = 1 << L
    if not oracle(hi):
        return SearchResult(None, None, oracle.calls, L, len(oracle.results))
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if oracle(mid):
            hi = mid
        else:
            lo = mid
    bits = format(hi - 1, f"0{L}b") if L else ""
    return SearchResult(oracle.devices[bits], bits, oracle.calls, L, len(oracle.results))


def least_passing_by_enumeration(space, x, device_class: DeviceClass, P: int):
    """Reference: scan the class in encoding order and return the first passing member."""
    for bits, dev in device_class.members():
        if check_all(space, x, dev, P).passed:
            return bits, dev
    return None


# ---- all passing truth tables ---------------------------------------------------------

def chain_constraints(space: ConfigSpace, x, max_configs: int = DEFAULT_MAX_CONFIGS):
    """The chain conditions for truth-table devices as CNF over configurations.

    Returns ``(configs, clauses)``; a clause is a list of ``(index, value)``
    pairs, satisfied when some configuration ``index`` has value ``value``.
    """
    configs = _enumerable(space, max_configs)
    idx = {c: i for i, c in enumerate(configs)}
    init = space.initial(x)
    clauses = [[(idx[init], 1)]]
    for c in configs:
        i = idx[c]
        if c != init:
            clauses.append([(i, 0)] + [(idx[p], 1) for p in space.previous(c)])
        if not space.is_accepting(c):
            nxt = space.next(c)
            if nxt is not None and nxt != c:
                clauses.append([(i, 0), (idx[nxt], 1)])
    return configs, clauses


def enumerate_passing_devices(space: ConfigSpace, x, P: int | None = None,
                              max_configs: int = DEFAULT_MAX_CONFIGS,
                              limit: int | None = None) -> list[frozenset[str]]:
    """Every truth-table device passing ``check_all``, as sets of configurations.

    Complete backtracking search with unit propagation over
    :func:`chain_constraints`; lexicographic variable order, 0 tried first.
    """
    if P is not None and P < space.width:
        return []
    configs, clauses = chain_constraints(space, x, max_configs)
    n = len(configs)
    occurs: list[list[int]] = [[] for _ in range(n)]
    for k, cl in enumerate(clauses):
        for i, _ in cl:
            occurs[i].append(k)
    value = [-1] * n
    trail: list[int] = []
    solutions: list[frozenset[str]] = []

    def assign(i: int, v: int) -> bool:
        queue = [(i, v)]
        while queue:
            j, w = queue.pop()
            if value[j] != -1:
                if value[j] != w:
                    return False
                continue
            value[j] = w
            trail.append(j)
            for k in occurs[j]:
                free = None
                n_free = 0
                sat = False
                for a, want in clauses[k]:
                    if value[a] == want:
                        sat = True
                        break
                    if value[a] == -1:
                        n_free += 1
                        free = (a, want)
                if sat:
                    continue
                if n_free == 0:
                    return False
                if n_free == 1:
                    queue.append(free)
        return True

    def undo(mark: int):
        while len(trail) > mark:
            value[trail.pop()] = -1

    if not all(assign(i, w) for i, w in (clauses[0][0],)):
        return []
    for cl in clauses:
        if len(cl) == 1:
            if not assign(*cl[0]):
                return []

    # explicit stack: (variable, trail mark, next value to try)
    stack: list[tuple[int, int, int]] = []
    pos = 0
    while True:
        while pos < n and value[pos] != -1:
            pos += 1
        if pos == n:
            solutions.append(frozenset(configs[i] for i in range(n) if value[i] == 1))
            if limit is not None and len(solutions) >= limit:
                return solutions
            ok = False
        else:
            mark = len(trail)
            stack.append((pos, mark, 1))
            ok = assign(pos, 0)
            if ok:
                continue
        # backtrack to the most recent decision with an untried value
        while stack:
            var, mark, nxt = stack.pop()
            undo(mark)
            if nxt == 1:
                stack.append((var, mark, 2))
                if assign(var, 1):
                    pos = var
                    break
            # both values tried; keep unwinding
        else:
            return solutions
        pos = 0


def cycle_decomposition(space: ConfigSpace, x, points) -> list[list[str]] | None:
    """The spurious cycles making up ``points`` minus the reachable set, or ``None``.

    ``None`` means ``points`` is not the reachable set plus whole spurious cycles.
    """
    points = frozenset(points)
    reach = reachable_set(space, x)
    if not reach <= points:
        return None
    rest = set(points - reach)
    used = []
    for cyc in spurious_cycles(space, x):
        inside = rest.intersection(cyc)
        if inside and len(inside) != len(cyc):
            return None
        if inside:
            used.append(cyc)
            rest -= inside
    return None if rest else used


def is_union_of_cycles(space: ConfigSpace, points) -> bool:
    """Whether every point lies on a successor cycle contained in ``points``."""
    points = frozenset(points)
    for c in points:
        seen = {c}
        d = space.next(c)
        while d is not None and d != c and d in points and d not in seen:
            seen.add(d)
            d = space.next(d)
        if d != c:
            return False
    return True
