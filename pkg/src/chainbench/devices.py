"""Step-budgeted boolean devices over configuration bit strings.

A device maps a width-``arity`` bit string to 0 or 1, charging a number of
abstract steps per query; :meth:`evaluate` returns ``None`` when the budget
is too small.  Each device has a canonical bit-string ``encoding``, which
fixes the lexicographic order used by device search, and its
representation size is the encoding length.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .boolfn import Cover, Cube, TruthTable, format_cover, format_table, parse_cover, parse_table


class DeviceError(ValueError):
    pass


class Device:
    arity: int

    @property
    def encoding(self) -> str:
        raise NotImplementedError

    @property
    def representation_size(self) -> int:
        return len(self.encoding)

    def cost(self, c: str) -> int:
        raise NotImplementedError

    def value(self, c: str) -> int:
        raise NotImplementedError

    def evaluate(self, c: str, budget: int) -> int | None:
        if len(c) != self.arity:
            raise DeviceError(f"device arity {self.arity}, input has {len(c)} bits")
        if self.cost(c) > budget:
            return None
        return self.value(c)


class TruthTableDevice(Device):
    """Value table over an ordered domain of configurations; anything else maps to 0.

    The encoding is the value vector in domain order.  A lookup costs one
    step per input bit.
    """

    def __init__(self, domain: Sequence[str], bits: str, arity: int | None = None):
        self.domain = tuple(domain)
        if len(bits) != len(self.domain) or set(bits) - {"0", "1"}:
            raise DeviceError("value vector must have one bit per domain element")
        self.bits = bits
        if arity is None:
            if not self.domain:
                raise DeviceError("arity needed for an empty domain")
            arity = len(self.domain[0])
        self.arity = arity
        self._index = {c: i for i, c in enumerate(self.domain)}

    @classmethod
    def indicator(cls, domain: Sequence[str], members: Iterable[str], arity: int | None = None):
        members = set(members)
        missing = members - set(domain)
        if missing:
            raise DeviceError(f"points outside the domain: {sorted(missing)[:3]}")
        return cls(domain, "".join("1" if c in members else "0" for c in domain), arity)

    @classmethod
    def from_table(cls, domain: Sequence[str], table: TruthTable):
        arity = table.arity
        return cls(domain, "".join(str(table(c)) for c in domain), arity)

    @property
    def encoding(self) -> str:
        return self.bits

    def cost(self, c: str) -> int:
        return self.arity

    def value(self, c: str) -> int:
        i = self._index.get(c)
        return 0 if i is None else int(self.bits[i])

    def ones(self) -> frozenset[str]:
        return frozenset(c for c, b in zip(self.domain, self.bits) if b == "1")

    def to_table(self) -> TruthTable:
        return TruthTable.from_points(self.arity, self.ones())

    def __eq__(self, other):
        return isinstance(other, TruthTableDevice) and (self.domain, self.bits) == (other.domain, other.bits)

    def __hash__(self):
        return hash((self.domain, self.bits))

    def __repr__(self):
        return f"TruthTableDevice({self.bits})"


def _empty_slot(arity: int) -> str:
    return "01" * arity


class CoverDevice(Device):
    """DNF device.  Encoded as ``slots`` fixed-width terms; unused slots are ``01`` repeated."""

    def __init__(self, cover: Cover, slots: int | None = None):
        self.cover = cover
        self.arity = cover.arity
        self.slots = cover.term_count if slots is None else slots
        if self.slots < cover.term_count:
            raise DeviceError("fewer slots than terms")

    @classmethod
    def from_encoding(cls, arity: int, bits: str) -> "CoverDevice":
        width = 2 * arity
        if width == 0 or len(bits) % width:
            raise DeviceError("encoding length is not a whole number of terms")
        cubes = []
        for i in range(0, len(bits), width):
            slot = bits[i:i + width]
            if slot == _empty_slot(arity):
                continue
            pattern = []
            for j in range(0, width, 2):
                pair = slot[j:j + 2]
                if pair == "01":
                    raise DeviceError(f"bad term code {slot}")
                pattern.append({"00": "-", "10": "0", "11": "1"}[pair])
            cubes.append(Cube.parse("".join(pattern)))
        return cls(Cover(arity, cubes), len(bits) // width)

    @property
    def encoding(self) -> str:
        terms = [c.encoding for c in self.cover]
        terms += [_empty_slot(self.arity)] * (self.slots - len(terms))
        return "".join(terms)

    def cost(self, c: str) -> int:
        return self.arity

    def value(self, c: str) -> int:
        return self.cover(c)


class DecisionTreeDevice(Device):
    """Binary decision tree testing input bits, stored in preorder with fixed-width nodes.

    Node layout: a kind bit (0 internal, 1 leaf), the tested variable index,
    then the leaf value (0 for internal nodes).  Evaluation costs one step
    per internal node on the path taken, and at least one step.
    """

    def __init__(self, arity: int, tree):
        # tree: int leaf value, or (var, low, high)
        self.arity = arity
        self.tree = tree
        self.var_bits = max(1, (arity - 1).bit_length())

    @property
    def node_width(self) -> int:
        return self.var_bits + 2

    def nodes(self) -> int:
        def count(t):
            return 1 if isinstance(t, int) else 1 + count(t[1]) + count(t[2])
        return count(self.tree)

    def depth(self) -> int:
        def d(t):
            return 0 if isinstance(t, int) else 1 + max(d(t[1]), d(t[2]))
        return d(self.tree)

    @property
    def encoding(self) -> str:
        out = []

        def emit(t):
            if isinstance(t, int):
                out.append("1" + "0" * self.var_bits + str(t))
            else:
                out.append("0" + format(t[0], f"0{self.var_bits}b") + "0")
                emit(t[1])
                emit(t[2])
        emit(self.tree)
        return "".join(out)

    @classmethod
    def from_encoding(cls, arity: int, bits: str) -> "DecisionTreeDevice":
        vb = max(1, (arity - 1).bit_length())
        w = vb + 2
        if len(bits) % w:
            raise DeviceError("encoding is not a whole number of nodes")
        nodes = [bits[i:i + w] for i in range(0, len(bits), w)]
        pos = 0

        def parse():
            nonlocal pos
            if pos >= len(nodes):
                raise DeviceError("truncated tree encoding")
            node = nodes[pos]
            pos += 1
            if node[0] == "1":
                return int(node[-1])
            var = int(node[1:1 + vb], 2)
            if var >= arity:
                raise DeviceError(f"variable {var} beyond arity {arity}")
            return (var, parse(), parse())
        tree = parse()
        if pos != len(nodes):
            raise DeviceError("trailing nodes after tree")
        return cls(arity, tree)

    def _walk(self, c: str) -> tuple[int, int]:
        t, steps = self.tree, 0
        while not isinstance(t, int):
            t = t[2] if c[t[0]] == "1" else t[1]
            steps += 1
        return t, steps

    def cost(self, c: str) -> int:
        return max(1, self._walk(c)[1])

    def value(self, c: str) -> int:
        return self._walk(c)[0]


def complete_tree_nodes(arity: int) -> int:
    """Node count of the unpruned complete tree over ``arity`` variables."""
    return (1 << (arity + 1)) - 1


def decision_tree_device(table: TruthTable) -> DecisionTreeDevice:
    """Tree testing ``v0, v1, ...`` in order, with equal subtrees collapsed."""
    return DecisionTreeDevice(table.arity, _build_tree(table))


def _build_tree(table: TruthTable):
    m = table.arity

    def build(var: int, prefix: int):
        if var == m:
            return table(prefix)
        low = build(var + 1, prefix << 1)
        high = build(var + 1, (prefix << 1) | 1)
        return low if low == high else (var, low, high)

    return build(0, 0)


# ---- device files ----------------------------------------------------------------

def load_device_file(kind: str, text: str, domain: Sequence[str], arity: int) -> Device:
    if kind == "tt":
        table = parse_table(text)
        if table.arity != arity:
            raise DeviceError(f"table arity {table.arity} does not match width {arity}")
        return TruthTableDevice.from_table(domain, table)
    if kind == "cover":
        cover = parse_cover(text)
        if cover.arity != arity:
            raise DeviceError(f"cover arity {cover.arity} does not match width {arity}")
        return CoverDevice(cover)
    raise DeviceError(f"unknown device kind {kind!r}")


def dump_device(device: Device) -> str:
    if isinstance(device, TruthTableDevice):
        return format_table(device.to_table())
    if isinstance(device, CoverDevice):
        return format_cover(device.cover)
    raise DeviceError(f"no file format for {type(device).__name__}")
