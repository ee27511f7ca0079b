"""Bundled fixture machines and the (machine, space bound, inputs) cases used by tests."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import product
from pathlib import Path

from .turing import TuringMachine, parse_machine

MACHINE_NAMES = ("m1", "m_first0", "m_even", "m_dirty", "m_sweep", "m_cycle")
FIXTURE_PREFIX = "fixture:"


@lru_cache(maxsize=None)
def fixture_machine(name: str) -> TuringMachine:
    if name not in MACHINE_NAMES:
        raise KeyError(f"unknown fixture machine {name!r}; known: {', '.join(MACHINE_NAMES)}")
    text = resources.files("chainbench").joinpath("data").joinpath("machines").joinpath(f"{name}.tm").read_text()
    return parse_machine(text)


def load_machine(ref: str) -> TuringMachine:
    """A machine from ``fixture:<name>`` or a path to a machine file."""
    if ref.startswith(FIXTURE_PREFIX):
        return fixture_machine(ref[len(FIXTURE_PREFIX):])
    return parse_machine(Path(ref).read_text())


def inputs_of_length(m: TuringMachine, n: int) -> list[str]:
    return ["".join(p) for p in product(m.input_alphabet, repeat=n)]


@dataclass(frozen=True)
class Fixture:
    name: str
    machine_name: str
    T: int
    inputs: tuple[str, ...]

    @property
    def machine(self) -> TuringMachine:
        return fixture_machine(self.machine_name)


def _upto(machine_name: str, n_max: int) -> tuple[str, ...]:
    m = fixture_machine(machine_name)
    return tuple(x for n in range(n_max + 1) for x in inputs_of_length(m, n))


def small_fixtures() -> list[Fixture]:
    """Cases whose configuration width is at most 8 bits with at most 16 valid configurations."""
    return [
        Fixture("m1@T1", "m1", 1, ("0", "1")),
        Fixture("m_dirty@T1", "m_dirty", 1, ("0", "1")),
        Fixture("m_sweep@T1", "m_sweep", 1, _upto("m_sweep", 1)),
        Fixture("m_sweep@T2", "m_sweep", 2, _upto("m_sweep", 2)),
        Fixture("m_cycle@T2", "m_cycle", 2, _upto("m_cycle", 2)),
    ]


def composite_machines() -> list[str]:
    """Normalized fixture machines used for the all-inputs view."""
    return ["m1", "m_first0", "m_even", "m_sweep", "m_cycle"]
