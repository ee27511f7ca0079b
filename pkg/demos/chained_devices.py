"""Well-chained devices for a two-symbol machine.

A device marks configurations as reachable.  Chain checking accepts a
device when every marked configuration has a marked predecessor and a
marked successor.  This script walks through which devices pass and what
the two variants (step counter, loop-back) change.

Run: python demos/chained_devices.py
"""
from chainbench.chain import (Budget, TruthTableClass, augment_with_cycles, check_all,
                              decide_via_device, enumerate_passing_devices, find_device,
                              is_union_of_cycles, reachable_set, spurious_cycles)
from chainbench.configs import CounterSpace, MachineSpace, SpaceBound, simulate
from chainbench.fixtures import fixture_machine
from chainbench.turing import format_machine, loopback_transform

m = fixture_machine("m1")
print(format_machine(m))
space = MachineSpace(m, SpaceBound(1))
for c in space.configurations():
    print(" ", c, space.describe(c), "->", space.next(c))

for x in ("0", "1"):
    print(f"\ninput {x!r}: simulate -> {simulate(m, None, SpaceBound(1), x).verdict}")
    reach = reachable_set(space, x)
    print("  reachable:", sorted(reach))
    cycles = spurious_cycles(space, x)
    print("  spurious cycles:", cycles)
    passing = enumerate_passing_devices(space, x)
    print(f"  {len(passing)} passing devices; smallest and largest:",
          sorted(min(passing, key=len)), sorted(max(passing, key=len)))
    padded = augment_with_cycles(space, reach, cycles)
    print("  reach + all cycles passes:", check_all(space, x, padded, space.width).passed,
          "| decides:", decide_via_device(space, padded, space.width))

# The step counter makes every configuration carry its step number, so no
# cycle survives and only the exact indicator passes.
cs = CounterSpace(space)
print("\nwith a step counter:", len(enumerate_passing_devices(cs, "0")), "passing device(s)")

# Loop-back closes an accepting run into a cycle through the start.
loop = MachineSpace(loopback_transform(m, "0"), SpaceBound(1))
devices = enumerate_passing_devices(loop, "0")
print("with loop-back on '0':", len(devices), "passing, all unions of cycles:",
      all(is_union_of_cycles(loop, d) for d in devices))

# Binary search over encodings finds the least passing truth table.
res = find_device(space, "0", Budget(space.width), TruthTableClass(space))
print(f"\nleast passing truth table {res.encoding} after {res.oracle_calls} oracle calls "
      f"({res.encoding_length} encoding bits)")
