from itertools import product

import pytest

from chainbench.chain import (Budget, CoverClass, DeviceBudgetExceeded, RestrictedClass,
                              SearchBudgetExceeded, TruthTableClass, augment_with_cycles, chained,
                              check_all, cycle_decomposition, decide_via_device,
                              enumerate_passing_devices, eval_bounded, exact_indicator, find_device,
                              functional_cycles, is_union_of_cycles, least_passing_by_enumeration,
                              reachable_set, spurious_cycles)
from chainbench.configs import ACCEPT, CounterSpace, MachineSpace, SpaceBound, simulate
from chainbench.devices import TruthTableDevice
from chainbench.fixtures import fixture_machine, small_fixtures
from chainbench.turing import loopback_transform

M1 = fixture_machine("m1")
SPACE = MachineSpace(M1, SpaceBound(1))
DOMAIN = SPACE.configurations()


def ind(*points):
    return TruthTableDevice.indicator(DOMAIN, points, 6)


EXACT0 = ind("000010", "001100")


def test_eval_bounded_examples():
    assert eval_bounded(EXACT0, "000010", 6) == 1
    assert eval_bounded(EXACT0, "000011", 6) == 0
    assert eval_bounded(EXACT0, "000010", 0) is None


def test_chained_examples():
    assert chained(SPACE, "0", EXACT0, "000010", 6) == 1
    assert chained(SPACE, "0", EXACT0, "000011", 6) == 1
    assert chained(SPACE, "0", ind("001100"), "001100", 6) == 0
    assert chained(SPACE, "0", EXACT0, "000010", 5) == 0     # over budget
    with pytest.raises(ValueError):
        chained(SPACE, "0", EXACT0, "111111", 6)


def test_check_all_examples():
    assert check_all(SPACE, "0", EXACT0, 6).passed
    flipped = check_all(SPACE, "0", ind("000010"), 6)
    assert not flipped.passed and flipped.witness == "000010"
    zero = check_all(SPACE, "0", ind(), 6)
    assert not zero.passed and zero.witness == SPACE.initial("0")


def test_reach_and_decide_examples():
    assert reachable_set(SPACE, "0") == {"000010", "001100"}
    assert reachable_set(SPACE, "1") == {"000011"}
    assert reachable_set(SPACE, "1", step_cap=0) == {"000011"}
    assert reachable_set(SPACE, "0", step_cap=0) == {"000010"}
    assert decide_via_device(SPACE, EXACT0, 6) == "accept"
    assert decide_via_device(SPACE, exact_indicator(SPACE, "1"), 6) == "reject"
    with pytest.raises(DeviceBudgetExceeded):
        decide_via_device(SPACE, EXACT0, 1)


def test_spurious_cycles_of_m1():
    # every configuration without a successor move is a self-loop, so the
    # accept-state and blank-reading configurations form cycles too
    assert spurious_cycles(SPACE, "0") == [["000011"], ["000100"], ["001010"], ["001011"]]
    assert ["000011"] not in spurious_cycles(SPACE, "1")
    assert all("001100" not in c for c in functional_cycles(SPACE))


def test_cycle_augmentation_passes_and_keeps_verdict():
    dev = augment_with_cycles(SPACE, reachable_set(SPACE, "0"), [["000011"]])
    assert dev.ones() == {"000010", "001100", "000011"}
    assert check_all(SPACE, "0", dev, 6).passed
    assert augment_with_cycles(SPACE, reachable_set(SPACE, "0"), []) == EXACT0
    rej = augment_with_cycles(SPACE, reachable_set(SPACE, "1"), spurious_cycles(SPACE, "1"))
    assert check_all(SPACE, "1", rej, 6).passed and decide_via_device(SPACE, rej, 6) == "reject"
    with pytest.raises(ValueError):
        augment_with_cycles(SPACE, reachable_set(SPACE, "1"), [["000011"]])


def test_find_device_examples():
    cls = TruthTableClass(SPACE)
    res = find_device(SPACE, "0", Budget(6), cls)
    ref = least_passing_by_enumeration(SPACE, "0", cls, 6)
    assert res.encoding == ref[0] == "100001"
    assert res.oracle_calls <= cls.encoding_length + 1
    assert check_all(SPACE, "0", res.device, 6).passed
    init = SPACE.initial("0")
    none = find_device(SPACE, "0", Budget(6), RestrictedClass(cls, lambda d: d.value(init) == 0))
    assert none.device is None and none.oracle_calls == 1


def test_find_device_limits():
    cls = TruthTableClass(SPACE)
    assert find_device(SPACE, "0", Budget(6, D=3), cls).device is None
    with pytest.raises(SearchBudgetExceeded):
        find_device(SPACE, "0", Budget(6), cls, max_checks=2)
    with pytest.raises(ValueError):
        Budget(0)


def test_find_device_over_covers():
    cls = CoverClass(6, 1)
    res = find_device(SPACE, "1", Budget(6), cls)
    ref = least_passing_by_enumeration(SPACE, "1", cls, 6)
    assert res.device is not None and res.encoding == ref[0]
    assert check_all(SPACE, "1", res.device, 6).passed


@pytest.mark.parametrize("fx", small_fixtures(), ids=lambda f: f.name)
def test_enumeration_matches_brute_force(fx):
    space = MachineSpace(fx.machine, SpaceBound(fx.T))
    domain = space.configurations()
    for x in fx.inputs[:2]:
        brute = {frozenset(c for c, b in zip(domain, bits) if b)
                 for bits in product((0, 1), repeat=len(domain))
                 if check_all(space, x, TruthTableDevice.indicator(
                     domain, [c for c, b in zip(domain, bits) if b], space.width), space.width).passed}
        assert set(enumerate_passing_devices(space, x)) == brute
    assert enumerate_passing_devices(space, fx.inputs[0], P=space.width - 1) == []


def test_counter_space_has_only_the_exact_device():
    space = CounterSpace(SPACE)
    for x in ("0", "1"):
        assert enumerate_passing_devices(space, x, limit=3) == [reachable_set(space, x)]


# ---- loop-back: what is and is not a union of cycles ------------------------------------

def _loop_cases():
    for fx in small_fixtures():
        if fx.machine_name == "m_dirty":
            continue
        for x in fx.inputs:
            yield fx, x, MachineSpace(loopback_transform(fx.machine, x), SpaceBound(fx.T))


def _accepts(fx, x):
    return simulate(fx.machine, None, SpaceBound(fx.T), x).verdict == ACCEPT


def test_loopback_devices_are_reach_plus_cycles_with_unchanged_verdict():
    for fx, x, space in _loop_cases():
        verdict = "accept" if _accepts(fx, x) else "reject"
        for points in enumerate_passing_devices(space, x):
            assert cycle_decomposition(space, x, points) is not None
            dev = TruthTableDevice.indicator(space.configurations(), points, space.width)
            assert decide_via_device(space, dev, space.width) == verdict


def test_loopback_devices_for_accepted_inputs_are_unions_of_cycles():
    seen = 0
    for fx, x, space in _loop_cases():
        if _accepts(fx, x):
            for points in enumerate_passing_devices(space, x):
                seen += 1
                assert is_union_of_cycles(space, points)
    assert seen


def test_rejecting_run_with_a_tail_is_not_a_cycle():
    # the unary sweeper on "11" walks right before it starts looping; the
    # initial configuration is forced into every passing device but lies on no cycle
    m = fixture_machine("m_sweep")
    space = MachineSpace(loopback_transform(m, "11"), SpaceBound(2))
    reach = reachable_set(space, "11")
    assert simulate(m, None, SpaceBound(2), "11").verdict != ACCEPT
    assert check_all(space, "11", TruthTableDevice.indicator(space.configurations(), reach,
                                                             space.width), space.width).passed
    assert not is_union_of_cycles(space, reach)
    assert not any(space.initial("11") in c for c in functional_cycles(space))
