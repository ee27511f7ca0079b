from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from chainbench.chain import reachable_set
from chainbench.configs import (ACCEPT, REJECT_LOOP, STEP_CAP, ConfigurationError, CounterSpace,
                                EncodingScheme, MachineSpace, SpaceBound, accepting_configuration,
                                all_inputs_machine, decode_configuration, encode_configuration,
                                initial_configuration, iter_bitstrings, next_config, previous_configs,
                                simulate, step_counter_transform)
from chainbench.fixtures import MACHINE_NAMES, fixture_machine, inputs_of_length, load_machine
from chainbench.turing import (BLANK, MachineError, TuringMachine, format_machine, loopback_transform,
                               normalize_single_accept, parse_machine)

M1 = fixture_machine("m1")
B1 = SpaceBound(1)


def test_m1_codes_and_width():
    scheme = EncodingScheme.for_machine(M1)
    assert scheme.alpha == 3
    assert [scheme.code(s) for s in ("s1", "sA", "0", "1", BLANK)] == ["000", "001", "010", "011", "100"]
    assert B1.width(scheme) == 6


def test_encode_examples():
    assert initial_configuration(M1, None, B1, "0") == "000010"
    assert accepting_configuration(M1, None, B1) == "001100"
    assert initial_configuration(M1, None, SpaceBound(2), "01") == "000010011"
    assert encode_configuration(M1, None, SpaceBound(2), "sA", ["1", "0"], 2) == "011001010"
    with pytest.raises(ConfigurationError):
        encode_configuration(M1, None, B1, "s1", ["0"], 2)
    with pytest.raises(ConfigurationError):
        encode_configuration(M1, None, B1, "s1", ["z"], 1)


def test_decode_examples():
    assert decode_configuration(M1, None, B1, "000010") == ("s1", ("0",), 1)
    assert decode_configuration(M1, None, B1, "001100") == ("sA", (BLANK,), 1)
    assert decode_configuration(M1, None, B1, "010010") is None
    assert decode_configuration(M1, None, B1, "010000") is None   # state in the last block
    assert decode_configuration(M1, None, B1, "000111") is None   # unused code


def test_next_and_previous_examples():
    assert next_config(M1, None, B1, "000010") == "001100"
    assert next_config(M1, None, B1, "000011") == "000011"
    with pytest.raises(ConfigurationError):
        next_config(M1, None, B1, "001100")
    assert previous_configs(M1, None, B1, "001100") == ("000010",)
    assert previous_configs(M1, None, B1, "000011") == ("000011",)
    assert previous_configs(M1, None, B1, "000010") == ()


def test_m1_valid_configurations():
    space = MachineSpace(M1, B1)
    assert space.configurations() == ["000010", "000011", "000100", "001010", "001011", "001100"]
    assert sum(space.is_valid(c) for c in iter_bitstrings(6)) == 6
    assert all(space.next(c) is not None for c in space.configurations() if c != "001100")


def _duality(space):
    valid = [c for c in iter_bitstrings(space.width) if space.is_valid(c)]
    assert valid == space.configurations()
    succ = {c: space.next(c) for c in valid}
    for c in valid:
        assert set(space.previous(c)) == {p for p in valid if succ[p] == c}


@pytest.mark.parametrize("name", MACHINE_NAMES)
@pytest.mark.parametrize("T", [1, 2])
def test_previous_is_inverse_of_next_on_fixtures(name, T):
    space = MachineSpace(fixture_machine(name), SpaceBound(T))
    if space.width <= 12:
        _duality(space)


def _alpha2_machines():
    # states s1, sA; tape 0, _: every choice for the two s1 transitions
    options = [None] + list(product(("s1", "sA"), ("0", BLANK), "LRS"))
    for a, b in product(options, repeat=2):
        delta = {}
        if a:
            delta[("s1", "0")] = a
        if b:
            delta[("s1", BLANK)] = b
        yield TuringMachine(["s1", "sA"], ["0"], ["0", BLANK], "s1", "sA", delta)


def test_duality_for_every_two_state_binary_machine():
    machines = list(_alpha2_machines())
    assert len(machines) == 169
    for m in machines:
        for T in (1, 2, 3):
            _duality(MachineSpace(m, SpaceBound(T)))


def test_simulate_examples():
    assert simulate(M1, None, B1, "0").verdict == ACCEPT
    assert simulate(M1, None, B1, "0").steps_used == 1
    out = simulate(M1, None, B1, "1")
    assert (out.verdict, out.steps_used) == (REJECT_LOOP, 1)
    assert simulate(M1, None, B1, "0", step_cap=0).verdict == STEP_CAP
    assert simulate(M1, None, B1, "0", trace=True).trace == ("000010", "001100")


def test_machine_file_round_trip_and_errors():
    for name in MACHINE_NAMES:
        m = fixture_machine(name)
        assert parse_machine(format_machine(m)) == m
    text = format_machine(M1)
    with pytest.raises(MachineError):
        parse_machine(text + "delta: s1 0 -> s1 0 R\n")     # duplicate transition
    with pytest.raises(MachineError):
        parse_machine(text.replace("start: s1", ""))
    with pytest.raises(MachineError):
        parse_machine(text + "delta: s1 9 -> s1 0 R\n")
    with pytest.raises(KeyError):
        load_machine("fixture:nope")


def _enters_accept(m, T, x):
    space = MachineSpace(m, SpaceBound(T))
    c, seen = space.initial(x), set()
    while c is not None and c not in seen:
        if space.decode(c)[0] == m.accept:
            return True
        seen.add(c)
        c = space.next(c)
    return False


def test_normalization_preserves_normalized_machine_verdicts():
    norm = normalize_single_accept(M1)
    for x in ("0", "1"):
        assert simulate(norm, None, SpaceBound(2), x).verdict == simulate(M1, None, B1, x).verdict


@pytest.mark.parametrize("n", [1, 2])
def test_normalization_cleans_dirty_acceptance(n):
    raw = fixture_machine("m_dirty")
    norm = normalize_single_accept(raw)
    for x in inputs_of_length(raw, n):
        out = simulate(norm, None, SpaceBound(n + 1), x)
        assert (out.verdict == ACCEPT) == _enters_accept(raw, n, x)
        if out.verdict == ACCEPT:
            assert out.final == accepting_configuration(norm, None, SpaceBound(n + 1))


def test_normalization_turns_missing_transitions_into_loops():
    stuck = TuringMachine(["s1", "sA", "q"], ["0"], ["0", BLANK], "s1", "sA",
                          {("s1", "0"): ("q", "0", "R")})
    norm = normalize_single_accept(stuck)
    out = simulate(norm, None, SpaceBound(3), "0")
    assert out.verdict == REJECT_LOOP
    space = MachineSpace(norm, SpaceBound(3))
    assert space.next(out.final) == out.final


def test_loopback_examples():
    loop0 = MachineSpace(loopback_transform(M1, "0"), B1)
    assert loop0.next(loop0.c_accept) == loop0.initial("0")
    loop1 = MachineSpace(loopback_transform(M1, "1"), B1)
    assert reachable_set(loop1, "1") == reachable_set(MachineSpace(M1, B1), "1")
    with pytest.raises(MachineError):
        loopback_transform(loopback_transform(M1, "0"), "0")


@pytest.mark.parametrize("name", ["m_first0", "m_even", "m_sweep"])
def test_loopback_rewrites_input_and_has_no_halting_configuration(name):
    m = fixture_machine(name)
    for n in range(4):
        for x in inputs_of_length(m, n):
            T = max(1, n)
            space = MachineSpace(loopback_transform(m, x), SpaceBound(T))
            assert all(space.next(c) is not None for c in space.configurations())
            if simulate(m, None, SpaceBound(T), x).verdict == ACCEPT:
                out = simulate(loopback_transform(m, x), None, SpaceBound(T), x)
                assert out.verdict == ACCEPT
                assert space.next(out.final) != out.final


@settings(max_examples=40, deadline=None)
@given(x=st.text(alphabet="01", min_size=2, max_size=5))
def test_loopback_restores_initial_configuration(x):
    m = fixture_machine("m_first0")
    space = MachineSpace(loopback_transform(m, x), SpaceBound(len(x)))
    c, init = space.c_accept, space.initial(x)
    for _ in range(4 * len(x) + 4):
        c = space.next(c)
        if c == init:
            break
    assert c == init


def test_counter_examples():
    space = step_counter_transform(M1, B1)
    assert space.width == 12
    start = space.initial("0")
    assert space.split(start) == (0, "000010")
    assert space.split(space.next(start)) == (1, "001100")
    assert space.is_accepting(space.next(start))
    assert space.previous(space.join(1, "001100")) == (space.join(0, "000010"),)
    assert space.previous(space.join(0, "001100")) == ()
    top = space.join((1 << 6) - 1, "000011")
    assert space.next(top) is None
    for r in range(5):
        assert space.next(space.join(r, "000011")) == space.join(r + 1, "000011")
    with pytest.raises(ConfigurationError):
        CounterSpace(MachineSpace(M1, B1), 5)


def test_counter_duality():
    _duality(CounterSpace(MachineSpace(M1, B1)))


def test_all_inputs_examples():
    view = all_inputs_machine(M1, 1, "0", "1")
    assert view.markers() == [("0", "accept"), ("1", "reject")]
    first0 = fixture_machine("m_first0")
    marks = all_inputs_machine(first0, 2, "00", "11").markers()
    assert [x for x, v in marks if v == "accept"] == ["00", "01"]
    single = all_inputs_machine(M1, 1, "1", "1")
    assert single.markers() == [("1", "reject")]
    with pytest.raises(ConfigurationError):
        all_inputs_machine(M1, 1, "1", "0")


def test_all_inputs_previous_matches_next():
    view = all_inputs_machine(fixture_machine("m_sweep"), 2, "11", "11")
    c = view.initial()
    while c is not None:
        nxt = view.next(c)
        if nxt is not None:
            assert c in view.previous(nxt)
        c = nxt
    assert view.next(view.halt_configuration()) is None
