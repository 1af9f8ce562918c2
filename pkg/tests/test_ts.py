"""Transition systems: construction, parsing, simulation maps, relations."""

import random

import pytest

import boolnet as bn
import oracles


def chain(*events):
    arcs = [("s%d" % i, e, "s%d" % (i + 1)) for i, e in enumerate(events)]
    return bn.TransitionSystem.build(initial="s0", arcs=arcs)


def test_build_orders_by_first_appearance():
    ts = bn.TransitionSystem.build(
        initial="b", arcs=[("b", "y", "a"), ("a", "x", "b")]
    )
    assert ts.states == ("b", "a")
    assert ts.events == ("y", "x")
    assert ts.initial == 0
    assert ts.arcs == ((0, 0, 1), (1, 1, 0))


def test_build_respects_explicit_order():
    ts = bn.TransitionSystem.build(
        initial="a",
        arcs=[("a", "x", "b")],
        states=["b", "a"],
        events=["x"],
    )
    assert ts.states == ("b", "a")
    assert ts.initial == 1


def test_build_rejects_nondeterminism():
    with pytest.raises(bn.NonDeterministic):
        bn.TransitionSystem.build(
            initial="a", arcs=[("a", "x", "b"), ("a", "x", "a")]
        )


def test_build_rejects_unreachable_state():
    with pytest.raises(bn.Unreachable):
        bn.TransitionSystem.build(
            initial="a", arcs=[("a", "x", "a"), ("b", "x", "b")]
        )


def test_build_rejects_useless_event():
    with pytest.raises(bn.UselessEvent):
        bn.TransitionSystem.build(
            initial="a", arcs=[("a", "x", "a")], events=["x", "y"]
        )


def test_build_rejects_unknown_ids():
    with pytest.raises(bn.UnknownId):
        bn.TransitionSystem.build(initial="z", arcs=[("a", "x", "a")], states=["a"])
    with pytest.raises(bn.UnknownId):
        bn.TransitionSystem.build(initial="a", arcs=[("a", "x", "q")], states=["a"])


def test_build_rejects_bad_identifier():
    with pytest.raises(bn.ParseError):
        bn.TransitionSystem.build(initial="a b", arcs=[("a b", "x", "a b")])


def test_accessors():
    ts = chain("a", "b")
    assert ts.initial_state == "s0"
    assert ts.successor("s0", "a") == "s1"
    assert ts.successor("s1", "a") is None
    assert ts.has_arc("s1", "b") and not ts.has_arc("s2", "b")
    with pytest.raises(bn.UnknownId):
        ts.successor("nope", "a")
    with pytest.raises(bn.UnknownId):
        ts.successor("s0", "nope")


def test_parse_golden():
    ts = bn.parse_ts(
        """
        # two steps
        ts demo
        initial s0
        arc s0 a s1
        arc s1 b s2
        """
    )
    assert ts.name == "demo"
    assert ts.states == ("s0", "s1", "s2")
    assert ts.events == ("a", "b")
    assert ts.arcs == ((0, 0, 1), (1, 1, 2))


@pytest.mark.parametrize(
    "text",
    [
        "arc s0 a s1",  # no initial
        "initial s0\ninitial s1\narc s0 a s0",  # duplicate directive
        "initial s0\nfrobnicate s0",  # unknown directive
        "initial s0\narc s0 a",  # wrong arity
        "initial s0\narc s0 a s1\narc s0 a s1",  # duplicate arc
    ],
)
def test_parse_rejects(text):
    with pytest.raises((bn.ParseError, bn.NoInitial, bn.NonDeterministic)):
        bn.parse_ts(text)


def test_serialize_parse_round_trip():
    rng = random.Random(5150)
    for _ in range(40):
        ts = oracles.random_ts(rng)
        back = bn.parse_ts(bn.serialize_ts(ts))
        assert back.states == ts.states
        assert back.events == ts.events
        assert back.arcs == ts.arcs
        assert back.initial == ts.initial


def test_dot_output_smoke():
    dot = bn.ts_to_dot(chain("a"))
    assert dot.startswith("digraph")
    assert "doublecircle" in dot  # initial state is highlighted
    assert '"s0" -> "s1"' in dot


def test_induced_simulation_identity():
    ts = chain("a", "b")
    phi = bn.induced_simulation(ts, ts)
    assert phi is not None
    assert phi.mapping == {"s0": "s0", "s1": "s1", "s2": "s2"}
    assert phi.is_injective() and phi.is_surjective() and phi.reflects_events()


def test_induced_simulation_none_when_structure_differs():
    a = chain("a", "a")  # three states in a row
    b = bn.TransitionSystem.build(initial="q0", arcs=[("q0", "a", "q1"), ("q1", "a", "q0")])
    # a's two steps land on q0, but a's s2 has no outgoing arc while q0 does;
    # the map still exists (it only has to preserve arcs, not reflect them)
    phi = bn.induced_simulation(a, b)
    assert phi is not None and not phi.is_injective()
    # shrinking the target below the source's reach kills the map
    c = bn.TransitionSystem.build(initial="q0", arcs=[("q0", "a", "q1")])
    assert bn.induced_simulation(a, c) is None


def test_induced_simulation_requires_event_cover():
    with pytest.raises(bn.EventSetMismatch):
        bn.induced_simulation(chain("a", "b"), chain("a", "a"))


def test_induced_simulation_matches_exhaustive_search():
    rng = random.Random(31337)
    checked = 0
    for _ in range(80):
        a = oracles.random_ts(rng, max_states=4, max_events=2)
        b = oracles.random_ts(rng, max_states=4, max_events=2)
        if set(a.events) - set(b.events):
            continue
        sims = oracles.all_simulations(a, b)
        assert len(sims) <= 1  # the induced map is unique when it exists
        phi = bn.induced_simulation(a, b)
        if phi is None:
            assert sims == []
        else:
            got = tuple(b.state_index[phi.mapping[s]] for s in a.states)
            assert sims == [got]
        checked += 1
    assert checked > 30


def test_check_relation_modes():
    a = chain("a", "b")
    loops = bn.TransitionSystem.build(
        initial="q", arcs=[("q", "a", "q"), ("q", "b", "q")]
    )
    # the collapsing map exists but is neither injective nor event-reflecting
    assert bn.check_relation(a, loops, "embed") is False
    assert bn.check_relation(a, loops, "langsim") is False
    assert bn.check_relation(a, loops, "realize") is False
    # identity: every mode holds
    for mode in bn.MODES:
        assert bn.check_relation(a, a, mode) is True
    # injective into a longer chain: embedding only
    longer = chain("a", "b", "a")
    assert bn.check_relation(a, longer, "embed") is True
    assert bn.check_relation(a, longer, "langsim") is False
    assert bn.check_relation(a, longer, "realize") is False


def test_check_relation_requires_equal_alphabets():
    with pytest.raises(bn.EventSetMismatch):
        bn.check_relation(chain("a"), chain("a", "b"), "embed")


def test_check_relation_rejects_unknown_mode():
    with pytest.raises(ValueError):
        bn.check_relation(chain("a"), chain("a"), "perform")


def test_modes_constant():
    assert bn.MODES == ("embed", "langsim", "realize")
