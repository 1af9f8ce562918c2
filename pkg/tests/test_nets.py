"""Boolean nets: firing, reachability graphs, parsing."""

import random
import warnings

import pytest

import boolnet as bn
import oracles

TAU = bn.BooleanType.of("nop", "inp", "swap")


def walkthrough_net():
    """Two places, two transitions; its reachability graph is a 3-chain."""
    return bn.BooleanNet(
        "demo",
        TAU,
        ("R1", "R2"),
        ("a", "a'"),
        {("R1", "a"): "inp", ("R2", "a"): "swap", ("R2", "a'"): "inp"},
        (1, 0),
    )


def test_marking_text():
    assert bn.Marking((1, 0, 1)).text() == "(1,0,1)"


def test_fire_golden():
    net = walkthrough_net()
    assert net.fire((1, 0), "a").bits == (0, 1)
    assert net.fire((0, 1), "a'").bits == (0, 0)
    assert net.fire((0, 0), "a") is None  # inp needs a token in R1
    assert net.fire(bn.Marking((1, 0)), "a").bits == (0, 1)
    with pytest.raises(bn.UnknownTransition):
        net.fire((1, 0), "zz")


def test_implicit_flow_defaults_to_nop():
    net = walkthrough_net()
    assert net.flow[("R1", "a'")] == "nop"


def test_constructor_rejections():
    with pytest.raises(bn.ParseError):
        bn.BooleanNet(None, TAU, ("p", "p"), ("t",), {}, (0, 0))
    with pytest.raises(bn.ParseError):
        bn.BooleanNet(None, TAU, ("p",), ("t", "t"), {}, (0,))
    with pytest.raises(bn.ParseError):
        bn.BooleanNet(None, TAU, ("p",), ("t",), {}, (0, 1))
    with pytest.raises(bn.ParseError):
        bn.BooleanNet(None, TAU, ("p",), ("t",), {("q", "t"): "nop"}, (0,))
    with pytest.raises(bn.ParseError):
        bn.BooleanNet(None, TAU, ("p",), ("t",), {("p", "u"): "nop"}, (0,))
    # flow outside the declared type
    with pytest.raises(bn.ParseError):
        bn.BooleanNet(None, TAU, ("p",), ("t",), {("p", "t"): "set"}, (0,))
    # implicit nop requires nop in the type
    with pytest.raises(bn.ParseError):
        bn.BooleanNet(None, bn.BooleanType.of("swap"), ("p",), ("t",), {}, (0,))


def test_reachability_golden():
    rg = bn.reachability_graph(walkthrough_net())
    assert rg.states == ("(1,0)", "(0,1)", "(0,0)")
    assert rg.events == ("a", "a'")
    assert rg.arcs == ((0, 0, 1), (1, 1, 2))
    assert rg.initial == 0


def test_reachability_drops_dead_transitions_with_warning():
    net = bn.BooleanNet(
        None,
        bn.BooleanType.of("nop", "used"),
        ("p",),
        ("t",),
        {("p", "t"): "used"},
        (0,),
    )
    with pytest.warns(UserWarning, match="dead"):
        rg = bn.reachability_graph(net)
    assert rg.states == ("(0)",)
    assert rg.events == ()


def test_reachability_place_bound():
    places = tuple("p%d" % i for i in range(bn.nets.PLACE_BOUND + 1))
    net = bn.BooleanNet(None, TAU, places, ("t",), {}, (0,) * len(places))
    with pytest.raises(bn.PlaceBoundExceeded):
        bn.reachability_graph(net)


def test_reachability_matches_naive_exploration():
    rng = random.Random(821)
    for _ in range(150):
        net = oracles.random_net(rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rg = bn.reachability_graph(net)
        assert (rg.states, rg.events, rg.arcs, rg.initial) == oracles.naive_reachability(net)


def test_serialize_parse_round_trip():
    net = walkthrough_net()
    back = bn.parse_net(bn.serialize_net(net))
    assert back.places == net.places
    assert back.transitions == net.transitions
    assert back.flow == net.flow
    assert back.m0 == net.m0
    assert back.tau.canonical() == net.tau.canonical()


def test_parse_golden():
    net = bn.parse_net(
        """
        net n1
        type nop,inp,swap
        place R1 1
        place R2 0
        trans a
        flow R1 a inp
        """
    )
    assert net.m0 == (1, 0)
    assert net.flow[("R1", "a")] == "inp"
    assert net.flow[("R2", "a")] == "nop"


def test_parse_strict_requires_full_flow():
    text = """
    type nop,inp
    place p 0
    trans t
    """
    assert bn.parse_net(text).flow[("p", "t")] == "nop"
    with pytest.raises(bn.ParseError):
        bn.parse_net(text, strict=True)


@pytest.mark.parametrize(
    "text",
    [
        "place p 0\ntrans t",  # no type
        "type nop\nplace p 2\ntrans t",  # bad bit
        "type nop\nplace p 0\nplace p 1\ntrans t",  # duplicate place
        "type nop\nplace p 0\ntrans t\nflow p t inp",  # tag outside type
        "type nop\nplace p 0\ntrans t\nflow p t nop\nflow p t nop",  # duplicate flow
        "type nop\nplace p 0\ntrans t\nwibble",  # unknown directive
    ],
)
def test_parse_rejects(text):
    with pytest.raises(bn.ParseError):
        bn.parse_net(text)


def test_dot_output_smoke():
    dot = bn.net_to_dot(walkthrough_net())
    assert dot.startswith("digraph")
    assert "R1" in dot and "a'" in dot
