"""Region validity, atom solving, property decisions."""

import random

import pytest

import boolnet as bn
import oracles

TAU = bn.BooleanType.of("nop", "inp", "swap")


def walkthrough():
    return bn.TransitionSystem.build(
        initial="t0", arcs=[("t0", "a", "t1"), ("t1", "a", "t2")]
    )


def test_atom_constructor_validation():
    with pytest.raises(ValueError):
        bn.SeparationAtom("ssp", "x", "x")
    with pytest.raises(ValueError):
        bn.SeparationAtom("zzz", "x", "y")
    assert str(bn.SeparationAtom("essp", "a", "s")) == "(a,s)"


def test_atoms_canonical_order():
    got = [(a.kind, str(a)) for a in bn.atoms(walkthrough())]
    assert got == [
        ("ssp", "(t0,t1)"),
        ("ssp", "(t0,t2)"),
        ("ssp", "(t1,t2)"),
        ("essp", "(a,t2)"),
    ]


def test_region_solves_semantics():
    r = bn.Region({"t0": 0, "t1": 1, "t2": 0}, {"a": "swap"})
    assert r.solves(bn.SeparationAtom("ssp", "t0", "t1"))
    assert not r.solves(bn.SeparationAtom("ssp", "t0", "t2"))
    # swap is total, so no event separation from this region
    assert not r.solves(bn.SeparationAtom("essp", "a", "t2"))
    ri = bn.Region({"t0": 1, "t1": 0, "t2": 0}, {"a": "inp"})
    assert ri.solves(bn.SeparationAtom("essp", "a", "t1"))


def test_validate_region():
    ts = walkthrough()
    assert bn.validate_region(ts, TAU, bn.Region({"t0": 0, "t1": 1, "t2": 0}, {"a": "swap"}))
    # arc image mismatch
    assert not bn.validate_region(ts, TAU, bn.Region({"t0": 0, "t1": 0, "t2": 1}, {"a": "swap"}))
    # tag outside the type
    assert not bn.validate_region(ts, bn.BooleanType.of("nop"), bn.Region({"t0": 0, "t1": 0, "t2": 0}, {"a": "swap"}))
    with pytest.raises(bn.DomainMismatch):
        bn.validate_region(ts, TAU, bn.Region({"t0": 0}, {"a": "nop"}))
    with pytest.raises(bn.DomainMismatch):
        bn.validate_region(ts, TAU, bn.Region({"t0": 0, "t1": 0, "t2": 0}, {"b": "nop"}))


def test_complete_region():
    ts = walkthrough()
    r = bn.complete_region(ts, TAU, 0, {"a": "swap"})
    assert r is not None and r.support == {"t0": 0, "t1": 1, "t2": 0}
    # inp twice from 1 runs off the table
    assert bn.complete_region(ts, TAU, 1, {"a": "inp"}) is None
    with pytest.raises(bn.DomainMismatch):
        bn.complete_region(ts, TAU, 0, {"zz": "nop"})


def test_solve_atom_returns_validating_solver():
    ts = walkthrough()
    atom = bn.SeparationAtom("ssp", "t0", "t1")
    r = bn.solve_atom(ts, TAU, atom)
    assert r is not None and bn.validate_region(ts, TAU, r) and r.solves(atom)
    assert bn.solve_atom(ts, TAU, bn.SeparationAtom("ssp", "t0", "t2")) is None
    assert bn.solve_atom(ts, TAU, bn.SeparationAtom("essp", "a", "t2")) is None


def test_solve_atom_matches_enumeration():
    rng = random.Random(2718)
    taus = [
        bn.BooleanType.of("nop", "inp", "swap"),
        bn.BooleanType.of("nop", "swap", "used"),
        bn.BooleanType.of("nop", "out", "free"),
        bn.BooleanType.of("nop", "set", "res"),
    ]
    for _ in range(30):
        ts = oracles.random_ts(rng, max_states=5, max_events=2)
        for tau in taus:
            regions = oracles.enumerate_regions(ts, tau)
            for atom in bn.atoms(ts):
                got = bn.solve_atom(ts, tau, atom)
                want = oracles.brute_solve_atom(ts, tau, (atom.kind, atom.first, atom.second), regions)
                assert (got is not None) == want, (atom, str(tau))


def test_decide_property_failure_is_canonical():
    out = bn.decide_property(walkthrough(), TAU, "both")
    assert isinstance(out, bn.SeparationAtom)
    assert (out.kind, str(out)) == ("ssp", "(t0,t2)")
    essp_only = bn.decide_property(walkthrough(), TAU, "essp")
    assert str(essp_only) == "(a,t2)"


def test_decide_property_noncanonical_failure_is_still_unsolvable():
    ts = walkthrough()
    out = bn.decide_property(ts, TAU, "both", canonical_failure=False)
    assert isinstance(out, bn.SeparationAtom)
    assert bn.solve_atom(ts, TAU, out) is None


def test_decide_property_witness_covers_every_atom():
    ts = bn.TransitionSystem.build(
        initial="t0", arcs=[("t0", "a", "t1"), ("t1", "a'", "t2")]
    )
    w = bn.decide_property(ts, TAU, "both")
    assert isinstance(w, bn.Witness)
    covered = set(w.coverage)
    assert covered == set(bn.atoms(ts))
    for atom, idx in w.coverage.items():
        region = w.regions[idx]
        assert region.solves(atom)
        assert bn.validate_region(ts, TAU, region)


def test_decide_property_rejects_unknown_property():
    with pytest.raises(ValueError):
        bn.decide_property(walkthrough(), TAU, "szzp")


def test_has_property_agrees_with_decide_property():
    rng = random.Random(404)
    for _ in range(25):
        ts = oracles.random_ts(rng, max_states=5, max_events=2)
        for prop in ("ssp", "essp", "both"):
            got = bn.has_property(ts, TAU, prop)
            assert got == isinstance(bn.decide_property(ts, TAU, prop), bn.Witness)
            assert got == oracles.brute_has_property(ts, TAU, prop)


def test_property_for_mode():
    assert bn.property_for_mode("embed") == "ssp"
    assert bn.property_for_mode("langsim") == "essp"
    assert bn.property_for_mode("realize") == "both"
    with pytest.raises(ValueError):
        bn.property_for_mode("perform")


def test_node_budget_accounting():
    b = bn.NodeBudget(2)
    assert b.remaining() == 2
    b.charge(2)
    assert b.remaining() == 0
    with pytest.raises(bn.SearchBudgetExceeded):
        b.charge(1)


def test_tiny_budget_aborts_search():
    g = bn.Graph3B.build([("v0", "v1"), ("v0", "v2"), ("v1", "v2")])
    gts, _ = bn.build_gadget(g, bn.GadgetSpec(problem="split", variant="directed", lam=1))
    with pytest.raises(bn.SearchBudgetExceeded):
        bn.decide_property(gts, TAU, "both", budget=bn.NodeBudget(1))


def test_serialize_parse_round_trip():
    ts = bn.TransitionSystem.build(
        initial="t0", arcs=[("t0", "a", "t1"), ("t1", "a'", "t2")]
    )
    w = bn.decide_property(ts, TAU, "both")
    back = bn.parse_regions(bn.serialize_regions(w))
    assert back == list(w.regions)
    assert bn.parse_regions(bn.serialize_regions([])) == []


@pytest.mark.parametrize(
    "text",
    [
        "sup s 0",  # support before any region header
        "region\nsup s 2\nsig a nop",  # bad bit
        "region\nsup s 0\nsig a knop",  # bad tag
        "region\nsup s 0\nsup s 1\nsig a nop",  # duplicate support
        "region\nwibble",  # unknown directive
    ],
)
def test_parse_regions_rejects(text):
    with pytest.raises((bn.ParseError, bn.UnknownInteraction)):
        bn.parse_regions(text)


def test_kernel_name_is_reported():
    assert bn.KERNEL in ("py", "c")
