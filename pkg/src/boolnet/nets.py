"""Boolean-typed Petri nets: firing rule and reachability graphs.

A net couples every place to every transition through one interaction of its
type.  Markings are bit vectors over the places; firing applies the coupled
interaction at every place simultaneously and is enabled only when all of
them are defined.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import ParseError, PlaceBoundExceeded, UnknownTransition
from .interactions import BooleanType, apply_interaction, check_tag
from .ts import TransitionSystem

# Marking tuples stay cheap well past a hundred places; the bound exists to
# reject inputs so wide that no marking-space exploration could finish anyway.
PLACE_BOUND = 512


@dataclass(frozen=True)
class Marking:
    """Bit vector over a net's places, in canonical place order."""

    bits: tuple[int, ...]

    def text(self) -> str:
        return "(" + ",".join(str(b) for b in self.bits) + ")"


class BooleanNet:
    __slots__ = ("name", "tau", "places", "transitions", "flow", "m0")

    def __init__(
        self,
        name: str | None,
        tau: BooleanType,
        places: tuple[str, ...],
        transitions: tuple[str, ...],
        flow: dict[tuple[str, str], str],
        m0: tuple[int, ...],
    ):
        """flow maps (place, transition) to a tag; missing pairs mean nop.

        The completed flow must take values inside tau (so leaving pairs
        implicit requires nop ∈ tau).
        """
        if len(set(places)) != len(places):
            raise ParseError("duplicate place name")
        if len(set(transitions)) != len(transitions):
            raise ParseError("duplicate transition name")
        if len(m0) != len(places):
            raise ParseError("initial marking arity differs from place count")
        full: dict[tuple[str, str], str] = {}
        for p in places:
            for t in transitions:
                tag = flow.get((p, t), "nop")
                check_tag(tag)
                if tag not in tau:
                    raise ParseError(f"flow {p}/{t} uses {tag!r} outside type {tau}")
                full[(p, t)] = tag
        for (p, t) in flow:
            if p not in places:
                raise ParseError(f"flow references unknown place {p!r}")
            if t not in transitions:
                raise ParseError(f"flow references unknown transition {t!r}")
        self.name = name
        self.tau = tau
        self.places = tuple(places)
        self.transitions = tuple(transitions)
        self.flow = full
        self.m0 = tuple(int(b) for b in m0)

    def initial_marking(self) -> Marking:
        return Marking(self.m0)

    def fire(self, m: Marking | tuple[int, ...], t: str) -> Marking | None:
        """Successor marking, or None when t is not enabled at m."""
        if t not in self.transitions:
            raise UnknownTransition(t)
        bits = m.bits if isinstance(m, Marking) else tuple(m)
        out = []
        for p, b in zip(self.places, bits):
            nb = apply_interaction(self.flow[(p, t)], b)
            if nb is None:
                return None
            out.append(nb)
        return Marking(tuple(out))

    def __repr__(self) -> str:
        label = self.name or "net"
        return f"<{label}: {len(self.places)} places, {len(self.transitions)} transitions, type {self.tau}>"


def fire(net: BooleanNet, m: Marking | tuple[int, ...], t: str) -> Marking | None:
    return net.fire(m, t)


def reachability_graph(net: BooleanNet) -> TransitionSystem:
    """Explore all markings reachable from m0 and return them as a TS.

    State names are the parenthesized bit tuples in place order.  Transitions
    that never fire are dropped from the event alphabet (with a warning) so
    the result satisfies the no-useless-event invariant.

    Markings are explored as integer bitmasks (place k = bit k): a transition
    is enabled iff every 0-place lies in its defined-at-0 set and every
    1-place in its defined-at-1 set, and the successor marking is two mask
    intersections — which keeps the exploration linear in markings times
    transitions rather than places.
    """
    n = len(net.places)
    if n > PLACE_BOUND:
        raise PlaceBoundExceeded(n, PLACE_BOUND)
    full = (1 << n) - 1
    # per transition: defined-at-0 / defined-at-1 place sets and the subsets
    # of those mapping to 1
    rows = []
    for t in net.transitions:
        d0 = d1 = a0 = a1 = 0
        for k, p in enumerate(net.places):
            img0 = apply_interaction(net.flow[(p, t)], 0)
            img1 = apply_interaction(net.flow[(p, t)], 1)
            if img0 is not None:
                d0 |= 1 << k
                if img0:
                    a0 |= 1 << k
            if img1 is not None:
                d1 |= 1 << k
                if img1:
                    a1 |= 1 << k
        rows.append((t, d0, d1, a0, a1))

    def text(m: int) -> str:
        return "(" + ",".join(str((m >> k) & 1) for k in range(n)) + ")"

    m0 = 0
    for k, b in enumerate(net.m0):
        if b:
            m0 |= 1 << k
    seen = {m0: text(m0)}
    order = [m0]
    arcs: list[tuple[str, str, str]] = []
    fired: set[str] = set()
    i = 0
    while i < len(order):
        m = order[i]
        src = seen[m]
        i += 1
        for t, d0, d1, a0, a1 in rows:
            if (~m & full & ~d0) or (m & ~d1):
                continue
            m2 = (~m & a0) | (m & a1)
            fired.add(t)
            if m2 not in seen:
                seen[m2] = text(m2)
                order.append(m2)
            arcs.append((src, t, seen[m2]))
    dead = [t for t in net.transitions if t not in fired]
    if dead:
        warnings.warn(f"dropping dead transitions from reachability graph: {', '.join(dead)}")
    return TransitionSystem.build(
        initial=seen[m0],
        arcs=arcs,
        states=tuple(seen[m] for m in order),
        events=tuple(t for t in net.transitions if t in fired),
        name=(net.name + "-rg") if net.name else None,
    )


# -- textual format ----------------------------------------------------------------


def parse_net(text: str, strict: bool = False) -> BooleanNet:
    """Parse the line-oriented net format.

    Lines: optional `net <name>`, `type <tags>`, `place <p> <0|1>`,
    `trans <t>`, `flow <p> <t> <interaction>`.  Missing flow entries default
    to nop; strict mode requires every place/transition pair to be declared.
    """
    name = None
    tau: BooleanType | None = None
    places: list[str] = []
    m0: list[int] = []
    transitions: list[str] = []
    flow: dict[tuple[str, str], str] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "net":
            if len(parts) != 2:
                raise ParseError(f"line {no}: expected `net <name>`")
            name = parts[1]
        elif kw == "type":
            if len(parts) < 2:
                raise ParseError(f"line {no}: expected `type <tags>`")
            tau = BooleanType.parse(" ".join(parts[1:]))
        elif kw == "place":
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise ParseError(f"line {no}: expected `place <name> <0|1>`")
            places.append(parts[1])
            m0.append(int(parts[2]))
        elif kw == "trans":
            if len(parts) != 2:
                raise ParseError(f"line {no}: expected `trans <name>`")
            transitions.append(parts[1])
        elif kw == "flow":
            if len(parts) != 4:
                raise ParseError(f"line {no}: expected `flow <place> <trans> <interaction>`")
            key = (parts[1], parts[2])
            if key in flow:
                raise ParseError(f"line {no}: duplicate flow entry {key}")
            flow[key] = check_tag(parts[3])
        else:
            raise ParseError(f"line {no}: unknown directive {kw!r}")
    if tau is None:
        raise ParseError("missing `type` declaration")
    if strict:
        for p in places:
            for t in transitions:
                if (p, t) not in flow:
                    raise ParseError(f"strict mode: flow {p}/{t} undeclared")
    return BooleanNet(name, tau, tuple(places), tuple(transitions), flow, tuple(m0))


def serialize_net(net: BooleanNet) -> str:
    out = []
    if net.name:
        out.append(f"net {net.name}")
    out.append(f"type {net.tau}")
    for p, b in zip(net.places, net.m0):
        out.append(f"place {p} {b}")
    for t in net.transitions:
        out.append(f"trans {t}")
    for p in net.places:
        for t in net.transitions:
            out.append(f"flow {p} {t} {net.flow[(p, t)]}")
    return "\n".join(out) + "\n"


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def net_to_dot(net: BooleanNet) -> str:
    """Bipartite DOT rendering; nop couplings are omitted as visual no-ops."""
    lines = ["digraph net {", "  rankdir=LR;"]
    for p, b in zip(net.places, net.m0):
        label = f"{p} [1]" if b else p
        lines.append(f"  {_q(p)} [shape=circle, label={_q(label)}];")
    for t in net.transitions:
        lines.append(f"  {_q(t)} [shape=box];")
    for p in net.places:
        for t in net.transitions:
            tag = net.flow[(p, t)]
            if tag == "nop":
                continue
            lines.append(f"  {_q(p)} -> {_q(t)} [label={_q(tag)}, dir=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
