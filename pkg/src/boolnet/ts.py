"""Deterministic, initialized, reachable labeled transition systems.

States and events keep the order of first appearance; that order is the
canonical order used by every enumeration, serialization and search in the
package, which keeps all results reproducible.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    EventSetMismatch,
    NoInitial,
    NonDeterministic,
    ParseError,
    UnknownId,
    Unreachable,
    UselessEvent,
)

# Lexical class for state/event names.  Beyond the plain identifier characters
# this admits the glyphs used by generated artifacts: ⊖/⊥/ι in gadget names and
# "(",")","," in marking names of reachability graphs.
_IDENT_RE = re.compile(r"[A-Za-z0-9_.'⊖⊥ι(),-]+\Z")


def _check_ident(token: str, what: str) -> str:
    if not _IDENT_RE.match(token):
        raise ParseError(f"bad {what} name {token!r}")
    return token


class TransitionSystem:
    """Immutable labeled transition system over indexed states and events.

    Public accessors speak in names; the integer views (arcs, out_arcs, ...)
    exist for the solvers.
    """

    __slots__ = (
        "name",
        "states",
        "events",
        "initial",
        "arcs",
        "state_index",
        "event_index",
        "delta",
        "arc_at",
        "out_arcs",
        "in_arcs",
        "event_arcs",
    )

    def __init__(
        self,
        name: str | None,
        states: tuple[str, ...],
        events: tuple[str, ...],
        initial: int,
        arcs: tuple[tuple[int, int, int], ...],
    ):
        self.name = name
        self.states = states
        self.events = events
        self.initial = initial
        self.arcs = arcs
        self.state_index = {s: i for i, s in enumerate(states)}
        self.event_index = {e: i for i, e in enumerate(events)}
        self.delta: dict[tuple[int, int], int] = {}
        self.arc_at: dict[tuple[int, int], int] = {}
        self.out_arcs: list[list[int]] = [[] for _ in states]
        self.in_arcs: list[list[int]] = [[] for _ in states]
        self.event_arcs: list[list[int]] = [[] for _ in events]
        for a, (src, ev, dst) in enumerate(arcs):
            key = (src, ev)
            if key in self.delta:
                raise NonDeterministic(states[src], events[ev])
            self.delta[key] = dst
            self.arc_at[key] = a
            self.out_arcs[src].append(a)
            self.in_arcs[dst].append(a)
            self.event_arcs[ev].append(a)

    # -- construction ---------------------------------------------------------

    @classmethod
    def build(
        cls,
        initial: str,
        arcs,
        states=None,
        events=None,
        name: str | None = None,
        relaxed: bool = False,
    ) -> "TransitionSystem":
        """Build and validate a system from (src, event, dst) name triples.

        Explicit states/events fix the canonical order; otherwise it is the
        order of first appearance (initial state first).  relaxed skips the
        reachability and event-usefulness checks (used for type graphs).
        """
        arcs = [tuple(a) for a in arcs]
        if initial is None:
            raise NoInitial()
        state_list: list[str] = []
        seen: set[str] = set()

        def note_state(s: str) -> None:
            if s not in seen:
                seen.add(s)
                state_list.append(_check_ident(s, "state"))

        event_list: list[str] = []
        seen_e: set[str] = set()

        def note_event(e: str) -> None:
            if e not in seen_e:
                seen_e.add(e)
                event_list.append(_check_ident(e, "event"))

        if states is not None:
            for s in states:
                if s in seen:
                    raise ParseError(f"duplicate state {s!r}")
                note_state(s)
        else:
            note_state(initial)
        if events is not None:
            for e in events:
                if e in seen_e:
                    raise ParseError(f"duplicate event {e!r}")
                note_event(e)
        for src, ev, dst in arcs:
            if states is None:
                note_state(src)
                note_state(dst)
            if events is None:
                note_event(ev)

        sx = {s: i for i, s in enumerate(state_list)}
        ex = {e: i for i, e in enumerate(event_list)}
        if initial not in sx:
            raise UnknownId(initial, "initial state")
        idx_arcs = []
        for src, ev, dst in arcs:
            if src not in sx:
                raise UnknownId(src, "arc source")
            if dst not in sx:
                raise UnknownId(dst, "arc target")
            if ev not in ex:
                raise UnknownId(ev, "arc event")
            idx_arcs.append((sx[src], ex[ev], sx[dst]))

        ts = cls(name, tuple(state_list), tuple(event_list), sx[initial], tuple(idx_arcs))
        if not relaxed:
            ts._validate()
        return ts

    def _validate(self) -> None:
        reached = self.reachable_from(self.initial)
        for i, s in enumerate(self.states):
            if i not in reached:
                raise Unreachable(s)
        for e, occ in zip(self.events, self.event_arcs):
            if not occ:
                raise UselessEvent(e)

    # -- queries ---------------------------------------------------------------

    @property
    def initial_state(self) -> str:
        return self.states[self.initial]

    def successor(self, state: str, event: str) -> str | None:
        si = self.state_index.get(state)
        ei = self.event_index.get(event)
        if si is None:
            raise UnknownId(state)
        if ei is None:
            raise UnknownId(event)
        di = self.delta.get((si, ei))
        return None if di is None else self.states[di]

    def has_arc(self, state: str, event: str) -> bool:
        return self.successor(state, event) is not None

    def arc_names(self, a: int) -> tuple[str, str, str]:
        src, ev, dst = self.arcs[a]
        return (self.states[src], self.events[ev], self.states[dst])

    def reachable_from(self, start: int) -> set[int]:
        seen = {start}
        frontier = deque([start])
        while frontier:
            s = frontier.popleft()
            for a in self.out_arcs[s]:
                d = self.arcs[a][2]
                if d not in seen:
                    seen.add(d)
                    frontier.append(d)
        return seen

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransitionSystem):
            return NotImplemented
        return (
            self.states == other.states
            and self.events == other.events
            and self.initial == other.initial
            and self.arcs == other.arcs
        )

    def __hash__(self):
        return hash((self.states, self.events, self.initial, self.arcs))

    def __repr__(self) -> str:
        label = self.name or "ts"
        return f"<{label}: {len(self.states)} states, {len(self.events)} events, {len(self.arcs)} arcs>"


# -- textual format --------------------------------------------------------------


def parse_ts(text: str) -> TransitionSystem:
    """Parse the line-oriented ts format.

    Lines: optional `ts <name>`, one `initial <state>`, any number of
    `arc <src> <event> <dst>`.  `#` starts a comment; blank lines are ignored.
    """
    name = None
    initial = None
    arcs: list[tuple[str, str, str]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "ts":
            if len(parts) != 2:
                raise ParseError(f"line {no}: expected `ts <name>`")
            name = parts[1]
        elif kw == "initial":
            if len(parts) != 2:
                raise ParseError(f"line {no}: expected `initial <state>`")
            if initial is not None:
                raise ParseError(f"line {no}: duplicate initial declaration")
            initial = parts[1]
        elif kw == "arc":
            if len(parts) != 4:
                raise ParseError(f"line {no}: expected `arc <src> <event> <dst>`")
            arcs.append((parts[1], parts[2], parts[3]))
        else:
            raise ParseError(f"line {no}: unknown directive {kw!r}")
    if initial is None:
        raise NoInitial()
    return TransitionSystem.build(initial=initial, arcs=arcs, name=name)


def serialize_ts(ts: TransitionSystem) -> str:
    out = []
    if ts.name:
        out.append(f"ts {ts.name}")
    out.append(f"initial {ts.initial_state}")
    for a in range(len(ts.arcs)):
        src, ev, dst = ts.arc_names(a)
        out.append(f"arc {src} {ev} {dst}")
    return "\n".join(out) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def ts_to_dot(ts: TransitionSystem) -> str:
    lines = ["digraph ts {", "  rankdir=LR;"]
    for i, s in enumerate(ts.states):
        shape = "doublecircle" if i == ts.initial else "circle"
        lines.append(f"  {_dot_quote(s)} [shape={shape}];")
    for a in range(len(ts.arcs)):
        src, ev, dst = ts.arc_names(a)
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)} [label={_dot_quote(ev)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- simulations -------------------------------------------------------------------


@dataclass
class SimulationMap:
    """A state map from one system into another, event-preserving by build."""

    source: TransitionSystem
    target: TransitionSystem
    mapping: dict[str, str] = field(default_factory=dict)

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.states)

    def reflects_events(self) -> bool:
        """True when every event enabled at an image state is enabled at the
        source state as well."""
        for s in self.source.states:
            t = self.mapping[s]
            ti = self.target.state_index[t]
            for a in self.target.out_arcs[ti]:
                ev = self.target.events[self.target.arcs[a][1]]
                if not self.source.has_arc(s, ev):
                    return False
        return True


def induced_simulation(a: TransitionSystem, b: TransitionSystem) -> SimulationMap | None:
    """The unique event-preserving map a -> b fixing the initial states, or
    None when no such map exists.

    Uniqueness holds because a is reachable and b deterministic: the image of
    the initial state is forced and propagates along every arc.  Plain
    simulation tolerates extra events on the target side; classifying the map
    (check_relation) requires equal event sets.
    """
    if not set(a.events) <= set(b.events):
        raise EventSetMismatch(
            f"source uses events missing from target: {sorted(set(a.events) - set(b.events))}"
        )
    mapping_idx: dict[int, int] = {a.initial: b.initial}
    frontier = deque([a.initial])
    while frontier:
        s = frontier.popleft()
        t = mapping_idx[s]
        for arc in a.out_arcs[s]:
            _, ev, dst = a.arcs[arc]
            bev = b.event_index[a.events[ev]]
            tdst = b.delta.get((t, bev))
            if tdst is None:
                return None
            known = mapping_idx.get(dst)
            if known is None:
                mapping_idx[dst] = tdst
                frontier.append(dst)
            elif known != tdst:
                return None
    mapping = {a.states[s]: b.states[t] for s, t in mapping_idx.items()}
    return SimulationMap(source=a, target=b, mapping=mapping)


MODES = ("embed", "langsim", "realize")


def check_relation(a: TransitionSystem, b: TransitionSystem, mode: str) -> bool:
    """Whether b implements a under the given mode.

    embed: the induced map exists and is injective.
    langsim: the induced map exists and reflects enabled events.
    realize: both, which for reachable deterministic systems makes the map an
    isomorphism (surjectivity is asserted anyway).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if set(a.events) != set(b.events):
        raise EventSetMismatch(
            f"event sets differ: {sorted(a.events)} vs {sorted(b.events)}"
        )
    phi = induced_simulation(a, b)
    if phi is None:
        return False
    if mode == "embed":
        return phi.is_injective()
    if mode == "langsim":
        return phi.reflects_events()
    return phi.is_injective() and phi.reflects_events() and phi.is_surjective()
