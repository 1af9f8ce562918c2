"""Exception taxonomy shared across the package.

Every error that user input can provoke derives from BoolnetError so the CLI
can map them onto exit codes uniformly.
"""

from __future__ import annotations


class BoolnetError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(BoolnetError):
    """Malformed textual input (any of the file formats)."""


# --- transition-system validation -------------------------------------------

class NonDeterministic(BoolnetError):
    def __init__(self, state: str, event: str):
        super().__init__(f"state {state!r} has two outgoing arcs labeled {event!r}")
        self.state = state
        self.event = event


class Unreachable(BoolnetError):
    def __init__(self, state: str):
        super().__init__(f"state {state!r} is not reachable from the initial state")
        self.state = state


class UselessEvent(BoolnetError):
    def __init__(self, event: str):
        super().__init__(f"event {event!r} does not occur on any arc")
        self.event = event


class NoInitial(BoolnetError):
    def __init__(self) -> None:
        super().__init__("no initial state declared")


class UnknownId(BoolnetError):
    def __init__(self, ident: str, context: str = ""):
        msg = f"unknown identifier {ident!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)
        self.ident = ident


class EventSetMismatch(BoolnetError):
    """Two structures that must share an event set do not."""


# --- interactions / net types ------------------------------------------------

class UnknownInteraction(BoolnetError):
    def __init__(self, tag: str):
        super().__init__(f"unknown interaction {tag!r}")
        self.tag = tag


class EmptyType(BoolnetError):
    def __init__(self) -> None:
        super().__init__("a net type needs at least one interaction")


# --- nets ---------------------------------------------------------------------

class UnknownTransition(BoolnetError):
    def __init__(self, name: str):
        super().__init__(f"unknown transition {name!r}")
        self.name = name


class PlaceBoundExceeded(BoolnetError):
    def __init__(self, count: int, bound: int):
        super().__init__(f"net has {count} places, exceeding the supported bound of {bound}")
        self.count = count
        self.bound = bound


# --- regions / synthesis -------------------------------------------------------

class DomainMismatch(BoolnetError):
    """A region's support or signature does not match the transition system."""


class VerificationFailed(BoolnetError):
    """A synthesized net failed its own post-hoc correctness check."""


# --- modification decisions ----------------------------------------------------

class InvalidPlan(BoolnetError):
    def __init__(self, reason: str, detail: str = ""):
        msg = f"invalid modification plan: {reason}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.reason = reason


class SearchBudgetExceeded(BoolnetError):
    def __init__(self, nodes: int):
        super().__init__(f"search aborted after {nodes} explored nodes")
        self.nodes = nodes


# --- reduction gadgets ----------------------------------------------------------

class LambdaOutOfRange(BoolnetError):
    def __init__(self, lam: int, n: int):
        super().__init__(f"budget parameter {lam} outside 0..{n}")
        self.lam = lam
        self.n = n


class NotACover(BoolnetError):
    def __init__(self, detail: str):
        super().__init__(f"not a usable vertex cover: {detail}")
