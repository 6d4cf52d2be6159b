"""State commitment after the fixed point, and model initialization.

The fixed point only computes port statuses and firing decisions; this
module turns those into the next system state.  Machines that fired move
to their target location and apply their variable updates (all update
expressions are evaluated against the pre-commit environment, so updates
within one transition are simultaneous).  Clocks that ticked reschedule
themselves, delays forward their input as a future event, and
variable-setting actors write into the enclosing composite's store.
Frozen refinements commit nothing.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from .errors import UnknownVariableTarget
from .events import EMPTY_QUEUE, Event, EventQueue
from .expr import eval_expr
from .fire import clear_ports
from .model import (
    CLOCK,
    COMPOSITE,
    DELAY,
    FSM,
    IN,
    MODAL,
    OUT,
    SETVAR,
    ActorNode,
    PortRef,
    iter_actors,
    normalize,
    validate,
)
from .state import SystemState
from .util import FrozenMap, time_amount
from .values import IntVal, Present, TimeVal


def _amount(value) -> Fraction:
    """The exact rational inside a time-like parameter value."""
    if isinstance(value, (IntVal, TimeVal)):
        return time_amount(value.value)
    return time_amount(value)


def _reset(node: ActorNode) -> ActorNode:
    if node.kind == FSM:
        return replace(node, curr_location=node.init_location, enabled=True)
    if node.kind in (COMPOSITE, MODAL):
        inner = tuple(_reset(c) for c in node.inner)
        node = replace(node, inner=inner, enabled=True)
        if node.kind == MODAL:
            node = _apply_mode(node, node.child(node.controller).curr_location)
        return node
    return replace(node, enabled=True)


def _apply_mode(modal: ActorNode, location: str) -> ActorNode:
    """Enable exactly the refinement of ``location``; freeze the others."""
    active = modal.refinements.get(location)
    inner = []
    for child in modal.inner:
        if child.name == modal.controller:
            inner.append(child)
        else:
            inner.append(replace(child, enabled=(child.name == active)))
    return replace(modal, inner=tuple(inner))


def initialize(top: ActorNode) -> SystemState:
    """Normalize, validate, and produce the starting state.

    Machines stand in their initial locations, each modal actor has the
    matching refinement live, every port is unknown, and each live clock
    has its first tick scheduled at its offset.
    """
    top = normalize(top)
    validate(top)
    top = clear_ports(_reset(top))
    queue = EMPTY_QUEUE
    for path, node, _ in iter_actors(top, live_only=True):
        if node.kind == CLOCK:
            event = Event(PortRef(path, "output"), node.parameters["emit"])
            queue = queue.add(_amount(node.parameters["offset"]), 0, event)
    return SystemState(top, queue)


def postfire(top: ActorNode, decisions):
    """Commit one iteration.  Returns (next tree, scheduling requests).

    ``top`` must carry the resolved port statuses and ``decisions`` the
    firing decision per machine, both produced by compute_fixpoint.  The
    requests are (delay, microstep, event) triples in tree order; commit
    them with commit_requests to preserve the deterministic ordering.
    """
    fsm_commits = {}  # path -> (new location, new variables)
    composite_writes = {}  # path -> {variable: value}
    requests = []

    for path, node, _ in iter_actors(top, live_only=True):
        if node.kind == FSM:
            verdict, transition = decisions.get(path, ("nofire", None))
            if verdict != "fire":
                continue
            env = node.statuses(IN)
            variables = dict(node.variables)
            for var, expr in transition.sets.items():
                variables[var] = eval_expr(expr, node.variables, node.parameters, env)
            fsm_commits[path] = (transition.target, variables)
        elif node.kind == CLOCK:
            status = node.port("output", OUT).status
            if isinstance(status, Present):
                event = Event(PortRef(path, "output"), node.parameters["emit"])
                requests.append((_amount(node.parameters["period"]), 0, event))
        elif node.kind == DELAY:
            status = node.port("input", IN).status
            if isinstance(status, Present):
                delay = _amount(node.parameters["delay"])
                # A zero delay still takes one microstep: strictly later in
                # superdense time, same timestamp.
                microstep = 1 if delay == 0 else 0
                requests.append((delay, microstep, Event(PortRef(path, "output"), status.value)))
        elif node.kind == SETVAR:
            status = node.port("input", IN).status
            if isinstance(status, Present):
                target = node.parameters["target"].value
                scope = _enclosing_composite(path, top)
                if scope is None:
                    raise UnknownVariableTarget(f"{'.'.join(path)}: no enclosing composite")
                composite_writes.setdefault(scope, {})[target] = status.value

    def rebuild(node, path):
        if node.kind == FSM:
            if path in fsm_commits:
                location, variables = fsm_commits[path]
                return replace(node, curr_location=location, variables=FrozenMap(variables))
            return node
        if node.kind in (COMPOSITE, MODAL):
            inner = tuple(rebuild(c, path + (c.name,)) for c in node.inner)
            node = replace(node, inner=inner)
            if node.kind == COMPOSITE and path in composite_writes:
                variables = dict(node.variables)
                for var, value in composite_writes[path].items():
                    if var not in variables:
                        raise UnknownVariableTarget(f"{'.'.join(path)} has no variable '{var}'")
                    variables[var] = value
                node = replace(node, variables=FrozenMap(variables))
            if node.kind == MODAL:
                # The refinement that matches the controller's new location
                # becomes live from the next iteration on.
                node = _apply_mode(node, node.child(node.controller).curr_location)
            return node
        return node

    return rebuild(top, (top.name,)), requests


def _enclosing_composite(path, top: ActorNode):
    """The nearest proper ancestor of ``path`` that is a composite."""
    node = top
    chain = [((top.name,), top)]
    for name in path[1:]:
        node = node.child(name)
        chain.append((chain[-1][0] + (name,), node))
    for ancestor_path, ancestor in reversed(chain[:-1]):
        if ancestor.kind == COMPOSITE:
            return ancestor_path
    return None


def commit_requests(queue: EventQueue, requests) -> EventQueue:
    """Fold scheduling requests into the queue, in the order given."""
    for delay, microstep, event in requests:
        queue = queue.add(delay, microstep, event)
    return queue
