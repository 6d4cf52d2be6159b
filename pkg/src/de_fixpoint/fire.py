"""Per-instant port resolution as a monotone fixed point.

Each iteration starts with every port unknown, delivers the events due
now, and then applies propagation rules until nothing changes.  Ports
move at most once, from unknown to present-with-a-value or absent, and
no rule ever looks at anything but port statuses, so the final
assignment is independent of rule application order (checked by the
test suite with randomized orders).

A port left unknown at the fixed point means the model has a genuine
causality cycle; that is an error unless the caller opts into treating
the leftovers as absent.

Frozen refinements (and everything below them) take no part: no rules
are built for them, their state machines make no firing decision, and
events addressed into them land on the port but drive nothing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import CausalityCycle, NoSuchPort
from .expr import eval_expr, referenced_ports
from .model import (
    CLOCK,
    COMPOSITE,
    DELAY,
    FSM,
    IN,
    MODAL,
    OUT,
    PARENT,
    ActorNode,
    fsm_decision,
    iter_actors,
    map_ports,
)
from .values import ABSENT, UNKNOWN, Present, is_known

log = logging.getLogger(__name__)

# A port is addressed by (actor path, port name, direction).
PortKey = tuple


def _key_text(key: PortKey) -> str:
    path, name, direction = key
    return f"{'.'.join(path)}.{name}({direction})"


def clear_ports(top: ActorNode) -> ActorNode:
    """Reset every port (frozen subtrees included) to unknown."""
    return map_ports(top, lambda path, port: UNKNOWN)


def deliver_events(top: ActorNode, events) -> ActorNode:
    """Write the values of due events onto their target output ports.

    Every scheduled event addresses the output port of the actor that
    produced it (clocks and delays); propagation to readers is the fixed
    point's job.  Deliveries into frozen subtrees still set the port (the
    value is genuinely there) but nothing reacts to it.
    """
    by_key = {}
    nodes = {path: (node, live) for path, node, live in iter_actors(top)}
    for ev in events:
        path = tuple(ev.target.actor)
        if path not in nodes:
            raise NoSuchPort(repr(ev.target))
        node, live = nodes[path]
        if node.port(ev.target.port, OUT) is None:
            raise NoSuchPort(f"{ev.target!r} is not an output port")
        if not live:
            log.info("event for %r lands in a frozen refinement; it will drive nothing", ev.target)
        by_key[(path, ev.target.port, OUT)] = Present(ev.value)
    if not by_key:
        return top
    return map_ports(
        top,
        lambda path, port: by_key.get((path, port.name, port.direction), port.status),
    )


# Rules. ---------------------------------------------------------------------
#
# Every rule exposes step(statuses) -> [(key, status), ...]; it may only
# propose assignments for currently-unknown keys, and must propose the
# same ultimate value no matter when it runs.


class _CopyRule:
    """Connection propagation: a known source status flows to its sinks."""

    def __init__(self, src: PortKey, sinks):
        self.src = src
        self.sinks = tuple(sinks)
        self.depth = len(src[0])

    def step(self, st):
        s = st[self.src]
        if not is_known(s):
            return []
        # Known sinks are proposed too: the driver loop cross-checks them,
        # so a second writer racing a port is caught instead of silently
        # making the result order-dependent.
        return [(k, s) for k in self.sinks]


class _AbsentWhenUnwritten:
    """Ports nothing ever writes (and event-sourced ports with no event due)."""

    def __init__(self, keys):
        self.keys = tuple(keys)
        self.depth = 0

    def step(self, st):
        return [(k, ABSENT) for k in self.keys if not is_known(st[k])]


class _FsmRule:
    """Drive a state machine's outputs from its (stable) firing decision.

    Until the decision resolves, outputs stay unknown.  Once it does:
    on a firing, each output named by the transition gets the evaluated
    expression (as soon as every port the expression reads is known) and
    every other plain output is absent; without a firing, every plain
    output is absent.  Outputs that double as a modal actor's outputs
    (the controller's coupled pairs) are special: when not named by the
    taken transition they relay the refinement's value, so they copy the
    twin input port instead of going absent.
    """

    def __init__(self, path, node, coupled=()):
        self.path = path
        self.node = node
        self.depth = len(path)
        self.coupled = frozenset(coupled)
        self.label = ".".join(path)
        self.in_keys = {n: (path, n, IN) for n in node.port_names(IN)}
        self.out_keys = {n: (path, n, OUT) for n in node.port_names(OUT)}

    def inputs(self, st):
        return {name: st[key] for name, key in self.in_keys.items()}

    def decide(self, st):
        return fsm_decision(self.node, self.inputs(st), self.label)

    def step(self, st):
        verdict, transition = self.decide(st)
        if verdict is None:
            return []
        named = transition.outputs if verdict == "fire" else {}
        out = []
        for name, key in self.out_keys.items():
            if is_known(st[key]):
                continue
            if name in named:
                expr = named[name]
                inputs = self.inputs(st)
                if all(is_known(inputs.get(p, UNKNOWN)) for p in referenced_ports(expr)):
                    value = eval_expr(expr, self.node.variables, self.node.parameters, inputs)
                    out.append((key, Present(value)))
            elif name in self.coupled:
                twin = st[self.in_keys[name]]
                if is_known(twin):
                    out.append((key, twin))
            else:
                out.append((key, ABSENT))
        return out


def build_rules(top: ActorNode):
    """Compile the live region of the tree into rules plus the port universe.

    Returns (rules, keys) where keys is every port key the fixed point is
    responsible for resolving.
    """
    rules = []
    keys = []
    produced = set()
    event_sourced = []
    controllers = {}  # controller path -> coupled port names

    live = list(iter_actors(top, live_only=True))
    for path, node, _ in live:
        for p in node.ports:
            keys.append((path, p.name, p.direction))
        if node.kind == MODAL:
            controllers[path + (node.controller,)] = node.port_names(OUT)
    live_keys = set(keys)

    def add_copy(src, sinks):
        # Sinks inside frozen refinements are simply not fed.
        sinks = [k for k in sinks if k in live_keys]
        if sinks:
            rules.append(_CopyRule(src, sinks))
            produced.update(sinks)

    for path, node, _ in live:
        if node.kind in (CLOCK, DELAY):
            key = (path, "output", OUT)
            event_sourced.append(key)
            produced.add(key)
        elif node.kind == FSM:
            rule = _FsmRule(path, node, coupled=controllers.get(path, ()))
            rules.append(rule)
            produced.update(rule.out_keys.values())
        if node.kind in (COMPOSITE, MODAL):
            for conn in node.connections:
                src = conn.source
                src_key = (
                    (path, src.port, IN)
                    if src.actor == PARENT
                    else (path + src.actor, src.port, OUT)
                )
                sinks = [
                    (path, s.port, OUT) if s.actor == PARENT else (path + s.actor, s.port, IN)
                    for s in conn.sinks
                ]
                add_copy(src_key, sinks)
        if node.kind == MODAL:
            ctrl = path + (node.controller,)
            refinement = node.refinements.get(node.child(node.controller).curr_location)
            for q in node.port_names(OUT):
                # The live refinement's output feeds the controller's twin input,
                # and the controller's output is what the modal actor shows.
                if refinement is not None and node.child(refinement).enabled:
                    add_copy((path + (refinement,), q, OUT), [(ctrl, q, IN)])
                add_copy((ctrl, q, OUT), [(path, q, OUT)])

    # Event-sourced outputs (clocks, delays) are fed by delivery before the
    # fixed point starts; unknown here means no event was due, i.e. absent.
    fallback = tuple(event_sourced) + tuple(k for k in keys if k not in produced)
    if fallback:
        rules.append(_AbsentWhenUnwritten(fallback))
    # Deeper actors get their turn first; the result does not depend on
    # this (confluence), it just settles inner models before their parents.
    rules.sort(key=lambda r: -r.depth)
    return rules, keys


@dataclass
class FixpointResult:
    top: ActorNode
    decisions: dict  # fsm path -> ("fire", Transition) | ("nofire", None)
    applications: int
    stalled_ports: tuple  # ports that needed the absent fallback ((),) if none


def compute_fixpoint(top: ActorNode, bottom_as_absent: bool = False, rng=None) -> FixpointResult:
    """Run rules to quiescence and return the resolved tree and decisions.

    ``rng`` (a random.Random) shuffles the rule application order; the
    result must not depend on it.  Unknown ports at quiescence raise
    CausalityCycle unless ``bottom_as_absent``, in which case they are
    forced absent and any still-undecided machine counts as not firing.
    """
    rules, keys = build_rules(top)
    if rng is not None:
        rules = list(rules)
        rng.shuffle(rules)

    statuses = {}
    for path, node, _ in iter_actors(top, live_only=True):
        for p in node.ports:
            statuses[(path, p.name, p.direction)] = p.status

    applications = 0
    changed = True
    while changed:
        changed = False
        for rule in rules:
            for key, status in rule.step(statuses):
                old = statuses[key]
                if is_known(old):
                    if old != status:
                        raise AssertionError(
                            f"port {_key_text(key)} driven to two different statuses"
                        )
                    continue
                statuses[key] = status
                applications += 1
                changed = True

    # Firing decisions are read off at quiescence, before any fallback:
    # a machine that could not decide did not fire.
    decisions = {}
    for rule in rules:
        if isinstance(rule, _FsmRule):
            verdict, transition = rule.decide(statuses)
            if verdict == "fire":
                decisions[rule.path] = ("fire", transition)
            else:
                decisions[rule.path] = ("nofire", None)

    stalled = tuple(sorted(k for k in keys if not is_known(statuses[k])))
    if stalled:
        if not bottom_as_absent:
            raise CausalityCycle([_key_text(k) for k in stalled])
        log.warning(
            "%d port(s) left unknown; treating as absent: %s",
            len(stalled),
            ", ".join(_key_text(k) for k in stalled),
        )
        for k in stalled:
            statuses[k] = ABSENT

    resolved = map_ports(
        top, lambda path, port: statuses.get((path, port.name, port.direction), port.status)
    )
    return FixpointResult(resolved, decisions, applications, stalled)
