"""Reachable state graphs, cycle detection, and state search.

Because a step is a deterministic function of the state, the reachable
graph from one initial state is a lasso: a stem of fresh states followed
by either a cycle (some earlier state repeats) or a terminal state that
we close with a self-loop (the queue drained, or the time bound cut the
run short).  Every node therefore has exactly one successor, which is
what the temporal-logic layer relies on.

State identity is the interesting dial.  By default two states that
differ only in the absolute timestamp (and microstep index) are the same
node — that is what lets periodic systems close their cycle at all.
When a time bound is given, identity additionally includes the
timestamp, so every reported state sits at the time it really occurred;
the price is a graph that grows with the bound.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import StateSpaceExceeded
from .executor import step
from .props import prop_holds
from .state import SystemState

DEFAULT_MAX_STATES = 100_000


@dataclass(frozen=True)
class Stutter:
    """Synthetic self-loop edge on terminal / bound-cut states."""

    def json(self):
        return {"type": "stutter"}


@dataclass
class StateGraph:
    nodes: list  # SystemState, id = index, id 0 = initial
    succ: list  # node id -> unique successor id
    kinds: list  # node id -> step kind taken out of it (Stutter on self-loops)
    bounded: bool
    bottom_as_absent: bool = False

    def cycle_entry(self) -> int:
        """First node id that lies on the lasso's cycle."""
        # The last computed successor points back into the node list.
        return self.succ[len(self.nodes) - 1]


def _identity(state: SystemState, bounded: bool):
    if bounded:
        return (state, state.elapsed, state.microstep_of_instant)
    return state


def _cut_by_bound(state: SystemState, time_bound) -> bool:
    if time_bound is None or state.queue.is_empty():
        return False
    time, _ = state.queue.head_tag()
    return time > 0 and state.elapsed + time > time_bound


def build_state_graph(
    initial: SystemState,
    time_bound=None,
    max_states: int = DEFAULT_MAX_STATES,
    workers: int = 1,
    bottom_as_absent: bool = False,
) -> StateGraph:
    """Explore every reachable state.

    ``workers`` sizes a thread pool used to expand the frontier.  The
    expansion of a state is a pure function, so the resulting graph is
    identical for any worker count; and since a deterministic system's
    frontier never holds more than one state, extra workers buy little
    here — the knob exists for interface parity, not speed.
    """
    if time_bound is not None:
        time_bound = Fraction(time_bound)
    bounded = time_bound is not None

    nodes = []
    kinds = []
    succ = []
    ids = {}

    def expand(state: SystemState):
        if state.queue.is_empty() or _cut_by_bound(state, time_bound):
            return None  # terminal: self-loop
        return step(state, bottom_as_absent=bottom_as_absent)

    pool = ThreadPoolExecutor(max_workers=max(1, workers)) if workers > 1 else None
    try:
        state = initial
        ids[_identity(state, bounded)] = 0
        nodes.append(state)
        while True:
            if len(nodes) > max_states:
                raise StateSpaceExceeded(max_states)
            frontier = [nodes[-1]]
            if pool is not None:
                results = list(pool.map(expand, frontier))
            else:
                results = [expand(s) for s in frontier]
            outcome = results[0]
            if outcome is None:
                succ.append(len(nodes) - 1)
                kinds.append(Stutter())
                break
            nxt, kind = outcome
            key = _identity(nxt, bounded)
            if key in ids:
                succ.append(ids[key])
                kinds.append(kind)
                break
            ids[key] = len(nodes)
            succ.append(len(nodes))
            kinds.append(kind)
            nodes.append(nxt)
    finally:
        if pool is not None:
            pool.shutdown()

    return StateGraph(nodes, succ, kinds, bounded, bottom_as_absent)


@dataclass
class SearchHit:
    node_id: int
    state: SystemState


def search(graph: StateGraph, prop) -> SearchHit:
    """First node (in discovery = chronological order) satisfying the prop."""
    for i, state in enumerate(graph.nodes):
        if prop_holds(state, prop):
            return SearchHit(i, state)
    return None
