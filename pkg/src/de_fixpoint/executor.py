"""The run loop: one queue tag at a time.

A step looks at the head of the event queue and does exactly one of
three things.  If events are due right now (head at time 0, microstep 0)
it runs a full iteration: clear ports, deliver, fix point, commit.  If
the head is at the current timestamp but a later microstep, it advances
the microstep counter.  Otherwise it lets time pass up to the head.
Every step is deterministic, so a run is fully determined by the initial
state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyQueue
from .fire import clear_ports, compute_fixpoint, deliver_events
from .postfire import commit_requests, postfire
from .state import SystemState, collect_variables, fsm_locations
from .util import rational_json
from .values import BoolVal, IntVal, StringVal, TimeVal, literal_text

DEFAULT_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class Tick:
    dt: Fraction

    def json(self):
        return {"type": "tick", "dt": rational_json(self.dt)}


@dataclass(frozen=True)
class Microstep:
    n: int

    def json(self):
        return {"type": "microstep", "n": self.n}


@dataclass(frozen=True)
class Iteration:
    def json(self):
        return {"type": "iteration"}


def step(state: SystemState, bottom_as_absent: bool = False, rng=None):
    """Process the head of the queue.  Returns (next state, step kind)."""
    if state.queue.is_empty():
        raise EmptyQueue("nothing left to do")
    time, microstep = state.queue.head_tag()
    if time > 0:
        queue = state.queue.advance_time(time)
        return (
            SystemState(state.top, queue, state.elapsed + time, 0),
            Tick(time),
        )
    if microstep > 0:
        queue = state.queue.advance_microstep()
        return (
            SystemState(state.top, queue, state.elapsed, state.microstep_of_instant + microstep),
            Microstep(microstep),
        )
    events, queue = state.queue.pop_ready()
    top = deliver_events(clear_ports(state.top), events)
    result = compute_fixpoint(top, bottom_as_absent=bottom_as_absent, rng=rng)
    top, requests = postfire(result.top, result.decisions)
    queue = commit_requests(queue, requests)
    return (
        SystemState(top, queue, state.elapsed, state.microstep_of_instant),
        Iteration(),
    )


@dataclass
class TraceStep:
    kind: object  # Tick | Microstep | Iteration
    state: SystemState
    changed_variables: dict  # dotted path -> {variable: value}


@dataclass
class Trace:
    initial: SystemState
    steps: list
    truncated: bool = False

    @property
    def final(self) -> SystemState:
        return self.steps[-1].state if self.steps else self.initial


def _diff_variables(old: dict, new: dict) -> dict:
    changed = {}
    for path, variables in new.items():
        before = old.get(path, {})
        delta = {v: val for v, val in variables.items() if before.get(v) != val}
        if delta:
            changed[path] = delta
    return changed


def simulate(
    state: SystemState,
    time_bound=None,
    max_steps: int = DEFAULT_MAX_STEPS,
    bottom_as_absent: bool = False,
) -> Trace:
    """Run until the queue drains, the time bound, or the step budget.

    The time bound is inclusive: a tick landing exactly on the bound is
    taken, one that would pass it is not (the run stops just before).
    """
    if time_bound is not None:
        time_bound = Fraction(time_bound)
    initial = state
    steps = []
    truncated = False
    while True:
        if state.queue.is_empty():
            break
        if len(steps) >= max_steps:
            truncated = True
            break
        time, _ = state.queue.head_tag()
        if time_bound is not None and time > 0 and state.elapsed + time > time_bound:
            break
        prev = collect_variables(state)
        state, kind = step(state, bottom_as_absent=bottom_as_absent)
        changed = (
            _diff_variables(prev, collect_variables(state))
            if isinstance(kind, Iteration)
            else {}
        )
        steps.append(TraceStep(kind, state, changed))
    return Trace(initial, steps, truncated)


# Trace rendering (shared by the command-line front end and tests). ----------


def value_json(v):
    if isinstance(v, BoolVal):
        return v.value
    if isinstance(v, IntVal):
        return v.value
    if isinstance(v, StringVal):
        return v.value
    if isinstance(v, TimeVal):
        return {"time": rational_json(v.value)}
    raise TypeError(f"not a value: {v!r}")


def trace_step_json(ts: TraceStep) -> dict:
    state = ts.state
    return {
        "elapsed": rational_json(state.elapsed),
        "microstep": state.microstep_of_instant,
        "kind": ts.kind.json(),
        "changedVariables": {
            path: {var: value_json(val) for var, val in delta.items()}
            for path, delta in sorted(ts.changed_variables.items())
        },
        "fsmLocations": dict(sorted(fsm_locations(state).items())),
        "queueSummary": [
            [rational_json(t), n, count] for t, n, count in state.queue.summary()
        ],
    }


def trace_json(trace: Trace) -> list:
    return [trace_step_json(ts) for ts in trace.steps]


def format_value(v) -> str:
    return literal_text(v)


def trace_step_text(ts: TraceStep) -> str:
    state = ts.state
    kind = ts.kind
    if isinstance(kind, Tick):
        head = f"advance {kind.dt}"
    elif isinstance(kind, Microstep):
        head = f"microstep +{kind.n}"
    else:
        head = "iteration"
    parts = [f"t={state.elapsed} m={state.microstep_of_instant} {head}"]
    for path, delta in sorted(ts.changed_variables.items()):
        assigns = ", ".join(f"{k}={format_value(v)}" for k, v in sorted(delta.items()))
        parts.append(f"    {path}: {assigns}")
    return "\n".join(parts)
