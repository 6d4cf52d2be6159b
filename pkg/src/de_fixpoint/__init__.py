"""Deterministic discrete-event actor models: simulation and model checking.

Models are trees of actors (clocks, delays, state machines, variable
setters, composites, and modal actors whose refinements freeze and thaw
as a controller machine switches location).  Execution advances a
superdense clock through an event queue; at each instant the present/
absent status of every port is settled by a monotone fixpoint, so runs
are reproducible regardless of evaluation order.  On top of the
executor sit a reachable-state graph, a state search, and an LTL model
checker whose counterexamples are replayed through the executor before
being reported.

The usual entry points:

    from de_fixpoint import parse_model, initialize, simulate
    state = initialize(parse_model(text))
    trace = simulate(state, time_bound=Fraction(10))

    from de_fixpoint import build_state_graph, check_ltl, parse_formula
    verdict = check_ltl(build_state_graph(state), parse_formula("[] ~ ..."))
"""

from .checker import Verdict, Witness, check_ltl, eval_on_lasso
from .errors import (
    CausalityCycle,
    EngineError,
    NondeterministicFsm,
    ParseError,
    StateSpaceExceeded,
    ValidationError,
)
from .events import Event, EventQueue
from .executor import (
    DEFAULT_MAX_STEPS,
    Trace,
    TraceStep,
    simulate,
    step,
    trace_json,
    trace_step_text,
)
from .formula import (
    Always,
    And,
    Atom,
    Eventually,
    FalseF,
    Formula,
    Implies,
    Not,
    Or,
    Scope,
    TrueF,
    Until,
    desugar,
    formula_text,
)
from .formula_parser import parse_formula, parse_prop
from .graph import DEFAULT_MAX_STATES, SearchHit, StateGraph, build_state_graph, search
from .model import ActorNode, Connection, Port, PortRef, Transition, normalize, validate
from .parser import parse_model, print_model
from .postfire import initialize
from .props import LocProp, VarProp, prop_holds
from .state import SystemState, collect_variables, fsm_locations
from .values import BoolVal, IntVal, StringVal, TimeVal

__all__ = [
    "ActorNode",
    "Always",
    "And",
    "Atom",
    "BoolVal",
    "CausalityCycle",
    "Connection",
    "DEFAULT_MAX_STATES",
    "DEFAULT_MAX_STEPS",
    "EngineError",
    "Event",
    "EventQueue",
    "Eventually",
    "FalseF",
    "Formula",
    "Implies",
    "IntVal",
    "LocProp",
    "NondeterministicFsm",
    "Not",
    "Or",
    "ParseError",
    "Port",
    "PortRef",
    "Scope",
    "SearchHit",
    "StateGraph",
    "StateSpaceExceeded",
    "StringVal",
    "SystemState",
    "TimeVal",
    "Trace",
    "TraceStep",
    "Transition",
    "TrueF",
    "Until",
    "ValidationError",
    "VarProp",
    "Verdict",
    "Witness",
    "build_state_graph",
    "check_ltl",
    "collect_variables",
    "desugar",
    "eval_on_lasso",
    "formula_text",
    "fsm_locations",
    "initialize",
    "normalize",
    "parse_formula",
    "parse_model",
    "parse_prop",
    "print_model",
    "prop_holds",
    "search",
    "simulate",
    "step",
    "trace_json",
    "trace_step_text",
    "validate",
]
