"""Command-line frontend.

Four subcommands:

    de-fixpoint simulate <model> --until T [--max-steps N] [--format text|json]
    de-fixpoint search   <model> --prop "<prop>" [--until T | --unbounded] [--max-states N]
    de-fixpoint check    <model> --formula "<f>" [--until T | --unbounded] [--max-states N]
    de-fixpoint dump     <model>

Exit codes: 0 when the property holds / a matching state is found / the
command succeeds; 1 when a checked formula fails or a search finds
nothing; 2 for usage and syntax errors; 3 for semantic errors (causality
cycles, nondeterministic machines, exhausted state budgets, names a
formula mentions that the model lacks); 141 when the output pipe closes
early.

Results go to stdout, diagnostics to stderr.  `DE_FIXPOINT_COLOR=1`
forces ANSI color on the human-readable output, `=0` disables it; by
default color follows whether stdout is a terminal.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .checker import check_ltl
from .errors import EngineError, ParseError, ValidationError
from .executor import DEFAULT_MAX_STEPS, simulate, trace_json, trace_step_text
from .formula_parser import parse_formula, parse_prop
from .graph import DEFAULT_MAX_STATES, build_state_graph, search
from .parser import parse_model, print_model
from .postfire import initialize
from .props import validate_prop
from .state import SystemState, fsm_locations


def _time_bound(text: str) -> Fraction:
    bound = Fraction(text)
    if bound < 0:
        raise ValueError("time bounds are non-negative")
    return bound


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise ValueError("expected a positive integer")
    return n


def _use_color() -> bool:
    env = os.environ.get("DE_FIXPOINT_COLOR")
    if env == "1":
        return True
    if env == "0":
        return False
    return sys.stdout.isatty()


def _paint(text: str, code: str, color: bool) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if color else text


def _green(text: str, color: bool) -> str:
    return _paint(text, "32", color)


def _red(text: str, color: bool) -> str:
    return _paint(text, "31", color)


def _load_initial(path: str) -> SystemState:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise EngineError(f"cannot read {path}: {err.strerror or err}") from err
    return initialize(parse_model(text))


def _state_line(state: SystemState) -> str:
    locs = ", ".join(f"{path}={loc}" for path, loc in sorted(fsm_locations(state).items()))
    line = f"t={state.elapsed} m={state.microstep_of_instant}"
    return f"{line}  [{locs}]" if locs else line


# Subcommands. ------------------------------------------------------------------


def _cmd_simulate(args) -> int:
    state = _load_initial(args.model)
    trace = simulate(
        state,
        time_bound=args.until,
        max_steps=args.max_steps,
        bottom_as_absent=args.bottom_as_absent,
    )
    if args.format == "json":
        print(json.dumps(trace_json(trace), indent=2, sort_keys=True))
        return 0
    color = _use_color()
    for step in trace.steps:
        print(trace_step_text(step))
    if trace.truncated:
        print(_red(f"stopped: step limit ({args.max_steps}) reached", color))
    elif not trace.final.queue.entries:
        print(_green("stopped: event queue exhausted", color))
    else:
        print(_green(f"stopped: time bound {args.until} reached", color))
    print(f"final: {_state_line(trace.final)}")
    return 0


def _cmd_search(args) -> int:
    state = _load_initial(args.model)
    prop = parse_prop(args.prop)
    validate_prop(state, prop)
    graph = build_state_graph(
        state, time_bound=args.until, max_states=args.max_states, workers=args.workers
    )
    hit = search(graph, prop)
    color = _use_color()
    if hit is None:
        print(_red(f"not found ({len(graph.nodes)} states explored)", color))
        return 1
    print(_green(f"found at step {hit.node_id}:", color), _state_line(hit.state))
    return 0


def _cmd_check(args) -> int:
    state = _load_initial(args.model)
    formula = parse_formula(args.formula)
    graph = build_state_graph(
        state,
        time_bound=args.until,
        max_states=args.max_states,
        workers=args.workers,
        bottom_as_absent=args.bottom_as_absent,
    )
    verdict = check_ltl(graph, formula)
    color = _use_color()
    if verdict.holds:
        print(_green(f"holds ({len(graph.nodes)} states explored)", color))
        return 0
    witness = verdict.witness
    print(_red(f"fails ({len(graph.nodes)} states explored)", color))
    print("counterexample prefix:")
    for node_id, st in zip(witness.prefix_ids, witness.prefix):
        print(f"  [{node_id}] {_state_line(st)}")
    print("repeating cycle:")
    for node_id, st in zip(witness.cycle_ids, witness.cycle):
        print(f"  [{node_id}] {_state_line(st)}")
    return 1


def _cmd_dump(args) -> int:
    try:
        with open(args.model, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise EngineError(f"cannot read {args.model}: {err.strerror or err}") from err
    sys.stdout.write(print_model(parse_model(text)))
    return 0


# Argument wiring. ---------------------------------------------------------------


def _add_bound_flags(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument(
        "--until",
        type=_time_bound,
        default=None,
        metavar="T",
        help="explore only up to this time (rational or decimal)",
    )
    group.add_argument(
        "--unbounded",
        action="store_true",
        help="explore the full (lasso-shaped) state space; the default",
    )
    sub.add_argument(
        "--max-states",
        type=_positive,
        default=DEFAULT_MAX_STATES,
        metavar="N",
        help=f"abort after this many states (default {DEFAULT_MAX_STATES})",
    )
    sub.add_argument(
        "--workers",
        type=_positive,
        default=1,
        metavar="N",
        help="worker threads for graph construction (default 1)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="de-fixpoint",
        description="Simulate and model-check discrete-event actor models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a model and print its trace")
    sim.add_argument("model", help="model file")
    sim.add_argument(
        "--until",
        type=_time_bound,
        required=True,
        metavar="T",
        help="simulate up to this time (rational or decimal)",
    )
    sim.add_argument(
        "--max-steps",
        type=_positive,
        default=DEFAULT_MAX_STEPS,
        metavar="N",
        help=f"stop after this many steps (default {DEFAULT_MAX_STEPS})",
    )
    sim.add_argument("--format", choices=("text", "json"), default="text")
    sim.add_argument(
        "--bottom-as-absent",
        action="store_true",
        help="treat unresolved ports as absent instead of failing",
    )
    sim.set_defaults(func=_cmd_simulate)

    sea = sub.add_parser("search", help="search reachable states for a proposition")
    sea.add_argument("model", help="model file")
    sea.add_argument("--prop", required=True, help="proposition, e.g. \"'Top | 'x = 1\"")
    _add_bound_flags(sea)
    sea.set_defaults(func=_cmd_search)

    chk = sub.add_parser("check", help="model-check a temporal formula")
    chk.add_argument("model", help="model file")
    chk.add_argument("--formula", required=True, help="formula, e.g. \"[] ~ ('Top | 'x = 1)\"")
    _add_bound_flags(chk)
    chk.add_argument(
        "--bottom-as-absent",
        action="store_true",
        help="treat unresolved ports as absent instead of failing",
    )
    chk.set_defaults(func=_cmd_check)

    dmp = sub.add_parser("dump", help="parse a model and print its canonical form")
    dmp.add_argument("model", help="model file")
    dmp.set_defaults(func=_cmd_dump)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else 2
    color = _use_color() if sys.stderr.isatty() else False
    try:
        return args.func(args)
    except ParseError as err:
        print(_red(f"syntax error: {err}", color), file=sys.stderr)
        return 2
    except ValidationError as err:
        print(_red(f"invalid model: {err}", color), file=sys.stderr)
        return 3
    except EngineError as err:
        print(_red(f"error: {err}", color), file=sys.stderr)
        return 3
    except BrokenPipeError:
        # A downstream consumer (e.g. `... | head`) closed the pipe; stop
        # quietly the way shell tools do.  Point stdout at /dev/null so the
        # interpreter's exit-time flush doesn't raise again.
        try:
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        except OSError:
            pass
        return 141  # 128 + SIGPIPE


if __name__ == "__main__":
    sys.exit(main())
