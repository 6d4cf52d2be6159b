"""Temporal-logic checking over the reachable state graph.

The primary route is automata-theoretic: negate the formula, build a
Büchi automaton for the negation, form the product with the (lasso
shaped) state graph, and run a nested depth-first search for a reachable
accepting cycle.  A non-empty product yields a counterexample run,
reported as a prefix plus a repeating cycle of actual system states.

Every answer is cross-checked before it is returned.  The system has
exactly one infinite run (each state has one successor), so the formula
can also be evaluated directly on that run by fixpoint iteration around
the lasso — an independent second route.  A counterexample additionally
has to follow real graph edges and violate the formula when replayed.
Disagreement between the routes is a bug and raises immediately rather
than returning a possibly-wrong verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .buchi import BuchiAutomaton, ltl_to_buchi
from .executor import step
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
    TrueF,
    Until,
    collect_atoms,
    desugar,
)
from .graph import StateGraph, Stutter
from .props import prop_holds


@dataclass
class Witness:
    """A violating run: the prefix states, then the cycle states repeating."""

    prefix_ids: list
    cycle_ids: list
    prefix: list  # SystemStates, parallel to prefix_ids
    cycle: list


@dataclass
class Verdict:
    holds: bool
    witness: Optional[Witness]
    graph: StateGraph


# Direct evaluation of a formula on a lasso. ---------------------------------


def eval_on_lasso(states, cycle_start: int, formula: Formula) -> bool:
    """Truth of ``formula`` at position 0 of the run states[0..] where
    position len(states)-1 loops back to ``cycle_start``.

    Works by computing, per subformula, its truth at every position:
    boolean connectives pointwise, until as a least fixpoint and always
    as a greatest fixpoint iterated around the loop until stable.  This
    deliberately shares nothing with the automaton construction.
    """
    n = len(states)
    if not (0 <= cycle_start < n):
        raise ValueError("cycle start out of range")
    succ = [i + 1 for i in range(n)]
    succ[n - 1] = cycle_start

    def table(f) -> list:
        if isinstance(f, TrueF):
            return [True] * n
        if isinstance(f, FalseF):
            return [False] * n
        if isinstance(f, Atom):
            return [prop_holds(s, f.prop) for s in states]
        if isinstance(f, Not):
            return [not v for v in table(f.operand)]
        if isinstance(f, And):
            left, right = table(f.left), table(f.right)
            return [a and b for a, b in zip(left, right)]
        if isinstance(f, Or):
            left, right = table(f.left), table(f.right)
            return [a or b for a, b in zip(left, right)]
        if isinstance(f, Implies):
            left, right = table(f.left), table(f.right)
            return [(not a) or b for a, b in zip(left, right)]
        if isinstance(f, Until):
            left, right = table(f.left), table(f.right)
            vals = [False] * n  # least fixpoint: start from nowhere
            changed = True
            while changed:
                changed = False
                for i in reversed(range(n)):
                    v = right[i] or (left[i] and vals[succ[i]])
                    if v != vals[i]:
                        vals[i] = v
                        changed = True
            return vals
        if isinstance(f, Eventually):
            return table(Until(TrueF(), f.operand))
        if isinstance(f, Always):
            inner = table(f.operand)
            vals = [True] * n  # greatest fixpoint: start from everywhere
            changed = True
            while changed:
                changed = False
                for i in reversed(range(n)):
                    v = inner[i] and vals[succ[i]]
                    if v != vals[i]:
                        vals[i] = v
                        changed = True
            return vals
        raise TypeError(f"not a formula: {f!r}")

    return table(formula)[0]


# Product emptiness via nested depth-first search. ----------------------------

_CYAN, _BLUE = 1, 2


def _product_successors(graph: StateGraph, ba: BuchiAutomaton, vals):
    def successors(ps):
        node, q = ps
        nxt = graph.succ[node]
        return [
            (nxt, q2) for q2 in ba.successors[q] if ba.guard_holds(q2, vals[nxt])
        ]

    return successors


def _find_accepting_lasso(graph: StateGraph, ba: BuchiAutomaton, vals):
    """Nested DFS (blue/red with a cyan stack) over the product.

    Returns (prefix, cycle) as lists of product states, or None when the
    product has no reachable accepting cycle.
    """
    successors = _product_successors(graph, ba, vals)

    def accepting(ps):
        return ps[1] in ba.accepting

    color = {}
    red = set()

    initial = [(0, q) for q in ba.initial if ba.guard_holds(q, vals[0])]
    for start in initial:
        if color.get(start) == _BLUE:
            continue
        # Blue DFS, iterative; stack frames are (state, successor list, index).
        stack = [[start, successors(start), 0]]
        color[start] = _CYAN

        def stack_states():
            return [frame[0] for frame in stack]

        while stack:
            frame = stack[-1]
            state, succs, idx = frame
            if idx < len(succs):
                frame[2] += 1
                child = succs[idx]
                c = color.get(child)
                if c == _CYAN and (accepting(state) or accepting(child)):
                    # Closing edge straight back into the blue stack.
                    path = stack_states()
                    j = path.index(child)
                    return path[:j], path[j:]
                if c is None:
                    color[child] = _CYAN
                    stack.append([child, successors(child), 0])
                continue
            # Postorder: run the red search from accepting states.
            if accepting(state):
                hit = _red_dfs(state, successors, color, red)
                if hit is not None:
                    red_path, target = hit
                    path = stack_states()
                    j = path.index(target)
                    # Cycle: blue stack from target up to state, then the red
                    # detour back to target (its endpoint, excluded).
                    return path[:j], path[j:] + red_path[1:-1]
            color[state] = _BLUE
            stack.pop()
    return None


def _red_dfs(root, successors, color, red):
    """Depth-first from an accepting state, hunting any state on the blue stack.

    Returns (path, target) where path runs root -> ... -> target and target
    is cyan, or None.  ``red`` persists across calls.
    """
    parent = {root: None}
    stack = [root]
    red.add(root)
    while stack:
        state = stack.pop()
        for child in successors(state):
            if color.get(child) == _CYAN:
                path = [child]
                cur = state
                while cur is not None:
                    path.append(cur)
                    cur = parent[cur]
                path.reverse()  # root ... state child
                return path, child
            if child not in red:
                red.add(child)
                parent[child] = state
                stack.append(child)
    return None


# The public entry point. ------------------------------------------------------


def check_ltl(graph: StateGraph, formula: Formula) -> Verdict:
    """Decide whether every run from node 0 satisfies the formula.

    The formula is checked on the given graph (build it first; bounded
    graphs give bounded-horizon answers).  The verdict is validated
    against an independent evaluation of the system's single infinite
    run before being returned.
    """
    f = desugar(formula)
    # Surface bad actor paths / variables / locations immediately, and on
    # every node: propositions must be evaluable over the whole graph.
    vals = []
    atoms = collect_atoms(f)
    for state in graph.nodes:
        vals.append({prop: prop_holds(state, prop) for prop in atoms})

    ba = ltl_to_buchi(Not(f))
    # The automaton may constrain only a subset of the atoms; valuations
    # carry them all.
    hit = _find_accepting_lasso(graph, ba, vals)

    # Second route: evaluate the formula directly on the unique run.
    direct = eval_on_lasso(graph.nodes, graph.cycle_entry(), f)
    if (hit is None) != direct:
        raise AssertionError(
            "model-checking routes disagree (automaton vs direct evaluation); "
            "this is a bug in the checker"
        )

    if hit is None:
        return Verdict(True, None, graph)

    prefix_ps, cycle_ps = hit
    witness = Witness(
        prefix_ids=[n for n, _ in prefix_ps],
        cycle_ids=[n for n, _ in cycle_ps],
        prefix=[graph.nodes[n] for n, _ in prefix_ps],
        cycle=[graph.nodes[n] for n, _ in cycle_ps],
    )
    _replay(graph, witness, f)
    return Verdict(False, witness, graph)


def _replay(graph: StateGraph, witness: Witness, formula: Formula) -> None:
    """A counterexample must be a real run and must violate the formula."""
    ids = witness.prefix_ids + witness.cycle_ids
    for here, there in zip(ids, ids[1:]):
        if graph.succ[here] != there:
            raise AssertionError("counterexample does not follow graph edges")
    if graph.succ[ids[-1]] != witness.cycle_ids[0]:
        raise AssertionError("counterexample cycle does not close")
    states = witness.prefix + witness.cycle
    if eval_on_lasso(states, len(witness.prefix), formula):
        raise AssertionError("counterexample replay does not violate the formula")
    # Re-execute the run (prefix plus one lap of the cycle) and demand the
    # very same states, so a reported witness is something a simulation
    # reproduces and not an artifact of graph bookkeeping.
    loop = ids + witness.cycle_ids
    current = graph.nodes[0]
    if graph.nodes[loop[0]] != current:
        raise AssertionError("counterexample does not start at the initial state")
    for here, there in zip(loop, loop[1:]):
        if isinstance(graph.kinds[here], Stutter):
            nxt = current
        else:
            nxt, _ = step(current, bottom_as_absent=graph.bottom_as_absent)
        if nxt != graph.nodes[there]:
            raise AssertionError("counterexample replay diverged from the executor")
        current = nxt
