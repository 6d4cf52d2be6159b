"""Independent reference semantics for LTL on lasso-shaped runs.

This module deliberately avoids the package's own lasso evaluator and
automaton pipeline.  It works on an ultimately periodic word given as a
list of valuations plus the index where the loop re-enters, and decides
formulas by direct bounded search:

Truth of any subformula along an ultimately periodic word is itself
ultimately periodic with the same prefix/period shape, so an until
(or an always/eventually) that has a witness at all has one within one
period past the point of interest.  Searching positions up to
``prefix + 2 * period`` and folding every position back to its
canonical index is therefore exact, with no fixpoint computation.

Also provided: a Büchi-acceptance oracle built on networkx, used to
check automaton constructions against word membership.
"""

from __future__ import annotations

import networkx as nx

from de_fixpoint.formula import (
    Always,
    And,
    Atom,
    Eventually,
    FalseF,
    Implies,
    Not,
    Or,
    Scope,
    TrueF,
    Until,
)


def eval_word(valuations, loop_start: int, formula, position: int = 0) -> bool:
    """Truth of ``formula`` at ``position`` of the word u · v^ω.

    ``valuations`` holds one dict (proposition -> bool) per position of
    the prefix u followed by the cycle v; ``loop_start`` is where v
    begins.  ``formula`` must be scope-free except that Scope nodes with
    pre-resolved atoms are rejected loudly.
    """
    total = len(valuations)
    period = total - loop_start
    assert period > 0, "the lasso needs a non-empty cycle"
    horizon = total + 2 * period

    def canon(q: int) -> int:
        return q if q < total else loop_start + (q - loop_start) % period

    memo = {}

    def truth(f, p: int) -> bool:
        p = canon(p)
        key = (id(f), p)
        if key in memo:
            return memo[key]
        if isinstance(f, TrueF):
            result = True
        elif isinstance(f, FalseF):
            result = False
        elif isinstance(f, Atom):
            result = valuations[p][f.prop]
        elif isinstance(f, Not):
            result = not truth(f.operand, p)
        elif isinstance(f, And):
            result = truth(f.left, p) and truth(f.right, p)
        elif isinstance(f, Or):
            result = truth(f.left, p) or truth(f.right, p)
        elif isinstance(f, Implies):
            result = (not truth(f.left, p)) or truth(f.right, p)
        elif isinstance(f, Until):
            result = False
            for q in range(p, horizon):
                if truth(f.right, q):
                    result = True
                    break
                if not truth(f.left, q):
                    break
        elif isinstance(f, Eventually):
            result = any(truth(f.operand, q) for q in range(p, horizon))
        elif isinstance(f, Always):
            result = all(truth(f.operand, q) for q in range(p, horizon))
        elif isinstance(f, Scope):
            raise TypeError("desugar scopes before evaluating")
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[key] = result
        return result

    return truth(formula, position)


def buchi_accepts(ba, valuations, loop_start: int) -> bool:
    """Does the state-labeled automaton accept the word u · v^ω?

    Builds the product of the word lasso with the automaton in networkx
    and looks for a reachable cycle through an accepting state.
    """
    total = len(valuations)

    def succ_pos(p: int) -> int:
        return p + 1 if p + 1 < total else loop_start

    graph = nx.DiGraph()
    roots = []
    for q in ba.initial:
        if ba.guard_holds(q, valuations[0]):
            roots.append((0, q))
            graph.add_node((0, q))
    frontier = list(roots)
    seen = set(roots)
    while frontier:
        pos, q = frontier.pop()
        np = succ_pos(pos)
        for q2 in ba.successors.get(q, ()):
            if not ba.guard_holds(q2, valuations[np]):
                continue
            node = (np, q2)
            graph.add_edge((pos, q), node)
            if node not in seen:
                seen.add(node)
                frontier.append(node)

    for comp in nx.strongly_connected_components(graph):
        has_cycle = len(comp) > 1 or any(graph.has_edge(n, n) for n in comp)
        if has_cycle and any(q in ba.accepting for _, q in comp):
            return True
    return False
