"""Linear temporal formulas over state propositions.

The surface syntax offers negation, conjunction, disjunction,
implication, until, always, and eventually, plus a scoping form
``'Actor : f`` that re-roots every proposition inside ``f`` under that
actor (purely syntactic sugar; desugaring produces a scope-free
formula).  Model checking itself works on the desugared form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .props import LocProp, VarProp


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    prop: object  # VarProp | LocProp


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Scope(Formula):
    """Evaluate the body with every proposition path prefixed by ``path``."""

    path: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))


def desugar(f: Formula, prefix=()) -> Formula:
    """Remove Scope nodes by pushing their paths into the propositions."""
    prefix = tuple(prefix)
    if isinstance(f, Atom):
        if not prefix:
            return f
        prop = f.prop
        if isinstance(prop, VarProp):
            return Atom(VarProp(prefix + prop.actor, prop.assignments))
        return Atom(LocProp(prefix + prop.actor, prop.location))
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.operand, prefix))
    if isinstance(f, (And, Or, Implies, Until)):
        cls = type(f)
        return cls(desugar(f.left, prefix), desugar(f.right, prefix))
    if isinstance(f, Always):
        return Always(desugar(f.operand, prefix))
    if isinstance(f, Eventually):
        return Eventually(desugar(f.operand, prefix))
    if isinstance(f, Scope):
        return desugar(f.body, prefix + f.path)
    raise TypeError(f"not a formula: {f!r}")


def collect_atoms(f: Formula):
    """Every distinct proposition in the formula, in first-appearance order."""
    seen = []
    def walk(g):
        if isinstance(g, Atom):
            if g.prop not in seen:
                seen.append(g.prop)
        elif isinstance(g, (Not, Always, Eventually)):
            walk(g.operand)
        elif isinstance(g, (And, Or, Implies, Until)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Scope):
            walk(g.body)
    walk(f)
    return tuple(seen)


# Canonical printing (used by the dump command and by error messages). -------

_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_UNTIL = 4
_PREC_UNARY = 5


def formula_text(f: Formula, parent: int = 0) -> str:
    if isinstance(f, Atom):
        return repr(f.prop)
    if isinstance(f, TrueF):
        return "True"
    if isinstance(f, FalseF):
        return "False"
    if isinstance(f, Not):
        return "~ " + formula_text(f.operand, _PREC_UNARY)
    if isinstance(f, Always):
        return "[] " + formula_text(f.operand, _PREC_UNARY)
    if isinstance(f, Eventually):
        return "<> " + formula_text(f.operand, _PREC_UNARY)
    if isinstance(f, Scope):
        path = " . ".join(f"'{n}" for n in f.path)
        return f"{path} : ({formula_text(f.body)})"
    if isinstance(f, Implies):
        # Right-associative: the left operand needs parens at equal precedence.
        text = (
            formula_text(f.left, _PREC_IMPLIES + 1)
            + " -> "
            + formula_text(f.right, _PREC_IMPLIES)
        )
        prec = _PREC_IMPLIES
    elif isinstance(f, Or):
        text = formula_text(f.left, _PREC_OR) + " \\/ " + formula_text(f.right, _PREC_OR + 1)
        prec = _PREC_OR
    elif isinstance(f, And):
        text = formula_text(f.left, _PREC_AND) + " /\\ " + formula_text(f.right, _PREC_AND + 1)
        prec = _PREC_AND
    elif isinstance(f, Until):
        text = (
            formula_text(f.left, _PREC_UNTIL)
            + " U "
            + formula_text(f.right, _PREC_UNTIL + 1)
        )
        prec = _PREC_UNTIL
    else:
        raise TypeError(f"not a formula: {f!r}")
    if prec < parent:
        return f"({text})"
    return text
