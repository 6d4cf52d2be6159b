"""Guard and action expressions.

Expressions appear in transition guards, transition outputs and variable
updates.  They read the owning machine's variables, parameters and input
ports.  Evaluation is strict: reading an unknown port raises, which is why
the fixed-point engine asks `guard_evaluable` before evaluating anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import AbsentPortRead, TypeMismatch, UnboundIdentifier, UnknownPortRead
from .values import (
    Absent,
    BoolVal,
    IntVal,
    PortStatus,
    Present,
    TimeVal,
    Unknown,
    Value,
    literal_text,
)


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Lit(Expr):
    value: Value


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class IsPresent(Expr):
    """True when the named input port carries a value this iteration."""

    port: str


@dataclass(frozen=True)
class PortValue(Expr):
    """The value on a present input port; an error on absent ports."""

    port: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "!" or "-"
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # && || + - * < <= > >= == !=
    left: Expr
    right: Expr


_COMPARISONS = {"<", "<=", ">", ">="}
_ARITHMETIC = {"+", "-", "*"}


def _as_bool(v: Value, what: str) -> bool:
    if not isinstance(v, BoolVal):
        raise TypeMismatch(f"{what} needs a boolean, got {v!r}")
    return v.value


def eval_expr(
    expr: Expr,
    variables: Mapping[str, Value],
    parameters: Mapping[str, Value],
    ports: Mapping[str, PortStatus],
) -> Value:
    """Evaluate an expression.  Variables shadow parameters of the same name."""
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Var):
        if expr.name in variables:
            return variables[expr.name]
        if expr.name in parameters:
            return parameters[expr.name]
        raise UnboundIdentifier(expr.name)
    if isinstance(expr, IsPresent):
        status = ports.get(expr.port)
        if status is None or isinstance(status, Unknown):
            raise UnknownPortRead(expr.port)
        return BoolVal(isinstance(status, Present))
    if isinstance(expr, PortValue):
        status = ports.get(expr.port)
        if status is None or isinstance(status, Unknown):
            raise UnknownPortRead(expr.port)
        if isinstance(status, Absent):
            raise AbsentPortRead(expr.port)
        return status.value
    if isinstance(expr, Unary):
        v = eval_expr(expr.operand, variables, parameters, ports)
        if expr.op == "!":
            return BoolVal(not _as_bool(v, "'!'"))
        if expr.op == "-":
            if isinstance(v, IntVal):
                return IntVal(-v.value)
            raise TypeMismatch(f"unary '-' needs an integer, got {v!r}")
        raise TypeMismatch(f"unknown unary operator {expr.op!r}")
    if isinstance(expr, Binary):
        lhs = eval_expr(expr.left, variables, parameters, ports)
        rhs = eval_expr(expr.right, variables, parameters, ports)
        return _apply_binary(expr.op, lhs, rhs)
    raise TypeMismatch(f"not an expression: {expr!r}")


def _apply_binary(op: str, lhs: Value, rhs: Value) -> Value:
    if op == "&&":
        return BoolVal(_as_bool(lhs, "'&&'") and _as_bool(rhs, "'&&'"))
    if op == "||":
        return BoolVal(_as_bool(lhs, "'||'") or _as_bool(rhs, "'||'"))
    if op in ("==", "!="):
        if type(lhs) is not type(rhs):
            raise TypeMismatch(f"cannot compare {lhs!r} with {rhs!r}")
        return BoolVal((lhs == rhs) if op == "==" else (lhs != rhs))
    if op in _COMPARISONS:
        if isinstance(lhs, IntVal) and isinstance(rhs, IntVal):
            a, b = lhs.value, rhs.value
        elif isinstance(lhs, TimeVal) and isinstance(rhs, TimeVal):
            a, b = lhs.value, rhs.value
        else:
            raise TypeMismatch(f"cannot order {lhs!r} and {rhs!r}")
        result = {
            "<": a < b,
            "<=": a <= b,
            ">": a > b,
            ">=": a >= b,
        }[op]
        return BoolVal(result)
    if op in _ARITHMETIC:
        if isinstance(lhs, IntVal) and isinstance(rhs, IntVal):
            a, b = lhs.value, rhs.value
            return IntVal(a + b if op == "+" else a - b if op == "-" else a * b)
        if isinstance(lhs, TimeVal) and isinstance(rhs, TimeVal) and op in ("+", "-"):
            result = lhs.value + rhs.value if op == "+" else lhs.value - rhs.value
            if result < 0:
                raise TypeMismatch("time subtraction went negative")
            return TimeVal(result)
        raise TypeMismatch(f"cannot apply {op!r} to {lhs!r} and {rhs!r}")
    raise TypeMismatch(f"unknown operator {op!r}")


def referenced_ports(expr: Expr) -> frozenset:
    """All port names an expression reads (via isPresent or value)."""
    found = set()
    _walk_ports(expr, found)
    return frozenset(found)


def _walk_ports(expr: Expr, found: set):
    if isinstance(expr, (IsPresent, PortValue)):
        found.add(expr.port)
    elif isinstance(expr, Unary):
        _walk_ports(expr.operand, found)
    elif isinstance(expr, Binary):
        _walk_ports(expr.left, found)
        _walk_ports(expr.right, found)


def referenced_names(expr: Expr) -> frozenset:
    """All variable/parameter identifiers an expression reads."""
    found = set()

    def walk(e):
        if isinstance(e, Var):
            found.add(e.name)
        elif isinstance(e, Unary):
            walk(e.operand)
        elif isinstance(e, Binary):
            walk(e.left)
            walk(e.right)

    walk(expr)
    return frozenset(found)


def guard_evaluable(expr: Expr, ports: Mapping[str, PortStatus]) -> bool:
    """True when every port the expression reads has a known status.

    Once this holds, the expression's value can no longer change within the
    current iteration, because port knowledge only grows.
    """
    for name in referenced_ports(expr):
        status = ports.get(name)
        if status is None or isinstance(status, Unknown):
            return False
    return True


# Rendering (shared by the model printer and error messages). ---------------

_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "<": 3,
    "<=": 3,
    ">": 3,
    ">=": 3,
    "==": 3,
    "!=": 3,
    "+": 4,
    "-": 4,
    "*": 5,
}


def expr_text(expr: Expr, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(expr, Lit):
        return literal_text(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, IsPresent):
        return f"isPresent({expr.port})"
    if isinstance(expr, PortValue):
        return f"value({expr.port})"
    if isinstance(expr, Unary):
        return f"{expr.op}{expr_text(expr.operand, 6)}"
    if isinstance(expr, Binary):
        prec = _PRECEDENCE[expr.op]
        text = (
            f"{expr_text(expr.left, prec)} {expr.op} "
            f"{expr_text(expr.right, prec, right_side=True)}"
        )
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text
    raise TypeError(f"not an expression: {expr!r}")
