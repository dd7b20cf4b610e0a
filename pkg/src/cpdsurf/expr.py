"""Single-variable expressions for profile functions.

Grammar (Python precedence, ``^`` is a synonym for ``**``)::

    expr   := expr ('+'|'-') term | term
    term   := term ('*'|'/') factor | factor
    factor := ('+'|'-') factor | power
    power  := atom ('^'|'**') factor | atom
    atom   := NUMBER | NAME | FUNC '(' expr ')' | 'pow' '(' expr ',' expr ')' | '(' expr ')'

NAME is either the free variable (any identifier, at most one distinct) or
one of the constants ``pi`` and ``e``.  FUNC is any elementary function of
:mod:`cpdsurf.jets` (sin, cosh, arctanh, arccot, ...).
"""
from __future__ import annotations

import ast
import math
import operator
from typing import Callable

from . import jets
from .errors import ConfigError
from .jets import Jet2

CONSTANTS = {"pi": math.pi, "e": math.e}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: jets.power,
}


class ExpressionError(ConfigError):
    pass


class Profile:
    """A scalar function of one variable usable on floats and jets."""

    def __init__(self, fn: Callable, label: str):
        self.fn = fn
        self.label = label

    def __call__(self, u):
        return self.fn(u)

    def __repr__(self) -> str:
        return f"Profile({self.label!r})"

    def deriv(self, u: float) -> float:
        j = self.fn(Jet2.seed_s(float(u)))
        return j.s if isinstance(j, Jet2) else 0.0

    def deriv2(self, u: float) -> float:
        j = self.fn(Jet2.seed_s(float(u)))
        return j.ss if isinstance(j, Jet2) else 0.0


def _compile(node: ast.AST, var: list[str]) -> Callable:
    if isinstance(node, ast.Expression):
        return _compile(node.body, var)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        c = float(node.value)
        return lambda u: c
    if isinstance(node, ast.Name):
        if node.id in CONSTANTS:
            c = CONSTANTS[node.id]
            return lambda u: c
        if node.id in jets.ELEMENTARY:
            raise ExpressionError(f"function {node.id!r} used without arguments")
        if var and var[0] != node.id:
            raise ExpressionError(f"more than one free variable: {var[0]!r}, {node.id!r}")
        var[:] = [node.id]
        return lambda u: u
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        a, b = _compile(node.left, var), _compile(node.right, var)
        return lambda u: op(a(u), b(u))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        a = _compile(node.operand, var)
        if isinstance(node.op, ast.USub):
            return lambda u: -a(u)
        return a
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name = node.func.id
        args = [_compile(x, var) for x in node.args]
        if name == "pow" and len(args) == 2:
            return lambda u: jets.power(args[0](u), args[1](u))
        if name in jets.ELEMENTARY and len(args) == 1:
            f = jets.ELEMENTARY[name]
            return lambda u: f(args[0](u))
        raise ExpressionError(f"unknown function or wrong arity: {name}")
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_profile(text: str | float | int) -> Profile:
    """Parse ``text`` into a :class:`Profile`; numbers give constant profiles."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        c = float(text)
        return Profile(lambda u: c, repr(c))
    src = str(text).strip()
    if not src:
        raise ExpressionError("empty expression")
    try:
        tree = ast.parse(src.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {src!r}: {exc.msg}") from None
    return Profile(_compile(tree, []), src)
