"""Arithmetic expressions in one variable ``x``, used for custom potentials.

Grammar (lowest to highest binding)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | 'x' | CONST | FUNC '(' expr (',' expr)* ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-2^2``
is ``-4`` and ``2^3^2`` is ``512``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

from .errors import EvaluationError, ExprSyntaxError, UnknownIdentifierError

__all__ = [
    "Num", "Var", "Const", "Neg", "BinOp", "Call", "Expr",
    "parse", "evaluate", "to_source", "compile_expr",
]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expr = Union[Num, Var, Const, Neg, BinOp, Call]

CONSTANTS = {"pi": math.pi, "e": math.e}
# name -> arity
FUNCTIONS = {
    "sin": 1, "cos": 1, "tan": 1, "exp": 1, "log": 1,
    "sqrt": 1, "abs": 1, "pow": 2,
}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", _offset(source, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), _offset(source, pos)))
        pos = m.end()
    tokens.append(("end", "", _offset(source, len(source))))
    return tokens


def _offset(source, char_index):
    return len(source[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, source):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text):
        kind, value, off = self.tok
        if value != text or kind == "end":
            found = "end of input" if kind == "end" else repr(value)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", off)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, value, off = self.tok
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {value!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok[0] == "op" and self.tok[1] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, value, off = self.tok
        if kind == "num":
            self.advance()
            return Num(float(value))
        if kind == "name":
            self.advance()
            if value == "x":
                return Var()
            if value in CONSTANTS:
                return Const(value)
            if value in FUNCTIONS:
                self.expect("(")
                args = [self.expr()]
                while self.tok[0] == "op" and self.tok[1] == ",":
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[value]:
                    raise ExprSyntaxError(
                        f"{value} takes {FUNCTIONS[value]} argument(s), got {len(args)}", off)
                return Call(value, tuple(args))
            raise UnknownIdentifierError(f"unknown identifier {value!r}", off)
        if kind == "op" and value == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"unexpected {found}", off)


def parse(source: str) -> Expr:
    """Parse ``source`` into an immutable expression tree.

    Raises
    ------
    ExprSyntaxError
        With ``offset`` set to the byte offset of the first offending token.
    UnknownIdentifierError
        For names other than ``x``, the constants and the supported functions.
    """
    return _Parser(source).parse()


def to_source(node: Expr) -> str:
    """Canonical, fully parenthesised text form; ``parse(to_source(t)) == t``."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_source(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


def _check(value, node):
    if not math.isfinite(value):
        raise EvaluationError(f"non-finite result in {to_source(node)}", node)
    return value


def _pow(a, b, node):
    if a == 0.0 and b < 0:
        raise EvaluationError(f"division by zero in {to_source(node)}", node)
    if a < 0 and not float(b).is_integer():
        raise EvaluationError(f"negative base to fractional power in {to_source(node)}", node)
    try:
        return _check(math.pow(a, b), node)
    except OverflowError:
        raise EvaluationError(f"overflow in {to_source(node)}", node) from None


def _div(a, b, node):
    if b == 0.0:
        raise EvaluationError(f"division by zero in {to_source(node)}", node)
    return _check(a / b, node)


def _log(a, node):
    if a <= 0.0:
        raise EvaluationError(f"log of non-positive value in {to_source(node)}", node)
    return math.log(a)


def _sqrt(a, node):
    if a < 0.0:
        raise EvaluationError(f"sqrt of negative value in {to_source(node)}", node)
    return math.sqrt(a)


def _exp(a, node):
    try:
        return math.exp(a)
    except OverflowError:
        raise EvaluationError(f"overflow in {to_source(node)}", node) from None


_UNARY = {
    "sin": lambda a, n: math.sin(a),
    "cos": lambda a, n: math.cos(a),
    "tan": lambda a, n: _check(math.tan(a), n),
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
    "abs": lambda a, n: abs(a),
}


def compile_expr(node: Expr) -> Callable[[float], float]:
    """Turn a tree into a closure ``f(x)``; same semantics as :func:`evaluate`."""
    if isinstance(node, Num):
        v = node.value
        return lambda x: v
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Const):
        v = CONSTANTS[node.name]
        return lambda x: v
    if isinstance(node, Neg):
        f = compile_expr(node.operand)
        return lambda x: -f(x)
    if isinstance(node, BinOp):
        lf, rf = compile_expr(node.left), compile_expr(node.right)
        op = node.op
        if op == "+":
            return lambda x: _check(lf(x) + rf(x), node)
        if op == "-":
            return lambda x: _check(lf(x) - rf(x), node)
        if op == "*":
            return lambda x: _check(lf(x) * rf(x), node)
        if op == "/":
            return lambda x: _div(lf(x), rf(x), node)
        if op == "^":
            return lambda x: _pow(lf(x), rf(x), node)
        raise TypeError(f"unknown operator {op!r}")
    if isinstance(node, Call):
        fs = [compile_expr(a) for a in node.args]
        if node.name == "pow":
            f0, f1 = fs
            return lambda x: _pow(f0(x), f1(x), node)
        fn = _UNARY[node.name]
        f0 = fs[0]
        return lambda x: fn(f0(x), node)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: Expr, x: float) -> float:
    """Evaluate the tree at ``x``.

    Division by zero, logarithms or square roots of out-of-range arguments and
    overflow raise :class:`EvaluationError` carrying the offending node instead
    of returning ``inf``/``nan``.
    """
    return compile_expr(node)(float(x))
