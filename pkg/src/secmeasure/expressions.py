"""Recursive-descent parser for user-supplied function strings.

Grammar (whitespace insignificant)::

    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := unary ('^' factor)?          # '^' right-associative
    unary   := '-' unary | primary
    primary := number | 'x' | ident '(' expr ')' | '(' expr ')'

Numbers are decimal literals with an optional exponent; there is no
implicit multiplication.  Supported functions: sqrt, ln, exp, sin, cos,
atan, abs.
"""

from __future__ import annotations

import re
from typing import Union

import numpy as np

from .errors import EvaluationFailure, ExprSyntaxError, UnknownFunction

__all__ = ["Expr", "parse", "evaluate", "FUNCTIONS"]

FUNCTIONS = {
    "sqrt": np.sqrt,
    "ln": np.log,
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "atan": np.arctan,
    "abs": np.abs,
}

_TOKEN_RE = re.compile(r"""
    (?P<num>\d+(\.\d*)?([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos,
                                  ("number", "identifier", "operator"))
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def cur(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, off = self.cur
        if kind == "op" and text == op:
            return self.advance()
        raise ExprSyntaxError(f"expected {op!r}, found {text or 'end of input'!r}",
                              off, (op,))

    def parse(self):
        tree = self.expr()
        kind, text, off = self.cur
        if kind != "end":
            raise ExprSyntaxError(f"trailing input {text!r}", off, ("end of input",))
        return tree

    def expr(self):
        node = self.term()
        while self.cur[0] == "op" and self.cur[1] in "+-":
            op = self.advance()[1]
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.cur[0] == "op" and self.cur[1] in "*/":
            op = self.advance()[1]
            node = ("bin", op, node, self.factor())
        return node

    def factor(self):
        base = self.unary()
        if self.cur[0] == "op" and self.cur[1] == "^":
            self.advance()
            return ("bin", "^", base, self.factor())
        return base

    def unary(self):
        if self.cur[0] == "op" and self.cur[1] == "-":
            self.advance()
            return ("neg", self.unary())
        return self.primary()

    def primary(self):
        kind, text, off = self.cur
        if kind == "num":
            self.advance()
            return ("num", float(text))
        if kind == "ident":
            self.advance()
            if text == "x":
                return ("x",)
            if text not in FUNCTIONS:
                raise UnknownFunction(f"unknown function {text!r}", off,
                                      tuple(FUNCTIONS))
            self.expect_op("(")
            arg = self.expr()
            self.expect_op(")")
            return ("call", text, arg)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", off,
                              ("number", "x", "function", "("))


def _eval(node, x):
    tag = node[0]
    if tag == "num":
        return node[1] * np.ones_like(x) if isinstance(x, np.ndarray) else node[1]
    if tag == "x":
        return x
    if tag == "neg":
        return -_eval(node[1], x)
    if tag == "call":
        with np.errstate(all="ignore"):
            return FUNCTIONS[node[1]](_eval(node[2], x))
    _, op, lhs, rhs = node
    a = _eval(lhs, x)
    b = _eval(rhs, x)
    with np.errstate(all="ignore"):
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return np.divide(a, b)
        return np.power(a, b)


def _print(node) -> str:
    tag = node[0]
    if tag == "num":
        return repr(node[1])
    if tag == "x":
        return "x"
    if tag == "neg":
        return f"(-{_print(node[1])})"
    if tag == "call":
        return f"{node[1]}({_print(node[2])})"
    _, op, lhs, rhs = node
    return f"({_print(lhs)}{op}{_print(rhs)})"


class Expr:
    """Immutable parsed expression; evaluates on scalars or ndarrays."""

    __slots__ = ("tree", "source")

    def __init__(self, tree, source: str):
        self.tree = tree
        self.source = source

    def evaluate(self, x: Union[float, np.ndarray]):
        scalar = np.isscalar(x)
        arr = np.asarray(x, dtype=float)
        old = np.seterr(all="ignore")
        try:
            vals = np.asarray(_eval(self.tree, arr), dtype=float)
        except ZeroDivisionError:
            raise EvaluationFailure(f"division by zero evaluating {self.source!r}")
        finally:
            np.seterr(**old)
        if not np.all(np.isfinite(vals)):
            raise EvaluationFailure(
                f"{self.source!r} is non-finite at some requested point")
        return float(vals) if scalar else vals

    __call__ = evaluate

    def canonical(self) -> str:
        """Fully parenthesized form; reparsing it yields an identical tree."""
        return _print(self.tree)

    def __eq__(self, other):
        return isinstance(other, Expr) and self.tree == other.tree

    def __hash__(self):
        return hash(("Expr", repr(self.tree)))

    def __repr__(self):
        return f"Expr({self.source!r})"


def parse(src: str) -> Expr:
    """Parse an expression string into an evaluable tree."""
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0, ("expression",))
    return Expr(_Parser(src).parse(), src)


def evaluate(e: Expr, x: float) -> float:
    """Evaluate a parsed expression at a point."""
    return e.evaluate(x)
