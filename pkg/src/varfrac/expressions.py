"""Small expression language for order functions and Lagrangian integrands.

Grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := ('-' | '+') factor | power
    power   := atom ('^' factor)?          # right-associative
    atom    := NUMBER | VARIABLE | FUNC '(' expr (',' expr)* ')' | '(' expr ')'

Unary minus binds looser than '^', so ``-2^2`` is ``-(2^2) = -4``.
Variables are fixed to the set {t, tau, y, yp, dcap, iop, xi}; anything
else is rejected at parse time.  Evaluation accepts floats or numpy
arrays as bindings and is pure.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import gammafn
from .exceptions import (
    DomainError,
    EvaluationError,
    ParseError,
    UnknownIdentifierError,
)

ALLOWED_VARIABLES = frozenset({"t", "tau", "y", "yp", "dcap", "iop", "xi"})
FUNCTIONS = {
    "sin": 1,
    "cos": 1,
    "exp": 1,
    "ln": 1,
    "sqrt": 1,
    "abs": 1,
    "gamma": 1,
    "pow": 2,
}

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


# --- AST -----------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    column: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Num(Node):
    value: float = 0.0


@dataclass(frozen=True)
class Var(Node):
    name: str = ""


@dataclass(frozen=True)
class Unary(Node):
    op: str = "-"
    operand: Node = None


@dataclass(frozen=True)
class Binary(Node):
    op: str = "+"
    left: Node = None
    right: Node = None


@dataclass(frozen=True)
class Call(Node):
    func: str = ""
    args: tuple = ()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY_PREC = 3


def _prec(node: Node) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary):
        return _UNARY_PREC
    return 5


def to_source(node: Node) -> str:
    """Canonical printer; parse(to_source(e)) reproduces the same AST."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        inner = to_source(node.operand)
        if _prec(node.operand) < _UNARY_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Binary):
        left = to_source(node.left)
        right = to_source(node.right)
        p = _PREC[node.op]
        if node.op == "^":
            # right-associative, so the left child always needs guarding
            if _prec(node.left) <= p:
                left = f"({left})"
            if _prec(node.right) < _UNARY_PREC:
                right = f"({right})"
        else:
            if _prec(node.left) < p:
                left = f"({left})"
            if _prec(node.right) <= p:
                right = f"({right})"
        return f"{left} {node.op} {right}"
    if isinstance(node, Call):
        args = ", ".join(to_source(a) for a in node.args)
        return f"{node.func}({args})"
    raise TypeError(f"unknown node type {type(node)!r}")


@dataclass(frozen=True)
class Expression:
    """Parsed expression: immutable AST plus its free variables."""

    ast: Node
    source: str
    free_vars: frozenset

    def __call__(self, **bindings):
        return evaluate(self, bindings)


# --- Tokenizer / parser --------------------------------------------------

class _Token:
    __slots__ = ("kind", "text", "column")

    def __init__(self, kind, text, column):
        self.kind = kind
        self.text = text
        self.column = column


def _tokenize(source: str):
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch in "+-*/^(),":
            tokens.append(_Token(ch, ch, col))
            i += 1
            continue
        m = _NUMBER_RE.match(source, i)
        if m:
            tokens.append(_Token("number", m.group(), col))
            i = m.end()
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            tokens.append(_Token("ident", m.group(), col))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r} at column {col}", col,
                         expected=("number", "identifier", "operator", "("))
    tokens.append(_Token("end", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, kind):
        if self.cur.kind != kind:
            raise ParseError(
                f"expected {kind!r} but found {self.cur.text or 'end of input'!r} "
                f"at column {self.cur.column}",
                self.cur.column,
                expected=(kind,),
            )
        return self.advance()

    def parse_expr(self):
        node = self.parse_term()
        while self.cur.kind in ("+", "-"):
            op = self.advance()
            rhs = self.parse_term()
            node = Binary(op.column, op.kind, node, rhs)
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.cur.kind in ("*", "/"):
            op = self.advance()
            rhs = self.parse_factor()
            node = Binary(op.column, op.kind, node, rhs)
        return node

    def parse_factor(self):
        if self.cur.kind in ("+", "-"):
            op = self.advance()
            operand = self.parse_factor()
            if op.kind == "+":
                return operand
            return Unary(op.column, "-", operand)
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.cur.kind == "^":
            op = self.advance()
            exponent = self.parse_factor()
            return Binary(op.column, "^", base, exponent)
        return base

    def parse_atom(self):
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            return Num(tok.column, float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.cur.kind == "(":
                if tok.text not in FUNCTIONS:
                    raise UnknownIdentifierError(tok.text, tok.column)
                self.advance()
                args = [self.parse_expr()]
                while self.cur.kind == ",":
                    self.advance()
                    args.append(self.parse_expr())
                self.expect(")")
                arity = FUNCTIONS[tok.text]
                if len(args) != arity:
                    raise ParseError(
                        f"{tok.text} takes {arity} argument(s), got {len(args)} "
                        f"at column {tok.column}",
                        tok.column,
                        expected=(f"{arity} arguments",),
                    )
                return Call(tok.column, tok.text, tuple(args))
            if tok.text not in ALLOWED_VARIABLES:
                raise UnknownIdentifierError(tok.text, tok.column)
            return Var(tok.column, tok.text)
        if tok.kind == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            return node
        raise ParseError(
            f"expected a number, variable, function or '(' "
            f"but found {tok.text or 'end of input'!r} at column {tok.column}",
            tok.column,
            expected=("number", "variable", "function", "("),
        )


def parse(source: str) -> Expression:
    """Parse ``source`` into an :class:`Expression`."""
    if not source or not source.strip():
        raise ParseError("empty expression", 1, expected=("expression",))
    parser = _Parser(_tokenize(source))
    ast = parser.parse_expr()
    if parser.cur.kind != "end":
        raise ParseError(
            f"trailing input {parser.cur.text!r} at column {parser.cur.column}",
            parser.cur.column,
            expected=("end of input",),
        )
    return Expression(ast=ast, source=source, free_vars=frozenset(_free_vars(ast)))


def _free_vars(node: Node):
    if isinstance(node, Var):
        yield node.name
    elif isinstance(node, Unary):
        yield from _free_vars(node.operand)
    elif isinstance(node, Binary):
        yield from _free_vars(node.left)
        yield from _free_vars(node.right)
    elif isinstance(node, Call):
        for a in node.args:
            yield from _free_vars(a)


# --- Evaluation ----------------------------------------------------------

def _fail(node, reason):
    raise EvaluationError(f"{reason} in '{to_source(node)}'", node_text=to_source(node))


def _power(node, base, expo, strict):
    base = np.asarray(base, dtype=float)
    expo = np.asarray(expo, dtype=float)
    if strict:
        neg = base < 0.0
        if np.any(neg & (expo != np.round(expo))):
            _fail(node, "negative base with non-integer exponent")
        if np.any((base == 0.0) & (expo <= 0.0)):
            _fail(node, "zero base with non-positive exponent")
    with np.errstate(all="ignore"):
        return np.power(base, expo)


def _eval(node, bindings, strict):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return bindings[node.name]
        except KeyError:
            raise EvaluationError(f"missing binding for variable '{node.name}'",
                                  node_text=node.name) from None
    if isinstance(node, Unary):
        return -_eval(node.operand, bindings, strict)
    if isinstance(node, Binary):
        left = _eval(node.left, bindings, strict)
        right = _eval(node.right, bindings, strict)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            with np.errstate(all="ignore"):
                return left * right
        if node.op == "/":
            if strict and np.any(np.asarray(right) == 0.0):
                _fail(node, "division by zero")
            with np.errstate(all="ignore"):
                return left / right
        return _power(node, left, right, strict)
    if isinstance(node, Call):
        args = [_eval(a, bindings, strict) for a in node.args]
        return _call(node, args, strict)
    raise TypeError(f"unknown node type {type(node)!r}")


def _call(node, args, strict):
    name = node.func
    x = np.asarray(args[0], dtype=float)
    if name == "sin":
        return np.sin(x)
    if name == "cos":
        return np.cos(x)
    if name == "exp":
        return np.exp(x)
    if name == "abs":
        return np.abs(x)
    if name == "ln":
        if strict and np.any(x <= 0.0):
            _fail(node, "logarithm of a non-positive value")
        with np.errstate(all="ignore"):
            return np.log(x)
    if name == "sqrt":
        if strict and np.any(x < 0.0):
            _fail(node, "square root of a negative value")
        with np.errstate(all="ignore"):
            return np.sqrt(x)
    if name == "gamma":
        if strict:
            try:
                return gammafn.gamma(x)
            except DomainError as exc:
                _fail(node, str(exc))
        safe = np.where(x > 0.0, x, 1.0)
        out = gammafn.gamma(safe)
        return np.where(x > 0.0, out, np.nan)
    if name == "pow":
        return _power(node, args[0], args[1], strict)
    raise TypeError(f"unknown function {name!r}")


def evaluate(expression: Expression, bindings, *, strict=True):
    """Evaluate with ``bindings`` mapping variable names to floats or arrays.

    With ``strict=True`` (the default) numeric domain violations raise
    :class:`EvaluationError` naming the offending node; internal callers
    may pass ``strict=False`` to let non-finite values flow through and
    apply their own containment policy.
    """
    missing = expression.free_vars - set(bindings)
    if missing:
        raise EvaluationError(
            f"missing binding for variable '{sorted(missing)[0]}'",
            node_text=sorted(missing)[0],
        )
    out = _eval(expression.ast, bindings, strict)
    free_bindings = [bindings[name] for name in expression.free_vars]
    if any(np.ndim(v) > 0 for v in free_bindings):
        shape = np.broadcast_shapes(*(np.shape(v) for v in free_bindings))
        out_arr = np.asarray(out, dtype=float)
        if out_arr.shape != shape:
            out_arr = np.broadcast_to(out_arr, shape).copy()
        return out_arr
    value = float(out)
    if strict and not math.isfinite(value):
        _fail(expression.ast, "non-finite result")
    return value
