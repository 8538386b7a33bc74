"""Expression DSL: tokenizer, recursive-descent parser, evaluator, printer.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := unary ("^" factor)?
    unary  := "-" unary | atom
    atom   := NUMBER | IDENT | IDENT "(" args ")" | "(" expr ")"

Two-argument ``min``/``max`` and ``log1p`` are accepted on top of the core
function set. Note that ``-x^2`` parses as ``(-x)^2`` because the unary
minus binds tighter than ``^`` in this grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvalError, ParseError, UnknownIdentifier

VARIABLES = frozenset({"x", "t"})
UNARY_FUNCS = ("exp", "log", "sqrt", "abs", "cosh", "sinh", "arcsin", "log1p")
BINARY_FUNCS = ("min", "max")
RESERVED = VARIABLES | frozenset(UNARY_FUNCS) | frozenset(BINARY_FUNCS)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Var, Neg, Call, BinOp]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num" | "ident" | "op" | "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.lastgroup is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos,
                             {"number", "identifier", "operator"})
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text.encode("utf-8"))))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def _offset(self, tok: _Tok) -> int:
        # byte offset (the DSL is ASCII in practice, but be exact anyway)
        return len(self.text[: tok.offset].encode("utf-8")) if tok.kind != "end" else tok.offset

    def _fail(self, expected) -> None:
        tok = self.cur
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {what}", self._offset(tok), expected)

    def _take(self, text: str) -> None:
        if self.cur.kind == "op" and self.cur.text == text:
            self.i += 1
        else:
            self._fail({f"'{text}'"})

    def parse(self) -> Expr:
        node = self.expr()
        if self.cur.kind != "end":
            self._fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.cur.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.cur.text
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        base = self.unary()
        if self.cur.kind == "op" and self.cur.text == "^":
            self.i += 1
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Expr:
        if self.cur.kind == "op" and self.cur.text == "-":
            self.i += 1
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.cur
        if tok.kind == "num":
            self.i += 1
            return Num(float(tok.text))
        if tok.kind == "ident":
            name = tok.text
            if name not in RESERVED:
                raise UnknownIdentifier(f"unknown identifier {name!r}", self._offset(tok),
                                        sorted(RESERVED))
            self.i += 1
            if name in VARIABLES:
                return Var(name)
            self._take("(")
            args = [self.expr()]
            if name in BINARY_FUNCS:
                self._take(",")
                args.append(self.expr())
            self._take(")")
            return Call(name, tuple(args))
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            node = self.expr()
            self._take(")")
            return node
        self._fail({"number", "identifier", "'('", "'-'"})
        raise AssertionError("unreachable")


def parse_expr(text: str) -> Expr:
    """Parse DSL text into an immutable AST."""
    return _Parser(text).parse()


def free_variables(node: Expr) -> frozenset:
    if isinstance(node, Var):
        return frozenset({node.name})
    if isinstance(node, Num):
        return frozenset()
    if isinstance(node, Neg):
        return free_variables(node.operand)
    if isinstance(node, BinOp):
        return free_variables(node.left) | free_variables(node.right)
    out: frozenset = frozenset()
    for a in node.args:
        out |= free_variables(a)
    return out


def substitute(node: Expr, name: str, repl: Expr) -> Expr:
    """Replace every ``Var(name)`` in ``node`` with ``repl``."""
    if isinstance(node, Var):
        return repl if node.name == name else node
    if isinstance(node, Num):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.operand, name, repl))
    if isinstance(node, BinOp):
        return BinOp(node.op, substitute(node.left, name, repl), substitute(node.right, name, repl))
    return Call(node.func, tuple(substitute(a, name, repl) for a in node.args))


def pretty(node: Expr) -> str:
    """Fully parenthesized text that parses back to an equal AST."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{pretty(node.operand)})"
    if isinstance(node, BinOp):
        return f"({pretty(node.left)} {node.op} {pretty(node.right)})"
    return f"{node.func}({', '.join(pretty(a) for a in node.args)})"


def _check(cond, message: str) -> None:
    if np.any(cond):
        raise EvalError(message)


def _power(base, expo):
    base, expo = np.broadcast_arrays(np.asarray(base, float), np.asarray(expo, float))
    bad = (base < 0) & (expo != np.round(expo))
    _check(bad, "non-integer power of a negative base")
    _check((base == 0) & (expo < 0), "zero raised to a negative power")
    return np.power(base, expo)


def _eval(node: Expr, env: dict):
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Var):
        if node.name not in env:
            raise EvalError(f"variable {node.name!r} is not bound")
        return env[node.name]
    if isinstance(node, Neg):
        return -_eval(node.operand, env)
    if isinstance(node, BinOp):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            _check(np.asarray(b) == 0, "division by zero")
            return a / b
        return _power(a, b)
    args = [_eval(a, env) for a in node.args]
    f = node.func
    if f == "min":
        return np.minimum(args[0], args[1])
    if f == "max":
        return np.maximum(args[0], args[1])
    a = args[0]
    if f == "log":
        _check(np.asarray(a) <= 0, "log of a non-positive number")
        return np.log(a)
    if f == "log1p":
        _check(np.asarray(a) <= -1, "log1p of a number <= -1")
        return np.log1p(a)
    if f == "sqrt":
        _check(np.asarray(a) < 0, "sqrt of a negative number")
        return np.sqrt(a)
    if f == "arcsin":
        _check(np.abs(a) > 1, "arcsin outside [-1, 1]")
        return np.arcsin(a)
    return {"exp": np.exp, "abs": np.abs, "cosh": np.cosh, "sinh": np.sinh}[f](a)


def evaluate(node: Expr, **env):
    """Evaluate ``node`` with numpy broadcasting; raise EvalError on non-finite output."""
    bound = {k: np.asarray(v, dtype=float) for k, v in env.items()}
    with np.errstate(all="ignore"):
        out = np.asarray(_eval(node, bound), dtype=float)
    if not np.all(np.isfinite(out)):
        raise EvalError("expression evaluated to a non-finite value")
    if bound:
        out = np.broadcast_to(out, np.broadcast_shapes(*(v.shape for v in bound.values()))).copy()
    return out
