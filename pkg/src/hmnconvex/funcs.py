"""Candidate functions f: built-ins, DSL expressions, derived combinations, h-chords."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import expr as ex
from .errors import DomainError, EvalError, ParseError
from .hfun import HFunction, eval_h

X = ex.Var("x")
INF = math.inf


def _pow_ast(lam: float) -> ex.Expr:
    e = ex.Num(abs(lam))
    return ex.BinOp("^", X, e if lam >= 0 else ex.Neg(e))


_BUILTIN_ASTS = {
    "cosh": ex.Call("cosh", (X,)),
    "arcsin": ex.Call("arcsin", (X,)),
    "exp": ex.Call("exp", (X,)),
    "neg_exp": ex.Call("exp", (ex.Neg(X),)),
    "log1p": ex.Call("log1p", (X,)),
}
_BUILTIN_DOMAINS = {"arcsin": (0.0, 1.0)}
_FAST = {
    "cosh": np.cosh,
    "arcsin": np.arcsin,
    "exp": np.exp,
    "neg_exp": lambda x: np.exp(-x),
    "log1p": np.log1p,
}
BUILTIN_NAMES = tuple(_BUILTIN_ASTS) + ("pow:<lambda>",)


@dataclass(frozen=True)
class ScalarFn:
    """A real function of ``x`` analysed on the open interval ``domain``.

    Evaluation is allowed on the closure of ``domain`` (``cosh(0)``, ``arcsin(1)``);
    sampling always stays strictly inside it.
    """

    spec: str
    ast: ex.Expr
    domain: tuple = (0.0, INF)
    builtin: Optional[str] = None
    lam: float = 1.0

    def __post_init__(self):
        lo, hi = self.domain
        if not (lo >= 0 and hi > lo):
            raise DomainError(f"invalid domain {self.domain}: need 0 <= lo < hi")

    def restrict(self, lo: float, hi: float) -> "ScalarFn":
        return replace(self, domain=(float(lo), float(hi)))

    def __call__(self, x):
        return eval_fn(self, x)

    def __str__(self):
        return self.spec


def builtin(name: str, domain: Optional[tuple] = None) -> ScalarFn:
    if name.startswith("pow:"):
        try:
            lam = float(name[4:])
        except ValueError:
            raise ParseError(f"bad exponent in {name!r}", 4, {"number"}) from None
        return ScalarFn(f"pow:{_fmt(lam)}", _pow_ast(lam), domain or (0.0, INF), "pow", lam)
    if name not in _BUILTIN_ASTS:
        raise ParseError(f"unknown function {name!r}", 0, set(BUILTIN_NAMES) | {"expr:<text>"})
    return ScalarFn(name, _BUILTIN_ASTS[name], domain or _BUILTIN_DOMAINS.get(name, (0.0, INF)), name)


def from_expr(text_or_ast, domain: tuple = (0.0, INF)) -> ScalarFn:
    node = ex.parse_expr(text_or_ast) if isinstance(text_or_ast, str) else text_or_ast
    extra = ex.free_variables(node) - {"x"}
    if extra:
        raise ParseError(f"f expressions may only use the variable x, found {sorted(extra)}", 0, {"x"})
    return ScalarFn(f"expr:{ex.pretty(node)}", node, tuple(map(float, domain)))


def parse_fn(spec: str, domain: Optional[tuple] = None) -> ScalarFn:
    """``cosh | arcsin | exp | neg_exp | log1p | pow:<lambda> | expr:<text>``.

    Bare DSL text (anything that is not a built-in name) is accepted as an expression.
    """
    spec = spec.strip()
    if spec.startswith("expr:"):
        return from_expr(spec[5:], domain or (0.0, INF))
    if spec in _BUILTIN_ASTS or spec.startswith("pow:"):
        return builtin(spec, domain)
    return from_expr(spec, domain or (0.0, INF))


def _fmt(v: float) -> str:
    return repr(float(v)).removesuffix(".0") if float(v).is_integer() else repr(float(v))


def eval_fn(f: ScalarFn, x):
    """f(x) for x in the closure of f's domain; finite output or EvalError."""
    arr = np.asarray(x, dtype=float)
    lo, hi = f.domain
    if np.any(~((arr >= lo) & (arr <= hi))):
        raise DomainError(f"x outside the domain [{lo}, {hi}] of f={f.spec}")
    with np.errstate(all="ignore"):
        if f.builtin == "pow":
            if np.any((arr == 0) & (f.lam < 0)):
                raise EvalError(f"{f.spec} is singular at 0")
            out = np.power(arr, f.lam)
        elif f.builtin is not None:
            if f.builtin == "arcsin" and np.any(np.abs(arr) > 1):
                raise EvalError("arcsin outside [-1, 1]")
            out = _FAST[f.builtin](arr)
        else:
            out = ex.evaluate(f.ast, x=arr)
    out = np.asarray(out, float)
    if not np.all(np.isfinite(out)):
        raise EvalError(f"f={f.spec} is not finite at some sampled x")
    return float(out) if out.ndim == 0 else out


# -- derived functions --------------------------------------------------------

def _derived(node: ex.Expr, domain: tuple) -> ScalarFn:
    return ScalarFn(f"expr:{ex.pretty(node)}", node, domain)


def _common(f: ScalarFn, g: ScalarFn) -> tuple:
    lo, hi = max(f.domain[0], g.domain[0]), min(f.domain[1], g.domain[1])
    if not lo < hi:
        raise DomainError(f"{f.spec} and {g.spec} have disjoint domains")
    return lo, hi


def fn_sum(f: ScalarFn, g: ScalarFn) -> ScalarFn:
    return _derived(ex.BinOp("+", f.ast, g.ast), _common(f, g))


def fn_product(f: ScalarFn, g: ScalarFn) -> ScalarFn:
    return _derived(ex.BinOp("*", f.ast, g.ast), _common(f, g))


def fn_max(f: ScalarFn, g: ScalarFn) -> ScalarFn:
    return _derived(ex.Call("max", (f.ast, g.ast)), _common(f, g))


def fn_scale(lam: float, f: ScalarFn) -> ScalarFn:
    return _derived(ex.BinOp("*", ex.Num(float(lam)), f.ast), f.domain)


def fn_compose(f: ScalarFn, g: ScalarFn) -> ScalarFn:
    """``f o g`` on g's domain (range compatibility is the caller's concern)."""
    return _derived(ex.substitute(f.ast, "x", g.ast), g.domain)


# -- h-chords -------------------------------------------------------------------

def h_chord(f: ScalarFn, h: HFunction, x: float, y: float, t):
    """``L(t; h) = [f(y) - f(x)] h((t - x)/(y - x)) + f(x)`` for t in [x, y]."""
    if not x < y:
        raise DomainError("h-chord needs x < y")
    t = np.asarray(t, float)
    if np.any((t < x) | (t > y)):
        raise DomainError("t must lie in [x, y]")
    s = np.clip((t - x) / (y - x), 0.0, 1.0)
    fx, fy = eval_fn(f, x), eval_fn(f, y)
    out = (fy - fx) * np.asarray(eval_h(h, s)) + fx
    return float(out) if np.ndim(out) == 0 else out


def emit_chord_data(f: ScalarFn, hs: Sequence[HFunction], x: float, y: float, n: int):
    """Header and rows ``(t, f(t), L(t; h_1), ...)`` at n equally spaced points of [x, y]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    t = np.linspace(x, y, n)
    t[0], t[-1] = x, y
    cols = [t, np.asarray(eval_fn(f, t))] + [np.asarray(h_chord(f, h, x, y, t)) for h in hs]
    header = ["t", "f"] + [f"L[{h.spec}]" for h in hs]
    rows = [tuple(float(c[i]) for c in cols) for i in range(n)]
    return header, rows


def chord_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format(v, ".17g") for v in r])
    return buf.getvalue()
