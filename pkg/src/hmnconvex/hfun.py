"""Weight functions h and the algebraic hypotheses placed on them."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from . import expr as ex
from .errors import DomainError, EvalError, NonPositiveValue, ParseError
from .sampling import Axis, SamplePlan, box_samples
from .verdict import FAILS, HOLDS, PredicateVerdict, predicate

IDENTITY = "id"
POWER = "pow"
ONE = "one"
RECIPROCAL = "recip"
EXPRESSION = "expr"

DEFAULT_H_DOMAIN = (0.0, 4.0)
ABOVE_ID = "above"
BELOW_ID = "below"
AT_MOST = "at_most"
AT_LEAST = "at_least"


@dataclass(frozen=True)
class HFunction:
    """A positive weight function on the open interval ``domain``.

    ``h(0)`` is additionally allowed for presets with a finite limit there
    (identity, ``pow:r`` with ``r >= 0``, ``one``), which lets class checks
    sample ``t in {0, 1}``.
    """

    kind: str
    r: float = 1.0
    ast: Optional[ex.Expr] = None
    domain: tuple = DEFAULT_H_DOMAIN

    def __post_init__(self):
        lo, hi = self.domain
        if not (lo <= 0.0 and hi >= 1.0 and lo < hi):
            raise DomainError(f"h domain {self.domain} must contain (0, 1)")
        if self.kind == EXPRESSION and self.ast is None:
            raise ValueError("expression h needs an AST")

    @property
    def spec(self) -> str:
        if self.kind == POWER:
            return f"pow:{_fmt(self.r)}"
        if self.kind == EXPRESSION:
            return f"expr:{ex.pretty(self.ast)}"
        return self.kind

    @property
    def includes_zero(self) -> bool:
        if self.kind in (IDENTITY, ONE):
            return True
        return self.kind == POWER and self.r >= 0

    def to_ast(self) -> ex.Expr:
        t = ex.Var("t")
        if self.kind == IDENTITY:
            return t
        if self.kind == ONE:
            return ex.Num(1.0)
        if self.kind == RECIPROCAL:
            return ex.BinOp("/", ex.Num(1.0), t)
        if self.kind == POWER:
            expo = ex.Num(abs(self.r))
            return ex.BinOp("^", t, expo if self.r >= 0 else ex.Neg(expo))
        return self.ast

    def with_domain(self, lo: float, hi: float) -> "HFunction":
        return replace(self, domain=(float(lo), float(hi)))

    def __call__(self, t):
        return eval_h(self, t)

    def __str__(self):
        return self.spec


def _fmt(v: float) -> str:
    return repr(float(v)).removesuffix(".0") if float(v).is_integer() else repr(float(v))


def identity(domain=DEFAULT_H_DOMAIN) -> HFunction:
    return HFunction(IDENTITY, domain=domain)


def power(r: float, domain=DEFAULT_H_DOMAIN) -> HFunction:
    return HFunction(POWER, r=float(r), domain=domain)


def one(domain=DEFAULT_H_DOMAIN) -> HFunction:
    return HFunction(ONE, domain=domain)


def reciprocal(domain=DEFAULT_H_DOMAIN) -> HFunction:
    return HFunction(RECIPROCAL, domain=domain)


def expression(text_or_ast, domain=DEFAULT_H_DOMAIN) -> HFunction:
    node = ex.parse_expr(text_or_ast) if isinstance(text_or_ast, str) else text_or_ast
    extra = ex.free_variables(node) - {"t"}
    if extra:
        raise ParseError(f"h expressions may only use the variable t, found {sorted(extra)}", 0, {"t"})
    return HFunction(EXPRESSION, ast=node, domain=domain)


def parse_h(spec: str, domain=DEFAULT_H_DOMAIN) -> HFunction:
    """Build an h from ``id | one | recip | pow:<r> | expr:<text>``."""
    spec = spec.strip()
    if spec == IDENTITY:
        return identity(domain)
    if spec == ONE:
        return one(domain)
    if spec == RECIPROCAL:
        return reciprocal(domain)
    if spec.startswith("pow:"):
        try:
            r = float(spec[4:])
        except ValueError:
            raise ParseError(f"bad exponent in {spec!r}", 4, {"number"}) from None
        return power(r, domain)
    if spec.startswith("expr:"):
        return expression(spec[5:], domain)
    raise ParseError(f"unknown h spec {spec!r}", 0, {"id", "one", "recip", "pow:<r>", "expr:<text>"})


def _in_domain(h: HFunction, t: np.ndarray) -> np.ndarray:
    lo, hi = h.domain
    ok = (t > lo) & (t < hi)
    if h.includes_zero:
        ok |= t == 0.0
    return ok


def eval_h(h: HFunction, t):
    """h(t); scalar in, float out, array in, array out."""
    arr = np.asarray(t, dtype=float)
    if not np.all(_in_domain(h, arr)):
        bad = arr[~_in_domain(h, arr)] if arr.ndim else arr
        raise DomainError(f"t={np.ravel(bad)[0]!r} outside the domain {h.domain} of h={h.spec}")
    with np.errstate(all="ignore"):
        if h.kind == IDENTITY:
            out = arr.copy()
        elif h.kind == ONE:
            out = np.ones_like(arr)
        elif h.kind == RECIPROCAL:
            out = 1.0 / arr
        elif h.kind == POWER:
            out = np.power(arr, h.r)
        else:
            out = ex.evaluate(h.ast, t=arr)
            if np.any(out <= 0):
                raise NonPositiveValue(f"h={h.spec} is not positive at some sampled t")
    if not np.all(np.isfinite(out)):
        raise EvalError(f"h={h.spec} is not finite at some sampled t")
    return float(out) if out.ndim == 0 else out


def compose_h(outer: HFunction, inner: HFunction) -> HFunction:
    """``outer o inner``; power laws multiply exponents, otherwise an expression."""
    if outer.kind == IDENTITY:
        return inner
    if inner.kind == IDENTITY:
        return outer
    if outer.kind in (POWER, ONE) and inner.kind in (POWER, ONE):
        r1 = 0.0 if outer.kind == ONE else outer.r
        r2 = 0.0 if inner.kind == ONE else inner.r
        return power(r1 * r2, inner.domain)
    # range check on a probe grid of the inner domain restricted to (0, 1]
    probe = np.linspace(1e-6, 1.0, 257)
    vals = eval_h(inner, probe)
    lo, hi = outer.domain
    if np.any(vals >= hi) or np.any((vals <= lo) & ~((vals == 0) & outer.includes_zero)):
        raise DomainError(f"range of {inner.spec} on (0,1] leaves the domain of {outer.spec}")
    node = ex.substitute(outer.to_ast(), "t", inner.to_ast())
    return HFunction(EXPRESSION, ast=node, domain=inner.domain)


def scale_h(c: float, h: HFunction) -> HFunction:
    """The weight ``c * h``."""
    if c <= 0:
        raise DomainError("scale factor must be positive")
    if c == 1.0:
        return h
    return HFunction(EXPRESSION, ast=ex.BinOp("*", ex.Num(float(c)), h.to_ast()), domain=h.domain)


def pointwise_max(h1: HFunction, h2: HFunction) -> HFunction:
    return _pointwise("max", h1, h2)


def pointwise_min(h1: HFunction, h2: HFunction) -> HFunction:
    return _pointwise("min", h1, h2)


def _pointwise(func: str, h1: HFunction, h2: HFunction) -> HFunction:
    if h1 == h2:
        return h1
    lo = max(h1.domain[0], h2.domain[0])
    hi = min(h1.domain[1], h2.domain[1])
    return HFunction(EXPRESSION, ast=ex.Call(func, (h1.to_ast(), h2.to_ast())), domain=(lo, hi))


# -- predicates ---------------------------------------------------------------

def _unit_axis(plan: SamplePlan) -> Axis:
    lo, hi = plan.shrink(0.0, 1.0)
    return Axis(lo, hi, log=False)


def _multiplicative(h: HFunction, plan: SamplePlan, sign: int) -> PredicateVerdict:
    lo, hi = plan.shrink(*h.domain)
    lo = max(lo, plan.epsilon_margin)
    x, y = box_samples(plan, [Axis(lo, hi, True), Axis(lo, hi, True)], salt=101)
    xy = x * y
    keep = (xy > h.domain[0]) & (xy < h.domain[1])
    x, y, xy = x[keep], y[keep], xy[keep]
    hxy, hx_hy = eval_h(h, xy), eval_h(h, x) * eval_h(h, y)
    u, v = (hxy, hx_hy) if sign > 0 else (hx_hy, hxy)
    return predicate(u, v, {"x": x, "y": y}, plan.tol)


def check_supermultiplicative(h: HFunction, plan: SamplePlan = SamplePlan()) -> PredicateVerdict:
    """``h(xy) >= h(x) h(y)`` on sampled pairs with ``x, y, xy`` in J."""
    return _multiplicative(h, plan, +1)


def check_submultiplicative(h: HFunction, plan: SamplePlan = SamplePlan()) -> PredicateVerdict:
    return _multiplicative(h, plan, -1)


@lru_cache(maxsize=256)
def multiplicativity(h: HFunction, kind: str, plan: SamplePlan = SamplePlan()) -> PredicateVerdict:
    """Cached super/sub check, used as a hypothesis flag by other modules."""
    return _multiplicative(h, plan, +1 if kind == "super" else -1)


def _unit_grid(plan: SamplePlan) -> np.ndarray:
    (t,) = box_samples(plan, [_unit_axis(plan)], salt=103)
    return t


def check_dominates_identity(h: HFunction, direction: str = ABOVE_ID,
                             plan: SamplePlan = SamplePlan()) -> PredicateVerdict:
    t = _unit_grid(plan)
    ht = eval_h(h, t)
    u, v = (ht, t) if direction == ABOVE_ID else (t, ht)
    return predicate(u, v, {"t": t}, plan.tol)


def check_symmetric_sum_bound(h: HFunction, c: float, direction: str = AT_MOST,
                              plan: SamplePlan = SamplePlan()) -> PredicateVerdict:
    """``h(t) + h(1-t) <= c`` (``at_most``) or ``>= c`` (``at_least``) on (0, 1)."""
    t = _unit_grid(plan)
    s = eval_h(h, t) + eval_h(h, 1.0 - t)
    c_arr = np.full_like(s, float(c))
    u, v = (c_arr, s) if direction == AT_MOST else (s, c_arr)
    return predicate(u, v, {"t": t}, plan.tol)


def check_control_function(h: HFunction, plan: SamplePlan = SamplePlan(),
                           vanish_threshold: float = 1e-3, delta_min: float = 1e-12) -> PredicateVerdict:
    """Nondecreasing on a sequence ``delta -> 0+`` and sampled infimum near zero."""
    _, hi = plan.shrink(*h.domain)
    lo = max(h.domain[0], delta_min)
    n = max(plan.grid_per_axis, 2) * 4
    delta = np.geomspace(lo, hi, n)
    hv = eval_h(h, delta)
    tol = plan.tol
    # consecutive pairs, increasing delta: need h(delta_{i+1}) >= h(delta_i)
    up = predicate(hv[1:], hv[:-1], {"delta": delta[1:]}, tol)
    inf = float(hv.min())
    details = {"nondecreasing": up.status, "sampled_infimum": inf, "vanish_threshold": vanish_threshold}
    if not up.holds:
        return PredicateVerdict(FAILS, n, up.worst_margin, up.witness, "not nondecreasing", details)
    if inf > vanish_threshold:
        return PredicateVerdict(FAILS, n, vanish_threshold - inf, {"delta": float(delta[0])},
                                "infimum does not vanish", details)
    return PredicateVerdict(HOLDS, n, min(up.worst_margin, vanish_threshold - inf), details=details)


def unit_range(h: HFunction, plan: SamplePlan) -> tuple[float, float]:
    """Sampling range for t such that both t and 1 - t are admissible arguments of h."""
    if h.includes_zero and h.domain[1] > 1.0:
        return 0.0, 1.0
    return plan.shrink(0.0, 1.0)


def check_nondecreasing_on_unit(h: HFunction, plan: SamplePlan = SamplePlan()) -> PredicateVerdict:
    t = np.linspace(*unit_range(h, plan), max(plan.grid_per_axis, 2) * 4)
    hv = eval_h(h, t)
    return predicate(hv[1:], hv[:-1], {"t": t[1:]}, plan.tol)

