"""Closure, product and composition rules, and the extended functional inequalities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classes import INCREASING, ClassLabel, check_class, monotonicity, x_axis
from .errors import RangeMismatch
from .funcs import ScalarFn, eval_fn, fn_compose, fn_max, fn_product, fn_scale, fn_sum
from .hfun import (AT_LEAST, AT_MOST, HFunction, check_submultiplicative, check_supermultiplicative,
                   check_symmetric_sum_bound, compose_h, eval_h, pointwise_max, pointwise_min, scale_h)
from .means import A, G, H, MeanKind
from .sampling import SamplePlan, box_samples, simplex_samples
from .verdict import Verdict, decide, indeterminate

SIMILAR = "similarly_ordered"
OPPOSITE = "oppositely_ordered"
NEITHER = "neither"

SUM, SCALE, MAX = "sum", "scale", "max"
CONVEX, CONCAVE = "convex", "concave"


@dataclass(frozen=True)
class OrderingRelation:
    kind: str
    witness: Optional[tuple] = None
    opposite_witness: Optional[tuple] = None
    degenerate: bool = False  # both orderings hold (e.g. a constant factor)

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "degenerate": self.degenerate}
        if self.witness is not None:
            d["witness"] = list(self.witness)
        if self.opposite_witness is not None:
            d["opposite_witness"] = list(self.opposite_witness)
        return d


def check_ordering(f: ScalarFn, g: ScalarFn, plan: SamplePlan = SamplePlan()) -> OrderingRelation:
    """Sign of ``(f(x) - f(y)) (g(x) - g(y))`` over sampled pairs."""
    dom = (max(f.domain[0], g.domain[0]), min(f.domain[1], g.domain[1]))
    ax = x_axis(f.restrict(*dom), plan)
    x, y = box_samples(plan, [ax, ax], salt=401)
    fx, fy = np.asarray(eval_fn(f, x)), np.asarray(eval_fn(f, y))
    gx, gy = np.asarray(eval_fn(g, x)), np.asarray(eval_fn(g, y))
    p = (fx - fy) * (gx - gy)
    slack = plan.tol.slack(fx * gx + fy * gy, fx * gy + fy * gx)
    sim_bad = p < -slack
    opp_bad = p > slack
    if not sim_bad.any():
        return OrderingRelation(SIMILAR, degenerate=not opp_bad.any())
    if not opp_bad.any():
        return OrderingRelation(OPPOSITE)
    i, j = int(np.argmin(p)), int(np.argmax(p))
    return OrderingRelation(NEITHER, (float(x[i]), float(y[i])), (float(x[j]), float(y[j])))


def closure_check(op: str, f: ScalarFn, g: Optional[ScalarFn], label, h: HFunction,
                  plan: SamplePlan = SamplePlan(), lam: float = 1.0) -> Verdict:
    """Verdict for ``f + g``, ``lam * f`` or ``max(f, g)`` after confirming f and g are convex."""
    label = ClassLabel.parse(label)
    operands = [("f", f)] + ([("g", g)] if op != SCALE else [])
    for name, fn in operands:
        v = check_class(label, fn, h, plan)
        if not v.convex_ok:
            return indeterminate(str(label), f"hypothesis failed: {name} not {label}-convex",
                                 hypothesis=v.to_dict())
    if op == SUM:
        combined = fn_sum(f, g)
    elif op == SCALE:
        if not lam > 0:
            return indeterminate(str(label), "hypothesis failed: lambda must be positive")
        combined = fn_scale(lam, f)
    elif op == MAX:
        combined = fn_max(f, g)
    else:
        raise ValueError(f"unknown closure op {op!r}")
    return check_class(label, combined, h, plan)


# bundle per value side: (ordering, max/min, sum-bound direction); reversed for concave corollaries
_PRODUCT_BUNDLE = {
    (A, CONVEX): (SIMILAR, "max", AT_MOST), (A, CONCAVE): (OPPOSITE, "min", AT_LEAST),
    (G, CONVEX): (None, "max", AT_MOST), (G, CONCAVE): (None, "min", AT_LEAST),
    (H, CONVEX): (OPPOSITE, "min", AT_LEAST), (H, CONCAVE): (SIMILAR, "max", AT_MOST),
}


def product_rule(f: ScalarFn, g: ScalarFn, n_side, m_side, h1: HFunction, h2: HFunction, c: float,
                 plan: SamplePlan = SamplePlan(), direction: str = CONVEX) -> Verdict:
    """Check the hypotheses of the product rule, then the class of ``f g`` under weight ``c h``."""
    n_side, m_side = MeanKind.parse(n_side), MeanKind.parse(m_side)
    label = ClassLabel(m_side, n_side)
    ordering, pick, bound = _PRODUCT_BUNDLE[(n_side, direction)]
    h = pointwise_max(h1, h2) if pick == "max" else pointwise_min(h1, h2)
    hyp: dict = {"weight": h.spec}
    if ordering is not None:
        rel = check_ordering(f, g, plan)
        hyp["ordering"] = rel.to_dict()
        if rel.kind != ordering and not rel.degenerate:
            return indeterminate(str(label), f"hypothesis failed: f and g not {ordering.replace('_', ' ')}",
                                 hypotheses=hyp)
    sb = check_symmetric_sum_bound(h, c, bound, plan)
    hyp["symmetric_sum"] = sb.to_dict()
    if not sb.holds:
        rel = "<=" if bound == AT_MOST else ">="
        return indeterminate(str(label), f"hypothesis failed: h(t) + h(1-t) {rel} {c}", hypotheses=hyp)
    for name, fn, hi in (("f", f, h1), ("g", g, h2)):
        v = check_class(label, fn, hi, plan)
        ok = v.convex_ok if direction == CONVEX else v.concave_ok
        hyp[f"{name}_class"] = v.status
        if not ok:
            return indeterminate(str(label), f"hypothesis failed: {name} not {label}-{direction}",
                                 hypotheses=hyp)
    weight = scale_h(c, h)
    v = check_class(label, fn_product(f, g), weight, plan)
    return Verdict(v.label, v.status, v.min_residual, v.max_residual, v.samples, v.witness,
                   v.concave_witness, v.reason, {"weight": weight.spec, "hypotheses": hyp})


# -- composition -----------------------------------------------------------------------------

# The published table, row by row: (f, g, f o g)
COMPOSITION_TABLE = (
    ("AA", "AA", "AA"), ("GA", "AG", "AA"), ("HA", "AH", "AA"),
    ("AG", "AA", "AG"), ("GG", "AG", "AG"), ("HG", "AH", "AG"),
    ("AH", "AA", "AH"), ("GH", "AG", "AH"), ("HH", "AH", "AH"),
    ("AA", "GA", "GA"), ("GA", "GG", "GA"), ("HA", "GH", "GA"),
    ("GG", "GG", "GG"), ("AG", "GA", "GG"), ("HG", "GH", "GG"),
    ("AH", "GA", "GH"), ("GH", "GG", "GH"), ("HH", "GH", "GH"),
    ("AA", "HA", "HA"), ("GA", "HG", "HA"), ("HA", "HH", "HA"),
    ("AG", "HA", "HG"), ("GG", "HG", "HG"), ("HG", "HH", "HG"),
    ("HH", "HH", "HH"), ("AH", "HA", "HH"), ("GH", "HG", "HH"),
)

# special theorems: (f, g) -> boundary condition on f
_SPECIAL = {("GA", "AG"): ("f(1)=0", 1.0, 0.0), ("AG", "GA"): ("f(0)=1", 0.0, 1.0),
            ("GG", "GG"): ("f(1)=1", 1.0, 1.0)}
BOUNDARY_TOL = 1e-4


def compose_rule(f_label, g_label) -> Optional[ClassLabel]:
    """``f`` of type (K, N) after ``g`` of type (M, K) gives (M, N); None when the K's differ."""
    f_label, g_label = ClassLabel.parse(f_label), ClassLabel.parse(g_label)
    if g_label.n is not f_label.m:
        return None
    return ClassLabel(g_label.m, f_label.n)


def composition_table() -> list[dict]:
    return [{"f": f, "g": g, "composition": r} for f, g, r in COMPOSITION_TABLE]


def _boundary_value(f: ScalarFn, at: float, plan: SamplePlan) -> float:
    # boundary points on the edge of an open domain are read at the shrunk endpoint
    a, b = plan.shrink(*f.domain)
    return float(eval_fn(f, min(max(at, a), b)))


def verify_composition(f: ScalarFn, g: ScalarFn, f_label, g_label, h1: HFunction, h2: HFunction,
                       plan: SamplePlan = SamplePlan()) -> Verdict:
    f_label, g_label = ClassLabel.parse(f_label), ClassLabel.parse(g_label)
    result = compose_rule(f_label, g_label)
    if result is None:
        return indeterminate(None, "no rule", f_label=str(f_label), g_label=str(g_label))
    # g's range must sit inside f's domain
    gx = np.asarray(eval_fn(g, x_axis(g, plan).grid(1024)))
    lo, hi = f.domain
    if np.any(gx < lo) or np.any(gx > hi):
        raise RangeMismatch(f"range [{gx.min()}, {gx.max()}] of g leaves the domain ({lo}, {hi}) of f")
    f_on_range = f.restrict(max(lo, float(gx.min())), min(hi, float(gx.max())))
    hyp: dict = {}
    mono = monotonicity(f_on_range, plan)
    hyp["f_monotonicity"] = mono
    if mono != INCREASING:
        return indeterminate(str(result), "hypothesis failed: f not increasing", hypotheses=hyp)
    vf = check_class(f_label, f_on_range, h1, plan)
    vg = check_class(g_label, g, h2, plan)
    hyp["f_class"], hyp["g_class"] = vf.status, vg.status
    if not vf.convex_ok:
        return indeterminate(str(result), f"hypothesis failed: f not {f_label}-convex", hypotheses=hyp)
    if not vg.convex_ok:
        return indeterminate(str(result), f"hypothesis failed: g not {g_label}-convex", hypotheses=hyp)
    # reported, not enforced
    hyp["h2_sum_at_most_1"] = check_symmetric_sum_bound(h2, 1.0, AT_MOST, plan).status
    t = np.linspace(*plan.shrink(0.0, 1.0), 257)
    h2t = np.asarray(eval_h(h2, t))
    hyp["h2_maps_unit_into_unit"] = bool(np.all((h2t > 0) & (h2t < 1)))
    special = _SPECIAL.get((str(f_label), str(g_label)))
    if special is not None:
        name, at, want = special
        val = _boundary_value(f, at, plan)
        hyp["boundary"] = {"condition": name, "value": val, "ok": abs(val - want) <= BOUNDARY_TOL}
        hyp["h1_supermultiplicative"] = check_supermultiplicative(h1, plan).status
    weight = compose_h(h1, h2)
    v = check_class(result, fn_compose(f, g), weight, plan)
    return Verdict(v.label, v.status, v.min_residual, v.max_residual, v.samples, v.witness,
                   v.concave_witness, v.reason, {"weight": weight.spec, "hypotheses": hyp})


# -- functional inequalities ------------------------------------------------------------------

FUNCTIONAL_FAMILIES = {
    # family: (argument mean, value mean, boundary point, boundary value)
    "AG": (A, G, 0.0, 1.0),
    "GA": (G, A, 1.0, 0.0),
    "GG": (G, G, 1.0, 1.0),
}


def functional_sides(family: str, f: ScalarFn, h: HFunction, x, y, alpha, beta):
    """``(lhs, rhs)`` of the extended inequality with weights (alpha, beta), alpha + beta <= 1."""
    m, n, _, _ = FUNCTIONAL_FAMILIES[family]
    x, y, alpha, beta = (np.asarray(v, float) for v in (x, y, alpha, beta))
    arg = alpha * x + beta * y if m is A else np.exp(alpha * np.log(x) + beta * np.log(y))
    lhs = np.asarray(eval_fn(f, arg))
    fx, fy = np.asarray(eval_fn(f, x)), np.asarray(eval_fn(f, y))
    ha, hb = np.asarray(eval_h(h, alpha)), np.asarray(eval_h(h, beta))
    if n is A:
        rhs = ha * fx + hb * fy
    else:
        rhs = np.exp(ha * np.log(fx) + hb * np.log(fy))
    return lhs, rhs


def functional_inequality_check(family: str, f: ScalarFn, h: HFunction, direction: str = CONVEX,
                                plan: SamplePlan = SamplePlan(), simplex_count: int = 512,
                                pair_grid: int = 16) -> Verdict:
    """Scan the extended inequality over pairs x, y and the simplex alpha + beta <= 1.

    Hypotheses (class membership, boundary value, super/sub-multiplicativity) are measured and
    reported in ``details``; the inequality is evaluated regardless.
    """
    family = family.upper()
    m, n, at, want = FUNCTIONAL_FAMILIES[family]
    ax = x_axis(f, plan)
    xs = ax.grid(pair_grid)
    alpha, beta = simplex_samples(plan, simplex_count)
    X, Y, Al = np.meshgrid(xs, xs, np.arange(alpha.size), indexing="ij")
    x, y = X.ravel(), Y.ravel()
    a, b = alpha[Al.ravel()], beta[Al.ravel()]
    if m is A:
        keep = (a * x + b * y >= f.domain[0]) & (a * x + b * y <= f.domain[1])
        x, y, a, b = x[keep], y[keep], a[keep], b[keep]
    lhs, rhs = functional_sides(family, f, h, x, y, a, b)
    boundary = _boundary_value(f, at, plan)
    label = ClassLabel(m, n)
    cls = check_class(label, f, h, plan)
    mult = (check_supermultiplicative if direction == CONVEX else check_submultiplicative)(h, plan)
    t = np.linspace(*plan.shrink(0.0, 0.5), 129)
    ht = np.asarray(eval_h(h, t))
    details = {
        "family": family,
        "direction": direction,
        "boundary": {"point": at, "expected": want, "value": boundary,
                     "ok": abs(boundary - want) <= BOUNDARY_TOL},
        "class": cls.status,
        "multiplicativity": mult.status,
        # the converse statement needs h(a) < 1/2 (convex) or > 1/2 (concave) for some a in (0, 1/2)
        "converse_applicable": bool(np.any(ht < 0.5) if direction == CONVEX else np.any(ht > 0.5)),
    }
    # one two-sided verdict: the concave statement is read off ``concave_ok``
    return decide(family, lhs, rhs, {"x": x, "y": y, "alpha": a, "beta": b}, plan.tol, details)
