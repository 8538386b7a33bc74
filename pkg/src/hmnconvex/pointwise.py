"""Three-point characterizations of the nine classes and Schur-type specializations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classes import ClassLabel, x_axis
from .errors import DomainError, PositivityFailure
from .funcs import ScalarFn, builtin, eval_fn
from .hfun import HFunction, eval_h, power
from .means import A, G
from .sampling import SamplePlan, sorted_triples
from .verdict import Verdict, decide, indeterminate


@dataclass(frozen=True)
class TriplePoint:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not (self.x1 < self.x2 < self.x3):
            raise DomainError("triple must satisfy x1 < x2 < x3")


def derived_arguments(row, x1, x2, x3):
    """``(p, q, s)``: the h-arguments attached to f(x1), f(x3) and f(x2).

    A row: x3-x2, x2-x1, x3-x1. G row: log-ratios. H row: x1(x3-x2), x3(x2-x1), x2(x3-x1).
    """
    x1, x2, x3 = (np.asarray(v, float) for v in (x1, x2, x3))
    if row is A:
        return x3 - x2, x2 - x1, x3 - x1
    if row is G:
        return np.log(x3 / x2), np.log(x2 / x1), np.log(x3 / x1)
    return x1 * (x3 - x2), x3 * (x2 - x1), x2 * (x3 - x1)


def admissible(row, h: HFunction, x1, x2, x3) -> np.ndarray:
    lo, hi = h.domain
    mask = np.ones(np.broadcast(x1, x2, x3).shape, bool)
    for a in derived_arguments(row, x1, x2, x3):
        mask &= (a > lo) & (a < hi)
    return mask


def three_point_sides(label, f: ScalarFn, h: HFunction, x1, x2, x3):
    """``(small, big)`` with the three-point inequality reading ``big >= small``.

    A value side: ``h(p) f1 + h(q) f3 >= h(s) f2``.
    G value side (log space): ``h(p) log f1 + h(q) log f3 >= h(s) log f2``.
    H value side: ``h(s) f1 f3 >= h(q) f1 f2 + h(p) f2 f3``.
    """
    label = ClassLabel.parse(label)
    if not np.all(admissible(label.m, h, x1, x2, x3)):
        raise DomainError(f"derived arguments leave the domain {h.domain} of h")
    p, q, s = derived_arguments(label.m, x1, x2, x3)
    hp, hq, hs = (np.asarray(eval_h(h, a)) for a in (p, q, s))
    f1, f2, f3 = (np.asarray(eval_fn(f, v)) for v in (x1, x2, x3))
    if label.n is not A and (np.any(f1 <= 0) or np.any(f2 <= 0) or np.any(f3 <= 0)):
        raise PositivityFailure(f"f={f.spec} is not positive at some sampled point")
    if label.n is A:
        return hs * f2, hp * f1 + hq * f3
    if label.n is G:
        return hs * np.log(f2), hp * np.log(f1) + hq * np.log(f3)
    return hq * f1 * f2 + hp * f2 * f3, hs * f1 * f3


def three_point_residual(label, f: ScalarFn, h: HFunction, p):
    """Printed LHS minus RHS; nonnegative where the three-point inequality holds."""
    if isinstance(p, TriplePoint):
        p = (p.x1, p.x2, p.x3)
    small, big = three_point_sides(label, f, h, *p)
    out = np.asarray(big) - np.asarray(small)
    return float(out) if out.ndim == 0 else out


def _triples(f: ScalarFn, h: HFunction, row, plan: SamplePlan):
    ax = x_axis(f, plan)
    x1, x2, x3 = sorted_triples(plan, ax.lo, ax.hi, log=ax.log)
    keep = admissible(row, h, x1, x2, x3)
    return x1[keep], x2[keep], x3[keep]


def check_three_point(label, f: ScalarFn, h: HFunction, plan: SamplePlan = SamplePlan(),
                      limit: int | None = None) -> Verdict:
    """Scan admissible sorted triples of f's domain; reversed direction read off ``concave_ok``."""
    label = ClassLabel.parse(label)
    x1, x2, x3 = _triples(f, h, label.m, plan)
    if limit is not None and x1.size > limit:
        idx = np.unique(np.linspace(0, x1.size - 1, limit).astype(int))
        x1, x2, x3 = x1[idx], x2[idx], x3[idx]
    if x1.size == 0:
        return indeterminate(str(label), "no admissible triples for this h domain")
    try:
        small, big = three_point_sides(label, f, h, x1, x2, x3)
    except PositivityFailure:
        return indeterminate(str(label), "f not positive on domain")
    return decide(str(label), small, big, {"x1": x1, "x2": x2, "x3": x3}, plan.tol,
                  {"h_domain": list(h.domain)})


def schur_check(family, r: float, lam: float, plan: SamplePlan = SamplePlan()) -> Verdict:
    """Three-point inequality for ``f(x) = x^lam`` and ``h(t) = t^r`` on triples in (0, 1).

    The derived arguments are restricted to (0, 1) as well.
    """
    label = ClassLabel.parse(family)
    h = power(r, domain=(0.0, 1.0))
    f = builtin(f"pow:{lam}", (0.0, 1.0))
    v = check_three_point(label, f, h, plan)
    details = dict(v.details)
    details.update({"family": str(label), "r": float(r), "lambda": float(lam)})
    return Verdict(v.label, v.status, v.min_residual, v.max_residual, v.samples, v.witness,
                   v.concave_witness, v.reason, details)
