"""The nine h-MN-convexity classes: residuals, verdicts, classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, PositivityFailure
from .funcs import ScalarFn, eval_fn
from .hfun import HFunction, eval_h, unit_range
from .means import A, FIRST_WEIGHTED, G, H, SECOND_WEIGHTED, MeanKind, classical_mean, generalized_mean
from .sampling import Axis, SamplePlan, box_samples
from .verdict import Verdict, decide, indeterminate

INCREASING = "increasing"
DECREASING = "decreasing"
MIXED = "mixed"


@dataclass(frozen=True)
class ClassLabel:
    m: MeanKind
    n: MeanKind

    def __post_init__(self):
        object.__setattr__(self, "m", MeanKind.parse(self.m))
        object.__setattr__(self, "n", MeanKind.parse(self.n))

    @classmethod
    def parse(cls, text) -> "ClassLabel":
        if isinstance(text, ClassLabel):
            return text
        s = str(text).strip().upper()
        if len(s) != 2:
            raise ValueError(f"class label must be two letters from A, G, H; got {text!r}")
        return cls(MeanKind.parse(s[0]), MeanKind.parse(s[1]))

    def __str__(self) -> str:
        return f"{self.m.value}{self.n.value}"


ALL_LABELS = tuple(ClassLabel(m, n) for m in (A, G, H) for n in (A, G, H))


def _m_side(m: MeanKind, t, x, y):
    # A and G rows put t on x; the H row is printed as xy/(tx + (1-t)y)
    if m is H:
        return classical_mean(H, 1.0 - np.asarray(t, float), x, y)
    return classical_mean(m, t, x, y)


def class_sides(label, f: ScalarFn, h: HFunction, x, y, t):
    """``(lhs, rhs)`` of the class inequality ``f(M_t(x, y)) <= N_h(f(x), f(y))``.

    A and G rows weight the values as ``h(t) f(x), h(1-t) f(y)`` (harmonic value side
    ``f(x)f(y)/(h(1-t)f(x) + h(t)f(y))``); the H row swaps ``h(t)`` and ``h(1-t)``.
    """
    label = ClassLabel.parse(label)
    x, y, t = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))
    if np.any((t < 0) | (t > 1)):
        raise DomainError("t must lie in [0, 1]")
    fx, fy = np.asarray(eval_fn(f, x)), np.asarray(eval_fn(f, y))
    if label.n is not A and (np.any(fx <= 0) or np.any(fy <= 0)):
        raise PositivityFailure(f"f={f.spec} is not positive at some sampled point")
    lhs = np.asarray(eval_fn(f, _m_side(label.m, t, x, y)))
    orient = SECOND_WEIGHTED if label.m is H else FIRST_WEIGHTED
    rhs = np.asarray(generalized_mean(label.n, h, t, fx, fy, orient)) if label.n is not A else \
        _arith_side(h, t, fx, fy, orient)
    return _out(lhs), _out(rhs)


def _arith_side(h, t, fx, fy, orient):
    # the arithmetic value side must not require positive f
    p, q = np.asarray(eval_h(h, t)), np.asarray(eval_h(h, 1.0 - t))
    if orient == SECOND_WEIGHTED:
        p, q = q, p
    return p * fx + q * fy


def _out(a):
    a = np.asarray(a, float)
    return float(a) if a.ndim == 0 else a


def residual(label, f: ScalarFn, h: HFunction, x, y, t):
    """RHS minus LHS of the printed class inequality; >= 0 where it holds."""
    lhs, rhs = class_sides(label, f, h, x, y, t)
    return _out(np.asarray(rhs) - np.asarray(lhs))


def x_axis(f: ScalarFn, plan: SamplePlan) -> Axis:
    lo, hi = plan.shrink(*f.domain)
    return Axis(lo, hi, log=lo > 0)


def class_samples(f: ScalarFn, h: HFunction, plan: SamplePlan):
    """The (x, y, t) triples examined by :func:`check_class`."""
    ax = x_axis(f, plan)
    return box_samples(plan, [ax, ax, Axis(*unit_range(h, plan))], salt=307)


def check_class(label, f: ScalarFn, h: HFunction, plan: SamplePlan = SamplePlan(),
                samples: Optional[tuple] = None) -> Verdict:
    label = ClassLabel.parse(label)
    x, y, t = samples if samples is not None else class_samples(f, h, plan)
    try:
        lhs, rhs = class_sides(label, f, h, x, y, t)
    except PositivityFailure:
        return indeterminate(str(label), "f not positive on domain")
    return decide(str(label), lhs, rhs, {"x": x, "y": y, "t": t}, plan.tol)


def monotonicity(f: ScalarFn, plan: SamplePlan = SamplePlan(), points: int = 256) -> str:
    ax = x_axis(f, plan)
    x = ax.grid(points)
    fx = np.asarray(eval_fn(f, x))
    d = np.diff(fx)
    slack = plan.tol.slack(fx[1:], fx[:-1])
    up, down = bool(np.any(d > slack)), bool(np.any(d < -slack))
    if up and down:
        return MIXED
    return DECREASING if down else INCREASING


def lattice_edges(mono: str) -> list[tuple[str, str]]:
    """Direct implications 'convex at src => convex at dst'.

    Value side: H_h <= G_h <= A_h gives (m,H) -> (m,G) -> (m,A).
    Argument side (f increasing): H_t <= G_t <= A_t gives (A,n) -> (G,n) -> (H,n);
    reversed for decreasing f.
    """
    edges = []
    for m in (A, G, H):
        edges += [(f"{m}H", f"{m}G"), (f"{m}G", f"{m}A")]
    if mono == INCREASING:
        chain = (A, G, H)
    elif mono == DECREASING:
        chain = (H, G, A)
    else:
        return edges
    for n in (A, G, H):
        edges += [(f"{chain[0]}{n}", f"{chain[1]}{n}"), (f"{chain[1]}{n}", f"{chain[2]}{n}")]
    return edges


def _reachable(edges, src):
    seen, stack = set(), [src]
    while stack:
        cur = stack.pop()
        for a, b in edges:
            if a == cur and b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


@dataclass(frozen=True)
class ClassMatrix:
    verdicts: dict
    monotonicity: str
    lattice_violations: tuple = field(default_factory=tuple)

    @property
    def lattice_consistent(self) -> bool:
        return not self.lattice_violations

    def __getitem__(self, label) -> Verdict:
        return self.verdicts[str(ClassLabel.parse(label))]

    def to_dict(self) -> dict:
        return {
            "monotonicity": self.monotonicity,
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "lattice_consistent": self.lattice_consistent,
            "lattice_violations": [{"from": a, "to": b, "kind": "LatticeInconsistency"}
                                   for a, b in self.lattice_violations],
        }


def classify_all(f: ScalarFn, h: HFunction, plan: SamplePlan = SamplePlan()) -> ClassMatrix:
    samples = class_samples(f, h, plan)
    verdicts = {str(lab): check_class(lab, f, h, plan, samples) for lab in ALL_LABELS}
    mono = monotonicity(f, plan)
    edges = lattice_edges(mono)
    bad = []
    for lab, v in verdicts.items():
        if v.convex_ok:
            for dst in sorted(_reachable(edges, lab)):
                if not verdicts[dst].convex_ok:
                    bad.append((lab, dst))
    return ClassMatrix(verdicts, mono, tuple(bad))


def check_midconvex(f: ScalarFn, h: HFunction, plan: SamplePlan = SamplePlan()) -> Verdict:
    """``f((x+y)/2) <= h(1/2) [f(x) + f(y)]`` over sampled pairs."""
    ax = x_axis(f, plan)
    x, y = box_samples(plan, [ax, ax], salt=311)
    lhs = np.asarray(eval_fn(f, 0.5 * (x + y)))
    rhs = eval_h(h, 0.5) * (np.asarray(eval_fn(f, x)) + np.asarray(eval_fn(f, y)))
    return decide("mid", lhs, rhs, {"x": x, "y": y}, plan.tol)
