"""Classical, h-generalized and weighted n-point means."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DegenerateWeights, DomainError, HypothesisFailure, LengthMismatch
from .hfun import HFunction, check_nondecreasing_on_unit, eval_h, unit_range
from .sampling import Axis, SamplePlan, box_samples
from .verdict import FAILS, HOLDS, PredicateVerdict, predicate

HARMONIC_FLOOR = 1e-300


class MeanKind(str, Enum):
    ARITHMETIC = "A"
    GEOMETRIC = "G"
    HARMONIC = "H"

    @classmethod
    def parse(cls, code) -> "MeanKind":
        if isinstance(code, MeanKind):
            return code
        try:
            return cls(str(code).upper())
        except ValueError:
            raise ValueError(f"unknown mean kind {code!r}; expected A, G or H") from None

    def __str__(self) -> str:
        return self.value


A, G, H = MeanKind.ARITHMETIC, MeanKind.GEOMETRIC, MeanKind.HARMONIC

FIRST_WEIGHTED = "first"
SECOND_WEIGHTED = "second"


@dataclass(frozen=True)
class WeightVector:
    weights: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if len(w) < 1:
            raise DegenerateWeights("at least one weight is required")
        if any(not v > 0 or not np.isfinite(v) for v in w):
            raise DegenerateWeights("weights must be positive and finite")
        object.__setattr__(self, "weights", w)

    @classmethod
    def equal(cls, n: int) -> "WeightVector":
        return cls((1.0,) * n)

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    @property
    def normalized(self) -> np.ndarray:
        w = np.asarray(self.weights)
        return w / w.sum()

    def __len__(self) -> int:
        return len(self.weights)


def _positive(*vals) -> None:
    for v in vals:
        a = np.asarray(v, float)
        if np.any(~(a > 0)) or np.any(~np.isfinite(a)):
            raise DomainError("mean arguments must be positive and finite")


def classical_mean(kind, t, a, b):
    """Two-point mean with weight ``t`` on the first argument.

    ``A = t a + (1-t) b``, ``G = a^t b^(1-t)``, ``H = 1 / (t/a + (1-t)/b)``.
    """
    kind = MeanKind.parse(kind)
    t = np.asarray(t, float)
    if np.any((t < 0) | (t > 1)):
        raise DomainError("t must lie in [0, 1]")
    _positive(a, b)
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if kind is A:
        out = t * a + (1 - t) * b
    elif kind is G:
        out = np.exp(t * np.log(a) + (1 - t) * np.log(b))
    else:
        out = a * b / (t * b + (1 - t) * a)
    return _scalar(out)


def generalized_mean(kind, h: HFunction, t, a, b, orientation: str = FIRST_WEIGHTED):
    """``A_h = h(t) a + h(1-t) b``, ``G_h = a^h(t) b^h(1-t)``, ``H_h = ab / (h(1-t) a + h(t) b)``.

    ``SECOND_WEIGHTED`` swaps the roles of ``h(t)`` and ``h(1-t)``.
    """
    kind = MeanKind.parse(kind)
    _positive(a, b)
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    t = np.asarray(t, float)
    p, q = eval_h(h, t), eval_h(h, 1.0 - t)
    if orientation == SECOND_WEIGHTED:
        p, q = q, p
    if np.any(np.asarray(p) + np.asarray(q) <= 0):
        raise DegenerateWeights("h(t) and h(1-t) vanish together")
    if kind is A:
        out = p * a + q * b
    elif kind is G:
        out = np.exp(p * np.log(a) + q * np.log(b))
    else:
        den = q * a + p * b
        if np.any(den < HARMONIC_FLOOR):
            raise DegenerateWeights("harmonic denominator underflows")
        out = a * b / den
    return _scalar(out)


def weighted_mean_n(kind, w: WeightVector, points: Sequence[float]) -> float:
    kind = MeanKind.parse(kind)
    x = np.asarray(points, float)
    if x.shape != (len(w),):
        raise LengthMismatch(f"{len(w)} weights but {x.size} points")
    _positive(x)
    p = w.normalized
    if kind is A:
        return float(np.dot(p, x))
    if kind is G:
        return float(np.exp(np.dot(p, np.log(x))))
    return float(1.0 / np.dot(p, 1.0 / x))


def _scalar(out):
    out = np.asarray(out, float)
    return float(out) if out.ndim == 0 else out


def check_mean_axioms(kind, plan: SamplePlan = SamplePlan(),
                      value_range: tuple = (0.1, 10.0), scale_range: tuple = (0.1, 10.0)) -> PredicateVerdict:
    """Symmetry, reflexivity, monotonicity (between min and max) and homogeneity at t = 1/2."""
    kind = MeanKind.parse(kind)
    ax = Axis(*value_range, log=True)
    a, b, lam = box_samples(plan, [ax, ax, Axis(*scale_range, log=True)], salt=211)
    tol = plan.tol
    m = classical_mean(kind, 0.5, a, b)

    def close(u, v):
        return tol.slack(u, v) - np.abs(u - v)

    lo, hi = np.minimum(a, b), np.maximum(a, b)
    margins = {
        "symmetry": close(m, classical_mean(kind, 0.5, b, a)),
        "reflexivity": close(classical_mean(kind, 0.5, a, a), a),
        "monotonicity": np.minimum(m - lo + tol.slack(m, lo), hi - m + tol.slack(m, hi)),
        "homogeneity": close(classical_mean(kind, 0.5, lam * a, lam * b), lam * m),
    }
    per = {k: {"status": HOLDS if v.min() >= 0 else FAILS, "worst_margin": float(v.min())}
           for k, v in margins.items()}
    margin = min(d["worst_margin"] for d in per.values())
    failing = [k for k, d in per.items() if d["status"] == FAILS]
    if failing:
        i = int(np.argmin(margins[failing[0]]))
        witness = {"a": float(a[i]), "b": float(b[i]), "lambda": float(lam[i])}
        return PredicateVerdict(FAILS, int(m.size), margin, witness, f"{failing[0]} fails", per)
    return PredicateVerdict(HOLDS, int(m.size), margin, details=per)


def am_gm_hm_margins(h: HFunction, t, a, b, orientation: str = FIRST_WEIGHTED):
    """Return (A_h, G_h, H_h) at the given samples."""
    return (generalized_mean(A, h, t, a, b, orientation),
            generalized_mean(G, h, t, a, b, orientation),
            generalized_mean(H, h, t, a, b, orientation))


def check_am_gm_hm(h: HFunction, plan: SamplePlan = SamplePlan(),
                   value_range: tuple = (0.1, 10.0)) -> PredicateVerdict:
    """``H_h <= G_h <= A_h`` on sampled (t, a, b), after checking that h is nondecreasing."""
    mono = check_nondecreasing_on_unit(h, plan)
    if not mono.holds:
        raise HypothesisFailure(f"h={h.spec} is not nondecreasing on [0, 1] (witness {mono.witness})")
    t_axis = Axis(*unit_range(h, plan))
    ax = Axis(*value_range, log=True)
    t, a, b = box_samples(plan, [t_axis, ax, ax], salt=223)
    am, gm, hm = am_gm_hm_margins(h, t, a, b)
    coords = {"t": t, "a": a, "b": b}
    hg = predicate(gm, hm, coords, plan.tol)
    ga = predicate(am, gm, coords, plan.tol)
    details = {"hm_le_gm": hg.to_dict(), "gm_le_am": ga.to_dict()}
    margin = min(hg.worst_margin, ga.worst_margin)
    if hg.holds and ga.holds:
        return PredicateVerdict(HOLDS, int(t.size), margin, details=details)
    # report the link with the worse margin
    ga_worse = not ga.holds and (hg.holds or ga.worst_margin <= hg.worst_margin)
    bad, reason = (ga, "G_h > A_h") if ga_worse else (hg, "H_h > G_h")
    return PredicateVerdict(FAILS, int(t.size), margin, bad.witness, reason, details)
