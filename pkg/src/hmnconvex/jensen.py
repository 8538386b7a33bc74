"""Weighted n-point Jensen inequalities for the nine classes and their converses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .classes import ClassLabel
from .errors import DegenerateWeights, DomainError, LengthMismatch, PositivityFailure
from .funcs import ScalarFn, eval_fn
from .hfun import HFunction, eval_h, multiplicativity
from .means import A, G, H, WeightVector, weighted_mean_n
from .sampling import Tolerance

CONVEX, CONCAVE = "convex", "concave"


@dataclass(frozen=True)
class JensenReport:
    label: str
    n: int
    lhs: float
    rhs: float
    gap: float
    holds: bool
    hypothesis: str = ""
    hypothesis_ok: Optional[bool] = None
    kind: str = "jensen"
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"label": self.label, "kind": self.kind, "n": self.n, "lhs": self.lhs, "rhs": self.rhs,
             "gap": self.gap, "holds": self.holds, "hypothesis": self.hypothesis,
             "hypothesis_ok": self.hypothesis_ok}
        d.update(self.extra)
        return d


def required_multiplicativity(label) -> str:
    """Super for A and G value sides, sub for the harmonic one."""
    return "sub" if ClassLabel.parse(label).n is H else "super"


def _prepare(f: ScalarFn, w: WeightVector, points: Sequence[float], need_positive: bool):
    x = np.asarray(points, float)
    if x.ndim != 1 or x.size != len(w):
        raise LengthMismatch(f"{len(w)} weights but {x.size} points")
    if np.any(x <= 0):
        raise DomainError("points must be positive")
    fx = np.asarray(eval_fn(f, x), float)
    if need_positive and np.any(fx <= 0):
        raise PositivityFailure(f"f={f.spec} is not positive at some point")
    return x, fx, w.normalized


def _aggregate(n_kind, hp, fx):
    """Value-side aggregate ``N(h(p_k); f(x_k))``; products of powers in log space."""
    if n_kind is A:
        return float(np.dot(hp, fx))
    if n_kind is G:
        return float(np.exp(np.dot(hp, np.log(fx))))
    den = float(np.dot(hp, 1.0 / fx))
    if den <= 1e-300:
        raise DegenerateWeights("harmonic aggregate denominator underflows")
    return 1.0 / den


def _report(label, n, lhs, rhs, tol, direction, h, kind, extra=None) -> JensenReport:
    need = required_multiplicativity(label)
    if direction == CONCAVE:
        need = "sub" if need == "super" else "super"
        lhs, rhs = rhs, lhs
    gap = rhs - lhs
    slack = float(tol.slack(lhs, rhs))
    hyp = multiplicativity(h, need).holds
    return JensenReport(str(label), n, float(lhs), float(rhs), float(gap), bool(gap >= -slack),
                        f"h {need}multiplicative", hyp, kind, extra or {})


def jensen_eval(label, f: ScalarFn, h: HFunction, w: WeightVector, points: Sequence[float],
                tol: Tolerance = Tolerance(), direction: str = CONVEX) -> JensenReport:
    """``f(M(w; x)) <= N(h(w_k / W); f(x_k))`` with M the weighted argument mean of the row.

    With ``direction='concave'`` the inequality is reversed and ``gap`` measures the reversed form.
    """
    label = ClassLabel.parse(label)
    x, fx, p = _prepare(f, w, points, label.n is not A)
    lhs = float(eval_fn(f, weighted_mean_n(label.m, w, x)))
    rhs = _aggregate(label.n, np.asarray(eval_h(h, p)), fx)
    return _report(label, x.size, lhs, rhs, tol, direction, h, "jensen")


def interpolation_weights(row, x, m: float, M: float):
    """``(a, b)``: weights of f(m) and f(M) that place x between m and M for the row's mean."""
    x = np.asarray(x, float)
    if row is A:
        return (M - x) / (M - m), (x - m) / (M - m)
    if row is G:
        d = np.log(M) - np.log(m)
        return (np.log(M) - np.log(x)) / d, (np.log(x) - np.log(m)) / d
    d = x * (M - m)
    return m * (M - x) / d, M * (x - m) / d


def converse_jensen_eval(label, f: ScalarFn, h: HFunction, w: WeightVector, points: Sequence[float],
                         m: Optional[float] = None, M: Optional[float] = None,
                         tol: Tolerance = Tolerance(), direction: str = CONVEX) -> JensenReport:
    """Upper bound of the value-side aggregate by an endpoint expression in f(m), f(M).

    A value side: ``sum h(p) f(x) <= sum h(p) [h(a) f(m) + h(b) f(M)]``.
    G value side: ``prod f(x)^h(p) <= prod f(m)^e_m f(M)^e_M`` with exponents ``h(a p), h(b p)``
    on the A row and ``h(a) h(p), h(b) h(p)`` on the G and H rows.
    H value side: ``(sum h(p)/f(x))^-1 <= (sum h(p) [h(b) f(m) + h(a) f(M)] / (f(m) f(M)))^-1``.
    """
    label = ClassLabel.parse(label)
    x, fx, p = _prepare(f, w, points, label.n is not A)
    if m is None:
        m = float(x.min()) * (1 - 1e-3)
    if M is None:
        M = float(x.max()) * (1 + 1e-3)
    if not (0 < m < M):
        raise DomainError("need 0 < m < M")
    if np.any(x <= m) or np.any(x >= M):
        raise DomainError("every point must lie strictly inside (m, M)")
    fm, fM = float(eval_fn(f, m)), float(eval_fn(f, M))
    if label.n is not A and (fm <= 0 or fM <= 0):
        raise PositivityFailure("f(m) and f(M) must be positive")
    a, b = interpolation_weights(label.m, x, m, M)
    hp = np.asarray(eval_h(h, p))
    lhs = _aggregate(label.n, hp, fx)
    if label.n is A:
        rhs = float(np.dot(hp, np.asarray(eval_h(h, a)) * fm + np.asarray(eval_h(h, b)) * fM))
    elif label.n is G:
        if label.m is A:
            em, eM = np.asarray(eval_h(h, a * p)), np.asarray(eval_h(h, b * p))
        else:
            em, eM = np.asarray(eval_h(h, a)) * hp, np.asarray(eval_h(h, b)) * hp
        rhs = float(np.exp(np.sum(em) * np.log(fm) + np.sum(eM) * np.log(fM)))
    else:
        per = (np.asarray(eval_h(h, b)) * fm + np.asarray(eval_h(h, a)) * fM) / (fm * fM)
        rhs = 1.0 / float(np.dot(hp, per))
    return _report(label, x.size, lhs, rhs, tol, direction, h, "converse",
                   {"m": float(m), "M": float(M)})


@dataclass(frozen=True)
class JensenChain:
    jensen: JensenReport
    converse: JensenReport

    @property
    def chain_ok(self) -> bool:
        return self.jensen.holds and self.converse.holds

    def to_dict(self) -> dict:
        return {"jensen": self.jensen.to_dict(), "converse": self.converse.to_dict(),
                "chain_ok": self.chain_ok}


def jensen_chain_check(label, f: ScalarFn, h: HFunction, w: WeightVector, points: Sequence[float],
                       m: Optional[float] = None, M: Optional[float] = None,
                       tol: Tolerance = Tolerance()) -> JensenChain:
    return JensenChain(jensen_eval(label, f, h, w, points, tol),
                       converse_jensen_eval(label, f, h, w, points, m, M, tol))
