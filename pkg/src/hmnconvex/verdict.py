"""Verdict records and the sampled decision rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import numpy as np

from .sampling import Tolerance

SUPPORTED_CONVEX = "supported_convex"
SUPPORTED_CONCAVE = "supported_concave"
SUPPORTED_BOTH = "supported_both"
FALSIFIED = "falsified"
INDETERMINATE = "indeterminate"

HOLDS = "holds"
FAILS = "fails"


@dataclass(frozen=True)
class Witness:
    point: Mapping[str, float]
    residual: float

    def to_dict(self) -> dict:
        return {"point": {k: float(v) for k, v in self.point.items()}, "residual": float(self.residual)}


@dataclass(frozen=True)
class Verdict:
    """Outcome of a sampled two-sided inequality check.

    ``status`` follows the convex direction first: ``supported_concave`` means the
    convex direction was falsified (``witness``) while the reversed inequality held.
    ``falsified`` means both directions failed.
    """

    label: Optional[str]
    status: str
    min_residual: float = float("nan")
    max_residual: float = float("nan")
    samples: int = 0
    witness: Optional[Witness] = None
    concave_witness: Optional[Witness] = None
    reason: Optional[str] = None
    details: Mapping[str, Any] = field(default_factory=dict)

    @property
    def convex_ok(self) -> bool:
        return self.status in (SUPPORTED_CONVEX, SUPPORTED_BOTH)

    @property
    def concave_ok(self) -> bool:
        return self.status in (SUPPORTED_CONCAVE, SUPPORTED_BOTH)

    @property
    def convex_falsified(self) -> bool:
        return self.status in (FALSIFIED, SUPPORTED_CONCAVE)

    @property
    def concave_falsified(self) -> bool:
        return self.status in (FALSIFIED, SUPPORTED_CONVEX)

    @property
    def indeterminate(self) -> bool:
        return self.status == INDETERMINATE

    def to_dict(self) -> dict:
        d: dict = {"label": self.label, "status": self.status, "samples": int(self.samples),
                   "min_residual": _num(self.min_residual), "max_residual": _num(self.max_residual)}
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        if self.concave_witness is not None:
            d["concave_witness"] = self.concave_witness.to_dict()
        if self.reason is not None:
            d["reason"] = self.reason
        if self.details:
            d["details"] = _jsonable(self.details)
        return d


def indeterminate(label: Optional[str], reason: str, **details) -> Verdict:
    return Verdict(label, INDETERMINATE, reason=reason, details=details)


@dataclass(frozen=True)
class PredicateVerdict:
    status: str  # holds | fails | indeterminate
    samples_checked: int
    worst_margin: float
    witness: Optional[Mapping[str, float]] = None
    reason: Optional[str] = None
    details: Mapping[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_dict(self) -> dict:
        d: dict = {"status": self.status, "samples_checked": int(self.samples_checked),
                   "worst_margin": _num(self.worst_margin)}
        if self.witness is not None:
            d["witness"] = {k: float(v) for k, v in self.witness.items()}
        if self.reason is not None:
            d["reason"] = self.reason
        if self.details:
            d["details"] = _jsonable(self.details)
        return d


def _num(v):
    v = float(v)
    return v if np.isfinite(v) else None


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def _pick(score: np.ndarray, coords: Mapping[str, np.ndarray]) -> int:
    """Index of the smallest score; ties broken by the coordinates in order."""
    keys = [np.asarray(c) for c in reversed(list(coords.values()))] + [score]
    return int(np.lexsort(keys)[0])


def _witness(idx: int, coords: Mapping[str, np.ndarray], residual: np.ndarray) -> Witness:
    return Witness({k: float(np.asarray(v)[idx]) for k, v in coords.items()}, float(residual[idx]))


def decide(label: Optional[str], lhs, rhs, coords: Mapping[str, np.ndarray],
           tol: Tolerance, details: Optional[Mapping[str, Any]] = None) -> Verdict:
    """Two-sided verdict for ``lhs <= rhs`` (convex) and ``lhs >= rhs`` (concave).

    The residual is ``rhs - lhs``. Witnesses minimize the tolerance-adjusted excess so that
    a reported witness always violates the inequality beyond tolerance.
    """
    lhs = np.asarray(lhs, float).ravel()
    rhs = np.asarray(rhs, float).ravel()
    coords = {k: np.broadcast_to(np.asarray(v, float), lhs.shape).ravel() for k, v in coords.items()}
    res = rhs - lhs
    slack = tol.slack(lhs, rhs)
    convex_ok = bool(np.all(res >= -slack))
    concave_ok = bool(np.all(res <= slack))
    witness = None if convex_ok else _witness(_pick(res + slack, coords), coords, res)
    cwitness = None if concave_ok else _witness(_pick(-res + slack, coords), coords, res)
    if convex_ok and concave_ok:
        status = SUPPORTED_BOTH
    elif convex_ok:
        status = SUPPORTED_CONVEX
    elif concave_ok:
        status = SUPPORTED_CONCAVE
    else:
        status = FALSIFIED
    return Verdict(label, status, float(res.min()), float(res.max()), int(res.size),
                   witness, cwitness, details=dict(details or {}))


def predicate(margin_u, margin_v, coords: Mapping[str, np.ndarray], tol: Tolerance,
              details: Optional[Mapping[str, Any]] = None) -> PredicateVerdict:
    """Verdict for ``u >= v`` over all samples."""
    u = np.asarray(margin_u, float).ravel()
    v = np.asarray(margin_v, float).ravel()
    coords = {k: np.broadcast_to(np.asarray(c, float), u.shape).ravel() for k, c in coords.items()}
    margin = u - v
    slack = tol.slack(u, v)
    if u.size == 0:
        return PredicateVerdict("indeterminate", 0, float("nan"), reason="no admissible samples")
    if np.all(margin >= -slack):
        return PredicateVerdict(HOLDS, int(u.size), float(margin.min()), details=dict(details or {}))
    i = _pick(margin + slack, coords)
    return PredicateVerdict(FAILS, int(u.size), float(margin.min()),
                            {k: float(c[i]) for k, c in coords.items()}, details=dict(details or {}))
