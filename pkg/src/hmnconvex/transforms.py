"""Reduction of each class to plain h-convexity of a transformed function."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import expr as ex
from .classes import ClassLabel, check_class, class_samples
from .errors import DomainError
from .funcs import ScalarFn, eval_fn
from .hfun import HFunction, eval_h
from .means import A, G, H
from .sampling import SamplePlan
from .verdict import INDETERMINATE, SUPPORTED_CONCAVE, SUPPORTED_CONVEX, Verdict, decide

SAME = "same"
FLIPPED = "flipped"

WRAP_ID, WRAP_LOG, WRAP_RECIP = "id", "log", "reciprocal"
REPARAM_ID, REPARAM_EXP, REPARAM_INV = "id", "exp_decay", "inverse"

_WRAPPER = {A: WRAP_ID, G: WRAP_LOG, H: WRAP_RECIP}
_REPARAM = {A: REPARAM_ID, G: REPARAM_EXP, H: REPARAM_INV}


@dataclass(frozen=True)
class TransformSpec:
    label: ClassLabel
    tau: Optional[float]
    target_direction: str
    wrapper: str
    reparam: str


def spec_for(label, tau: Optional[float] = None) -> TransformSpec:
    label = ClassLabel.parse(label)
    direction = FLIPPED if label.n is H else SAME
    return TransformSpec(label, tau, direction, _WRAPPER[label.n], _REPARAM[label.m])


def default_tau(f: ScalarFn, plan: SamplePlan = SamplePlan()) -> float:
    hi = f.domain[1]
    return plan.upper_cap if math.isinf(hi) else hi


def _to_u(reparam: str, x, tau: float):
    x = np.asarray(x, float)
    if reparam == REPARAM_EXP:
        return -np.log(x / tau)
    if reparam == REPARAM_INV:
        return 1.0 / x
    return x


def transform(label, f: ScalarFn, tau: Optional[float] = None) -> tuple[ScalarFn, str]:
    """``g = wrapper o f o reparam`` and whether g's h-convexity maps to f's convexity."""
    spec = spec_for(label, tau)
    if spec.reparam == REPARAM_EXP:
        tau = float(tau if tau is not None else default_tau(f))
        inner = ex.BinOp("*", ex.Num(tau), ex.Call("exp", (ex.Neg(ex.Var("x")),)))
        lo, hi = f.domain
        domain = (-math.log(min(hi, tau) / tau), math.inf if lo == 0 else -math.log(lo / tau))
    elif spec.reparam == REPARAM_INV:
        inner = ex.BinOp("/", ex.Num(1.0), ex.Var("x"))
        lo, hi = f.domain
        domain = (0.0 if math.isinf(hi) else 1.0 / hi, math.inf if lo == 0 else 1.0 / lo)
    else:
        inner, domain = ex.Var("x"), f.domain
    body = ex.substitute(f.ast, "x", inner)
    if spec.wrapper == WRAP_LOG:
        body = ex.Call("log", (body,))
    elif spec.wrapper == WRAP_RECIP:
        body = ex.BinOp("/", ex.Num(1.0), body)
    if spec.wrapper == WRAP_ID and spec.reparam == REPARAM_ID:
        return f, spec.target_direction
    return ScalarFn(f"expr:{ex.pretty(body)}", body, domain), spec.target_direction


@dataclass(frozen=True)
class CrossCheck:
    label: str
    direct: Verdict
    transformed: Verdict
    agree: bool

    def to_dict(self) -> dict:
        return {"label": self.label, "direct": self.direct.to_dict(),
                "transformed": self.transformed.to_dict(), "agree": self.agree}


_FLIP = {SUPPORTED_CONVEX: SUPPORTED_CONCAVE, SUPPORTED_CONCAVE: SUPPORTED_CONVEX}


def transformed_verdict(label, f: ScalarFn, h: HFunction, tau: Optional[float], plan: SamplePlan,
                        samples: tuple) -> Verdict:
    """Plain h-convexity of g at the images of the class samples, mapped back to f's direction.

    G-row points map by ``u = -log(x/tau)`` with the same t; H-row points by ``u = 1/x``
    with ``t -> 1 - t`` (the harmonic argument mean is the image of an arithmetic one).
    """
    spec = spec_for(label, tau)
    if spec.reparam == REPARAM_EXP:
        tau = float(tau if tau is not None else default_tau(f, plan))
    x, y, t = samples
    if spec.reparam == REPARAM_EXP and (np.any(x >= tau) or np.any(y >= tau)):
        raise DomainError(f"G rows need the sampled domain inside (0, tau); tau={tau}")
    if spec.wrapper != WRAP_ID and (np.any(np.asarray(eval_fn(f, x)) <= 0)
                                    or np.any(np.asarray(eval_fn(f, y)) <= 0)):
        return Verdict(str(label), INDETERMINATE, reason="f not positive on domain")
    g, _ = transform(label, f, tau)
    u, v = _to_u(spec.reparam, x, tau), _to_u(spec.reparam, y, tau)
    s = 1.0 - t if spec.reparam == REPARAM_INV else t
    w = s * u + (1.0 - s) * v
    gu, gv, gw = (np.asarray(eval_fn(g, np.clip(z, *g.domain))) for z in (u, v, w))
    rhs = np.asarray(eval_h(h, s)) * gu + np.asarray(eval_h(h, 1.0 - s)) * gv
    verdict = decide(str(label), gw, rhs, {"x": x, "y": y, "t": t}, plan.tol,
                     {"transform": {"wrapper": spec.wrapper, "reparam": spec.reparam, "tau": tau,
                                    "direction": spec.target_direction}})
    if spec.target_direction == FLIPPED:
        verdict = _flip(verdict)
    return verdict


def _flip(v: Verdict) -> Verdict:
    if v.status not in _FLIP:
        return v
    return replace(v, status=_FLIP[v.status], witness=v.concave_witness, concave_witness=v.witness,
                   min_residual=-v.max_residual, max_residual=-v.min_residual)


def cross_check(label, f: ScalarFn, h: HFunction, tau: Optional[float] = None,
                plan: SamplePlan = SamplePlan()) -> CrossCheck:
    label = ClassLabel.parse(label)
    samples = class_samples(f, h, plan)
    direct = check_class(label, f, h, plan, samples)
    trans = transformed_verdict(label, f, h, tau, plan, samples)
    agree = (direct.convex_ok, direct.concave_ok) == (trans.convex_ok, trans.concave_ok) and \
        direct.indeterminate == trans.indeterminate
    return CrossCheck(str(label), direct, trans, agree)
