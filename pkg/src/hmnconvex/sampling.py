"""Deterministic sample plans and the tolerance rule used by every check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SEED = 0x6D656176


@dataclass(frozen=True)
class Tolerance:
    """``u >= v`` is accepted when ``u - v >= -max(abs, rel * max(|u|, |v|))``."""

    abs: float = 1e-9
    rel: float = 1e-9

    def slack(self, u, v):
        u = np.asarray(u, float)
        v = np.asarray(v, float)
        return np.maximum(self.abs, self.rel * np.maximum(np.abs(u), np.abs(v)))

    def geq(self, u, v):
        return np.asarray(u, float) - np.asarray(v, float) >= -self.slack(u, v)


@dataclass(frozen=True)
class SamplePlan:
    grid_per_axis: int = 64
    random_count: int = 256
    seed: int = DEFAULT_SEED
    epsilon_margin: float = 1e-6
    max_grid_points: int = 64 ** 3
    upper_cap: float = 1e3
    tol: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self):
        if self.grid_per_axis < 1 or self.random_count < 0:
            raise ValueError("grid_per_axis must be >= 1 and random_count >= 0")
        if not self.epsilon_margin > 0:
            raise ValueError("epsilon_margin must be positive")

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def shrink(self, lo: float, hi: float) -> tuple[float, float]:
        """Closed sampling interval ``[lo+eps, hi-eps]`` inside ``(lo, hi)``."""
        if math.isinf(hi):
            hi = self.upper_cap
            eps = self.epsilon_margin
        else:
            eps = self.epsilon_margin * (hi - lo)
        a, b = lo + eps, hi - eps
        if not a < b:
            raise ValueError(f"interval ({lo}, {hi}) is empty after shrinking")
        return a, b

    def per_axis(self, dims: int) -> int:
        cap = int(math.floor(self.max_grid_points ** (1.0 / dims) + 1e-9))
        return max(1, min(self.grid_per_axis, cap))


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    log: bool = False

    def grid(self, n: int) -> np.ndarray:
        if n == 1:
            return np.array([0.5 * (self.lo + self.hi)])
        if self.log and self.lo > 0:
            g = np.geomspace(self.lo, self.hi, n)
            g[0], g[-1] = self.lo, self.hi
            return g
        return np.linspace(self.lo, self.hi, n)

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random(n)
        if self.log and self.lo > 0:
            return np.exp(np.log(self.lo) + u * (np.log(self.hi) - np.log(self.lo)))
        return self.lo + u * (self.hi - self.lo)


def box_samples(plan: SamplePlan, axes: list[Axis], salt: int = 0) -> tuple[np.ndarray, ...]:
    """Cartesian grid (capped) followed by seeded random points, one array per axis."""
    n = plan.per_axis(len(axes))
    grids = np.meshgrid(*(a.grid(n) for a in axes), indexing="ij")
    rng = plan.rng(salt)
    out = []
    for g, a in zip(grids, axes):
        out.append(np.concatenate([g.ravel(), a.draw(rng, plan.random_count)]))
    return tuple(out)


def simplex_samples(plan: SamplePlan, count: int = 512, salt: int = 7) -> tuple[np.ndarray, np.ndarray]:
    """Uniform (alpha, beta) with alpha, beta > 0 and alpha + beta <= 1 (triangle folding)."""
    rng = plan.rng(salt)
    u = rng.random((count, 2))
    fold = u.sum(axis=1) > 1
    u[fold] = 1.0 - u[fold]
    u = np.clip(u, 1e-12, None)
    return u[:, 0], u[:, 1]


def sorted_triples(plan: SamplePlan, lo: float, hi: float, log: bool = True, salt: int = 11):
    """Strictly increasing triples x1 < x2 < x3 from a grid plus random draws."""
    axis = Axis(lo, hi, log)
    n = plan.per_axis(3)
    g = axis.grid(max(n, 3))
    i, j, k = np.array([(a, b, c) for a in range(len(g)) for b in range(a + 1, len(g))
                        for c in range(b + 1, len(g))]).T
    rng = plan.rng(salt)
    r = np.sort(axis.draw(rng, 3 * plan.random_count).reshape(-1, 3), axis=1)
    keep = (r[:, 0] < r[:, 1]) & (r[:, 1] < r[:, 2])
    r = r[keep]
    return (np.concatenate([g[i], r[:, 0]]), np.concatenate([g[j], r[:, 1]]),
            np.concatenate([g[k], r[:, 2]]))
