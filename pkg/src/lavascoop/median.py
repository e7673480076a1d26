"""Geometric median by Weiszfeld fixed-point iteration."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class MedianConfig:
    epsilon: float = 1e-8
    max_iters: int = 10_000
    anchor_jitter: float = 1e-9

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidInputError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise InvalidInputError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass
class MedianResult:
    point: np.ndarray
    converged: bool
    iterations: int
    objectives: list[float] = field(default_factory=list)

    @property
    def objective(self) -> float:
        return self.objectives[-1]


def sum_of_distances(x: np.ndarray, points: np.ndarray) -> float:
    return float(np.linalg.norm(points - x, axis=1).sum())


def geometric_median(points, cfg: MedianConfig | None = None) -> MedianResult:
    """Point minimizing the summed Euclidean distance to ``points``.

    Starts from the centroid. An iterate closer than ``cfg.anchor_jitter`` to
    a data point is nudged by that amount along the all-ones diagonal before
    the next update, since the update divides by those distances.
    ``objectives[k]`` is the objective at the k-th iterate.
    """
    cfg = cfg or MedianConfig()
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    if P.ndim != 2 or P.shape[0] == 0:
        raise InvalidInputError("geometric_median needs a non-empty list of equal-length vectors")
    if not np.all(np.isfinite(P)):
        raise InvalidInputError("points must be finite")

    n, dim = P.shape
    x = P.mean(axis=0)
    if n == 1:
        return MedianResult(P[0].copy(), True, 0, [0.0])

    nudge = np.full(dim, cfg.anchor_jitter / np.sqrt(dim))
    objectives = [sum_of_distances(x, P)]
    for k in range(1, cfg.max_iters + 1):
        d = np.linalg.norm(P - x, axis=1)
        if d.min() < cfg.anchor_jitter:
            x = x + nudge
            d = np.linalg.norm(P - x, axis=1)
        w = 1.0 / d
        x_new = (w @ P) / w.sum()
        step = float(np.linalg.norm(x_new - x))
        x = x_new
        objectives.append(sum_of_distances(x, P))
        if step < cfg.epsilon:
            return MedianResult(x, True, k, objectives)
    return MedianResult(x, False, cfg.max_iters, objectives)
