"""Weiszfeld self-test against a brute-force oracle.

The oracle evaluates the objective on a dense grid over the bounding box,
then polishes the best grid cell with Nelder-Mead. It shares no code with
the iterative solver.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .median import MedianConfig, geometric_median, sum_of_distances


def grid_oracle(points, n_grid: int = 201) -> tuple[np.ndarray, float]:
    P = np.asarray(points, dtype=float)
    lo, hi = P.min(axis=0), P.max(axis=0)
    gx = np.linspace(lo[0], hi[0], n_grid)
    gy = np.linspace(lo[1], hi[1], n_grid)
    X, Y = np.meshgrid(gx, gy)
    G = np.stack([X.ravel(), Y.ravel()], axis=1)
    f = np.sqrt(((G[:, None, :] - P[None, :, :]) ** 2).sum(axis=2)).sum(axis=1)
    start = G[int(np.argmin(f))]
    res = minimize(
        lambda x: sum_of_distances(x, P),
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000},
    )
    best = res.x if res.fun <= f.min() else start
    return best, sum_of_distances(best, P)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def random_instances(n: int = 50, seed: int = 0) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [rng.uniform(-1.0, 1.0, size=(int(rng.integers(5, 10)), 2)) for _ in range(n)]


def run_selftest(n: int = 50, seed: int = 0, cfg: MedianConfig | None = None) -> list[Check]:
    cfg = cfg or MedianConfig()
    checks = []
    t0 = time.perf_counter()

    worst_rel = 0.0
    monotone = True
    for P in random_instances(n, seed):
        res = geometric_median(P, cfg)
        _, f_oracle = grid_oracle(P)
        worst_rel = max(worst_rel, (res.objective - f_oracle) / f_oracle)
        monotone &= all(b <= a + 1e-12 for a, b in zip(res.objectives, res.objectives[1:]))
    checks.append(Check("random-vs-oracle", worst_rel <= 1e-3, f"worst relative excess {worst_rel:.2e}"))
    checks.append(Check("objective-monotone", monotone, "objective nonincreasing per iteration"))

    square = geometric_median([[0, 0], [1, 0], [1, 1], [0, 1]], cfg).point
    err = float(np.abs(square - 0.5).max())
    checks.append(Check("square-center", err <= 1e-6, f"max error {err:.1e}"))

    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
    err = float(np.abs(geometric_median(tri, cfg).point - tri.mean(axis=0)).max())
    checks.append(Check("equilateral-centroid", err <= 1e-6, f"max error {err:.1e}"))

    err = float(abs(geometric_median([[0.0], [1.0], [10.0]], cfg).point[0] - 1.0))
    checks.append(Check("collinear-median", err <= 1e-6, f"error {err:.1e}"))

    elapsed = time.perf_counter() - t0
    checks.append(Check("runtime", elapsed < 5.0, f"{elapsed:.2f} s"))
    return checks
