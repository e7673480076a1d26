"""Synthetic kinesthetic demonstrations for the two scoop families.

Each demo is a noisy, unevenly sampled copy of a smooth nominal motion in
the bowl-centered frame of the default bowl (radius 4 cm, depth 7 cm).
``write_bundled_demos`` regenerates the files shipped under ``data/demos``.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .primitives import DIRECT, WALL_GUIDED
from .trajectory import Demonstration, save_demo


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def nominal_motion(family: str, s: np.ndarray) -> np.ndarray:
    """Noise-free pose (x, y, roll, pitch, z) at path phase ``s`` in [0, 1]."""
    if family == WALL_GUIDED:
        # slide out along +x from 1 cm to the wall, pressing deeper, then lift along the wall
        u = _smoothstep(s / 0.7)
        rho = 0.010 + 0.024 * u
        z = 0.020 + 0.025 * u - 0.030 * _smoothstep((s - 0.7) / 0.3)
        pitch = -0.2 + 0.2 * u + 0.8 * _smoothstep((s - 0.7) / 0.3)
        return np.column_stack([rho, np.zeros_like(s), np.zeros_like(s), pitch, z])
    if family == DIRECT:
        x = -0.012 + 0.024 * s
        z = 0.010 + 0.030 * np.sin(np.pi * s)
        pitch = -0.4 + 0.9 * s
        return np.column_stack([x, np.zeros_like(s), np.zeros_like(s), pitch, z])
    raise ValueError(f"unknown family {family!r}")


def synthesize_demo(family: str, rng: np.random.Generator) -> Demonstration:
    n = int(rng.integers(60, 91))
    dt = rng.uniform(0.8, 1.2, size=n - 1)
    base = 4.0 if family == WALL_GUIDED else 3.0
    duration = base * rng.uniform(0.92, 1.08)
    t = np.concatenate([[0.0], np.cumsum(dt)])
    t *= duration / t[-1]
    s = t / duration

    q = nominal_motion(family, s)
    amp = np.array([0.001, 0.001, 0.02, 0.02, 0.001])
    freq = rng.uniform(0.5, 1.5, size=5)
    phase = rng.uniform(0, 2 * np.pi, size=5)
    q = q + amp * rng.uniform(-1, 1, size=5) * np.sin(2 * np.pi * freq * s[:, None] + phase)
    qdot = np.gradient(q, t, axis=0)
    return Demonstration(t, q, qdot, family)


def synthesize_demos(family: str, n: int = 25, seed: int = 0) -> list[Demonstration]:
    rng = np.random.default_rng([seed, 0 if family == WALL_GUIDED else 1])
    return [synthesize_demo(family, rng) for _ in range(n)]


def write_bundled_demos(root=None, n: int = 25, seed: int = 0) -> list[Path]:
    root = Path(root or Path(__file__).parent / "data" / "demos")
    written = []
    for family in (WALL_GUIDED, DIRECT):
        out = root / family
        out.mkdir(parents=True, exist_ok=True)
        for i, demo in enumerate(synthesize_demos(family, n, seed)):
            path = out / f"demo_{i:02d}.csv"
            save_demo(demo, path)
            written.append(path)
    return written


if __name__ == "__main__":
    for p in write_bundled_demos():
        print(p)
