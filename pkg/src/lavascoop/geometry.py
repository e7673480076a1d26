"""Planar bowl geometry.

All positions are in meters in the world frame, with +x as the "right"
direction used for subregion ranking. Angles are radians in (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

from .errors import ContractViolation, DegenerateGeometryError

WALL_BAND = 0.75
CENTER_BAND = 0.30


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other) -> "Vec2":  # type: ignore[override]
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other) -> "Vec2":
        return Vec2(self.x - other[0], self.y - other[1])

    def __mul__(self, s) -> "Vec2":  # type: ignore[override]
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class BowlModel:
    """Bowl footprint and depth. ``rotation`` tracks turntable motion."""

    center: Vec2 = Vec2(0.0, 0.0)
    radius: float = 0.04
    inner_depth: float = 0.07
    rotation: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ContractViolation(f"bowl radius must be positive, got {self.radius}")
        if not self.inner_depth > 0:
            raise ContractViolation(f"bowl depth must be positive, got {self.inner_depth}")
        object.__setattr__(self, "center", Vec2(*self.center))


@dataclass(frozen=True)
class SpoonPose:
    tip: Vec2
    roll_gamma: float
    pitch_beta: float
    insertion_z: float


class Subregion(str, Enum):
    R1 = "R1"  # rightmost wall-adjacent item
    R2 = "R2"  # near the bowl center
    R3 = "R3"


def wrap_angle(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    a = math.remainder(angle, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    return a


def centroid_distance(target: Sequence[float], bowl: BowlModel) -> float:
    return math.hypot(target[0] - bowl.center.x, target[1] - bowl.center.y)


def classify_subregion(
    target: Sequence[float],
    all_targets: Sequence[Sequence[float]],
    bowl: BowlModel,
    wall_band: float = WALL_BAND,
    center_band: float = CENTER_BAND,
) -> Subregion:
    """Label ``target`` as R1, R2 or R3 relative to the other items.

    R2 if its center distance is within ``center_band`` of the radius. R1 if
    it is the rightmost (max x, then max y) of the items lying at or beyond
    ``wall_band`` of the radius. Everything else is R3.
    """
    if not 0 < center_band < wall_band < 1:
        raise ContractViolation(
            f"need 0 < center_band < wall_band < 1, got {center_band}, {wall_band}"
        )
    target = Vec2(*target)
    pts = [Vec2(*p) for p in all_targets]
    if target not in pts:
        raise ContractViolation(f"target {target} is not among all_targets")

    frac = centroid_distance(target, bowl) / bowl.radius
    if frac <= center_band:
        return Subregion.R2
    if frac < wall_band:
        return Subregion.R3
    wall = [p for p in pts if centroid_distance(p, bowl) / bowl.radius >= wall_band]
    best = max(wall, key=lambda p: (p.x, p.y))
    return Subregion.R1 if (target.x, target.y) == (best.x, best.y) else Subregion.R3


def alignment_angle(target: Sequence[float], bowl_center: Sequence[float]) -> float:
    """Heading of the vector from ``target`` to ``bowl_center``."""
    dx = bowl_center[0] - target[0]
    dy = bowl_center[1] - target[1]
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometryError("target coincides with bowl center; heading undefined")
    return wrap_angle(math.atan2(dy, dx))


def push_vector(target: Sequence[float], bowl: BowlModel, stop_margin: float) -> Vec2:
    """Displacement that slides ``target`` toward the center, stopping ``stop_margin`` short."""
    delta = centroid_distance(target, bowl)
    if delta == 0.0 or not 0.0 <= stop_margin < delta:
        raise DegenerateGeometryError(
            f"push undefined for center distance {delta} and stop margin {stop_margin}"
        )
    ux = (bowl.center.x - target[0]) / delta
    uy = (bowl.center.y - target[1]) / delta
    step = delta - stop_margin
    return Vec2(ux * step, uy * step)


def rotate_about(p: Sequence[float], center: Sequence[float], angle: float) -> Vec2:
    c, s = math.cos(angle), math.sin(angle)
    dx, dy = p[0] - center[0], p[1] - center[1]
    return Vec2(center[0] + c * dx - s * dy, center[1] + s * dx + c * dy)


def clamp_to_disc(p: Sequence[float], center: Sequence[float], max_radius: float) -> Vec2:
    dx, dy = p[0] - center[0], p[1] - center[1]
    d = math.hypot(dx, dy)
    if d <= max_radius:
        return Vec2(p[0], p[1])
    k = max_radius / d
    # rounding can leave the scaled point an ulp outside; shrink until it is not
    while True:
        q = Vec2(center[0] + dx * k, center[1] + dy * k)
        if math.hypot(q[0] - center[0], q[1] - center[1]) <= max_radius:
            return q
        k = math.nextafter(k, 0.0)


def point_segment_distance(p: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    ax, ay = a[0], a[1]
    vx, vy = b[0] - ax, b[1] - ay
    wx, wy = p[0] - ax, p[1] - ay
    vv = vx * vx + vy * vy
    t = 0.0 if vv == 0.0 else max(0.0, min(1.0, (wx * vx + wy * vy) / vv))
    return math.hypot(wx - t * vx, wy - t * vy)


def polyline_distance(p: Sequence[float], path: Sequence[Sequence[float]]) -> float:
    """Smallest distance from ``p`` to a polyline (a single point counts)."""
    if len(path) == 1:
        return math.hypot(p[0] - path[0][0], p[1] - path[0][1])
    return min(point_segment_distance(p, path[i], path[i + 1]) for i in range(len(path) - 1))
