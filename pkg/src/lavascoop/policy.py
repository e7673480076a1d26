"""Hierarchical scooping policy and the two baselines.

``lava_step`` chains three levels: pick Wide or Deep from the food
category, parameterize a mid-level primitive from the instances or depth,
then turn it into an executable trajectory from the template library.
``fts_step`` replays one fixed scoop. ``lava_low_step`` keeps the shared
executor but replaces the reasoning with a turntable and a depth switch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NoTargetError
from .geometry import (
    BowlModel,
    Subregion,
    Vec2,
    alignment_angle,
    centroid_distance,
    point_segment_distance,
    push_vector,
    wrap_angle,
)
from .perception import SOUP, Observation, classify_food, estimate_depth
from .primitives import (
    BITE_DEPTH,
    DIRECT,
    FIXED,
    WALL_GUIDED,
    Align,
    DirectScoop,
    HighPrimitive,
    MidPrimitive,
    WallGuidedScoop,
    ideal_insertion,
)
from .trajectory import (
    DEFAULT_T,
    Trajectory,
    TrajectoryLibrary,
    adapt_trajectory,
    default_library,
    push_trajectory,
)

POLICIES = ("lava", "lava-low", "fts")

CHUNK_RADIUS_GUESS = 0.006  # m, also the default stop margin for center pushes
STATION_CLEARANCE = 0.001
FTS_PITCH_START = -0.6
FTS_DEPTH_CLASS = 4.0
FTS_DURATION = 3.0
LAVA_LOW_TURN = math.pi / 4
LAVA_LOW_SHALLOW, LAVA_LOW_DEEP = 4.0, 2.0


@dataclass(frozen=True)
class Action:
    kind: str  # "scoop", "push", "rotate" or "done"
    trajectory: Optional[Trajectory] = None
    target_id: Optional[int] = None
    angle: float = 0.0
    mid: Optional[MidPrimitive] = None

    @classmethod
    def done(cls) -> "Action":
        return cls("done")

    @classmethod
    def rotate(cls, angle: float) -> "Action":
        return cls("rotate", angle=angle)


def high_level(obs: Observation) -> HighPrimitive:
    dist = classify_food(obs)
    choice = max(dist, key=dist.get)
    if obs.category == SOUP and not obs.instances:
        return HighPrimitive.DEEP
    return choice


def _station_push(target: Vec2, others, bowl: BowlModel, margin: float) -> Vec2:
    """Displacement taking a central item out to a free spot on the wall.

    Bearings are tried in order of distance from +x; the first whose
    straight path and end point keep clear of the other instances wins.
    """
    rho = bowl.radius - margin - STATION_CLEARANCE
    bearings = sorted(
        (wrap_angle(k * math.pi / 8) for k in range(16)), key=lambda a: (abs(a), -a)
    )
    gap = 2.0 * margin + STATION_CLEARANCE
    for b in bearings:
        station = bowl.center + Vec2(rho * math.cos(b), rho * math.sin(b))
        if all(point_segment_distance(o, target, station) > gap for o in others):
            return station - target
    return bowl.center + Vec2(rho, 0.0) - target


def mid_level_wide(obs: Observation, stop_margin: float = CHUNK_RADIUS_GUESS) -> MidPrimitive:
    """Scoop the R1 item if one is seen, otherwise align the most central one.

    Central (R2) items are pushed out to the wall so they become R1; other
    items are first pushed in toward the center, stopping ``stop_margin``
    short of it.
    """
    if not obs.instances:
        raise NoTargetError("no instances to act on")
    bowl = obs.bowl
    r1 = [i for i in obs.instances if i.subregion == Subregion.R1]
    if r1:
        t = max(r1, key=lambda i: (i.centroid.x, i.centroid.y, -i.id))
        rel = t.centroid - bowl.center
        return WallGuidedScoop(centroid_distance(t.centroid, bowl), t.id, math.atan2(rel.y, rel.x))

    t = min(
        obs.instances,
        key=lambda i: (i.subregion != Subregion.R2, centroid_distance(i.centroid, bowl), i.id),
    )
    others = [i.centroid for i in obs.instances if i.id != t.id]
    delta = centroid_distance(t.centroid, bowl)
    if t.subregion == Subregion.R3 and delta > stop_margin:
        push = push_vector(t.centroid, bowl, stop_margin)
        return Align(alignment_angle(t.centroid, bowl.center), push, t.id, t.centroid)
    push = _station_push(t.centroid, others, bowl, stop_margin)
    return Align(math.atan2(push.y, push.x), push, t.id, t.centroid)


def mid_level_deep(obs: Observation) -> DirectScoop:
    return DirectScoop(estimate_depth(obs))


def low_level(
    mid: MidPrimitive,
    library: TrajectoryLibrary | None = None,
    bowl: BowlModel | None = None,
    bite_depth: float = BITE_DEPTH,
) -> Action:
    library = library or default_library()
    bowl = bowl or BowlModel()
    if isinstance(mid, Align):
        return Action("push", push_trajectory(mid), mid.target_id, mid=mid)
    family = WALL_GUIDED if isinstance(mid, WallGuidedScoop) else DIRECT
    traj = adapt_trajectory(library.template(family), mid, bowl, bite_depth)
    traj = traj.translated(bowl.center.x, bowl.center.y)
    target = mid.target_id if isinstance(mid, WallGuidedScoop) else None
    return Action("scoop", traj, target, mid=mid)


def lava_step(
    obs: Observation, library: TrajectoryLibrary | None = None, bite_depth: float = BITE_DEPTH
) -> Action:
    if obs.is_empty:
        return Action.done()
    level = high_level(obs)
    if level == HighPrimitive.WIDE and not obs.instances:
        level = HighPrimitive.DEEP
    if level == HighPrimitive.DEEP and obs.depth_class is None:
        level = HighPrimitive.WIDE
    mid = mid_level_wide(obs) if level == HighPrimitive.WIDE else mid_level_deep(obs)
    return low_level(mid, library, obs.bowl, bite_depth)


def fixed_trajectory(bowl: BowlModel, T: int = DEFAULT_T, bite_depth: float = BITE_DEPTH) -> Trajectory:
    """The baseline's single predetermined scoop through the bowl center."""
    s = np.linspace(0.0, 1.0, T)
    z = ideal_insertion(FTS_DEPTH_CLASS, bowl, bite_depth) * np.sin(np.pi * s)
    z[T // 2] = ideal_insertion(FTS_DEPTH_CLASS, bowl, bite_depth)
    w = np.column_stack(
        [
            bowl.center.x + np.linspace(-0.015, 0.015, T),
            np.full(T, bowl.center.y),
            np.zeros(T),
            FTS_PITCH_START + 0.9 * s,
            z,
        ]
    )
    return Trajectory(w, FTS_DURATION, FIXED)


def fts_step(obs: Observation, bite_depth: float = BITE_DEPTH) -> Action:
    if obs.is_empty:
        return Action.done()
    return Action("scoop", fixed_trajectory(obs.bowl, bite_depth=bite_depth))


@dataclass
class LavaLowMemory:
    rotate_next: bool = False
    deep: bool = False
    shallow_scoops: int = 0


def lava_low_step(
    obs: Observation,
    memory: LavaLowMemory,
    library: TrajectoryLibrary | None = None,
    bite_depth: float = BITE_DEPTH,
) -> Action:
    """Turntable wall scoops for chunks, a one-way depth switch for bulk."""
    if obs.is_empty:
        return Action.done()
    bowl = obs.bowl
    if obs.instances:
        if memory.rotate_next:
            memory.rotate_next = False
            return Action.rotate(LAVA_LOW_TURN)
        memory.rotate_next = True
        station = bowl.radius - CHUNK_RADIUS_GUESS - STATION_CLEARANCE
        return low_level(WallGuidedScoop(station, -1, 0.0), library, bowl, bite_depth)
    # the threshold is only consulted once a shallow scoop has been taken
    if (
        not memory.deep
        and memory.shallow_scoops > 0
        and obs.depth_class is not None
        and obs.depth_class <= LAVA_LOW_DEEP
    ):
        memory.deep = True
    if not memory.deep:
        memory.shallow_scoops += 1
    h = LAVA_LOW_DEEP if memory.deep else LAVA_LOW_SHALLOW
    return low_level(DirectScoop(h), library, bowl, bite_depth)


class Policy:
    """Uniform ``step(obs)`` wrapper holding per-episode memory."""

    def __init__(self, name: str, library: TrajectoryLibrary | None = None, bite_depth=BITE_DEPTH):
        if name not in POLICIES:
            raise ValueError(f"unknown policy {name!r}; choose from {POLICIES}")
        self.name = name
        self.library = library or default_library()
        self.bite_depth = bite_depth
        self.memory = LavaLowMemory()

    def step(self, obs: Observation) -> Action:
        if self.name == "lava":
            return lava_step(obs, self.library, self.bite_depth)
        if self.name == "fts":
            return fts_step(obs, self.bite_depth)
        return lava_low_step(obs, self.memory, self.library, self.bite_depth)
