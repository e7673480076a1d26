"""Ground-truth bowl world and action dynamics.

The world is 2.5D: chunk centroids live in the bowl plane, bulk food is a
single layer described by its volume and surface height. The bowl interior
is a paraboloid, so a layer of height ``h`` cm in a bowl of rim radius ``r``
cm and depth ``d`` cm holds ``pi * r**2 * h**2 / (2 * d)`` ml.

Every operation takes a state and returns a new one; states are never
mutated. Randomness comes only from the ``numpy.random.Generator`` passed in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ContractViolation, InvalidActionError, MissingTargetError
from .geometry import (
    BowlModel,
    Vec2,
    centroid_distance,
    clamp_to_disc,
    point_segment_distance,
    polyline_distance,
    rotate_about,
)
from .primitives import BITE_DEPTH, DIRECT, FIXED, ideal_insertion
from .trajectory import Trajectory

GRANULAR, LIQUID, SEMISOLID = "granular", "liquid", "semisolid"
FLUIDITY = {GRANULAR: 0.0, SEMISOLID: 0.4, LIQUID: 1.0}
TOFU, FRUIT = "tofu", "fruit"


@dataclass(frozen=True)
class SimParams:
    spoon_capacity: float = 10.0  # ml
    spoon_length: float = 0.10  # m
    footprint_fraction: float = 0.06  # spoon head half-width as a fraction of its length
    bite_depth: float = BITE_DEPTH
    spill_tolerance: float = 0.0125  # m of insertion error tolerated without spill
    spill_error_max: float = 0.03  # m of insertion error at which spill saturates
    drift_max: float = 0.02  # m per action on a fully fluid medium
    breakage_p: float = 0.8
    pickup_radius: float = 0.008
    push_speed: float = 0.02  # m/s
    rotate_speed: float = math.pi / 4  # rad/s
    fragility: dict = field(default_factory=lambda: {TOFU: 1.0, FRUIT: 0.5})

    @property
    def footprint(self) -> float:
        return self.spoon_length * self.footprint_fraction


DEFAULT_PARAMS = SimParams()


def volume_at_depth(h_cm: float, bowl: BowlModel) -> float:
    r = bowl.radius * 100.0
    d = bowl.inner_depth * 100.0
    return math.pi * r * r * h_cm * h_cm / (2.0 * d)


def depth_at_volume(volume_ml: float, bowl: BowlModel) -> float:
    r = bowl.radius * 100.0
    d = bowl.inner_depth * 100.0
    return math.sqrt(max(volume_ml, 0.0) * 2.0 * d / (math.pi * r * r))


@dataclass(frozen=True)
class BulkFood:
    kind: str
    depth_h: float  # cm
    volume: float  # ml
    fluidity: float

    def __post_init__(self):
        if self.kind not in FLUIDITY:
            raise ContractViolation(f"unknown bulk kind {self.kind!r}")
        if self.depth_h < 0 or self.volume < 0:
            raise ContractViolation("bulk depth and volume must be non-negative")
        if (self.volume == 0) != (self.depth_h == 0):
            raise ContractViolation("bulk volume and depth must vanish together")
        if not 0.0 <= self.fluidity <= 1.0:
            raise ContractViolation(f"fluidity must lie in [0, 1], got {self.fluidity}")

    @classmethod
    def from_volume(cls, kind, volume, bowl, fluidity=None) -> "BulkFood":
        f = FLUIDITY[kind] if fluidity is None else fluidity
        depth = depth_at_volume(volume, bowl)
        return cls(kind, depth, float(volume) if depth > 0 else 0.0, f)

    @classmethod
    def from_depth(cls, kind, depth_cm, bowl, fluidity=None) -> "BulkFood":
        f = FLUIDITY[kind] if fluidity is None else fluidity
        volume = volume_at_depth(depth_cm, bowl)
        # a depth so small that its volume underflows counts as empty
        return cls(kind, float(depth_cm) if volume > 0 else 0.0, volume, f)

    def with_volume(self, volume: float, bowl: BowlModel) -> "BulkFood":
        volume = 0.0 if volume < 1e-12 else volume
        return replace(self, volume=volume, depth_h=depth_at_volume(volume, bowl))


@dataclass(frozen=True)
class Chunk:
    id: int
    pos: Vec2
    radius: float
    material: str = TOFU
    intact: bool = True


@dataclass(frozen=True)
class BowlState:
    bowl: BowlModel
    bulk: Optional[BulkFood] = None
    chunks: tuple = ()
    spilled_total: float = 0.0
    broken_total: int = 0
    scooped_ids: tuple = ()
    attempts: int = 0

    def __post_init__(self):
        object.__setattr__(self, "chunks", tuple(self.chunks))
        ids = [c.id for c in self.chunks]
        if len(set(ids)) != len(ids):
            raise ContractViolation(f"chunk ids must be unique, got {ids}")

    @property
    def intact_chunks(self) -> tuple:
        return tuple(c for c in self.chunks if c.intact)

    @property
    def bulk_volume(self) -> float:
        return self.bulk.volume if self.bulk is not None else 0.0

    def chunk(self, chunk_id) -> Chunk:
        for c in self.chunks:
            if c.id == chunk_id:
                return c
        raise MissingTargetError(f"no chunk with id {chunk_id!r}")

    def _support(self) -> float:
        """Fluid cushioning under the chunks, 0 for a dry bowl."""
        if self.bulk is None or self.bulk.volume == 0:
            return 0.0
        return self.bulk.fluidity


@dataclass(frozen=True)
class ScoopOutcome:
    scooped_volume: float = 0.0
    scooped_chunks: tuple = ()
    spilled: float = 0.0
    broken: tuple = ()
    duration: float = 0.0


def max_chunk_radius(bowl: BowlModel, chunk: Chunk) -> float:
    return bowl.radius - chunk.radius


def _contact_path(traj: Trajectory) -> list:
    w = traj.waypoints
    pts = w[w[:, 4] > 0.0][:, :2]
    if len(pts) == 0:
        pts = w[:, :2]
    return [tuple(p) for p in pts]


def apply_scoop(
    state: BowlState,
    traj: Trajectory,
    spoon_capacity: float | None,
    rng: np.random.Generator,
    params: SimParams = DEFAULT_PARAMS,
) -> tuple[BowlState, ScoopOutcome]:
    """Run one scoop along ``traj``.

    The intact chunk nearest the deepest waypoint is lifted if it lies within
    the pickup radius; other chunks touched by the spoon head along its
    submerged path may break. Direct-style trajectories that did not lift a
    chunk take bulk food: the spoon fills in proportion to how far its tip
    sits below the surface, and insertion error beyond the tolerance turns a
    fluidity-weighted share of the load into spillage.
    """
    if traj is None or len(traj) == 0:
        raise InvalidActionError("scoop trajectory is empty")
    capacity = params.spoon_capacity if spoon_capacity is None else spoon_capacity
    if not capacity > 0:
        raise ContractViolation(f"spoon capacity must be positive, got {capacity}")

    bowl = state.bowl
    low = traj.waypoints[traj.lowest_index, :2]
    intact = state.intact_chunks

    picked = None
    if intact:
        dists = [math.hypot(c.pos.x - low[0], c.pos.y - low[1]) for c in intact]
        i = int(np.argmin(dists))
        if dists[i] <= params.pickup_radius:
            picked = intact[i]

    path = _contact_path(traj)
    support = state._support()
    broken_ids = []
    for c in intact:
        if picked is not None and c.id == picked.id:
            continue
        if polyline_distance(c.pos, path) < c.radius + params.footprint:
            p_break = params.breakage_p * params.fragility.get(c.material, 1.0) * (1.0 - support)
            if rng.random() < p_break:
                broken_ids.append(c.id)

    scooped_vol = spilled = 0.0
    bulk = state.bulk
    if picked is None and traj.family in (DIRECT, FIXED) and bulk is not None and bulk.volume > 0:
        h = bulk.depth_h
        z = traj.insertion
        tip_level = (bowl.inner_depth - z) * 100.0  # cm above the floor
        pen = h - tip_level
        if pen > 0:
            bite_cm = params.bite_depth * 100.0
            reachable = bulk.volume - volume_at_depth(max(tip_level, 0.0), bowl)
            attempted = min(capacity, reachable, capacity * min(1.0, pen / bite_cm))
            err = abs(ideal_insertion(h, bowl, params.bite_depth) - z)
            frac = 0.0
            if err > params.spill_tolerance + 1e-12:
                frac = min(1.0, err / params.spill_error_max) * bulk.fluidity
            spilled = attempted * frac
            scooped_vol = attempted - spilled
            bulk = bulk.with_volume(bulk.volume - attempted, bowl)

    chunks = []
    for c in state.chunks:
        if picked is not None and c.id == picked.id:
            continue
        chunks.append(replace(c, intact=False) if c.id in broken_ids else c)

    new_state = replace(
        state,
        bulk=bulk,
        chunks=tuple(chunks),
        spilled_total=state.spilled_total + spilled,
        broken_total=state.broken_total + len(broken_ids),
        scooped_ids=state.scooped_ids + ((picked.id,) if picked else ()),
        attempts=state.attempts + 1,
    )
    outcome = ScoopOutcome(
        scooped_volume=scooped_vol,
        scooped_chunks=(picked.id,) if picked else (),
        spilled=spilled,
        broken=tuple(broken_ids),
        duration=traj.duration,
    )
    return new_state, outcome


def apply_push(
    state: BowlState,
    chunk_id,
    displacement,
    rng: np.random.Generator,
    params: SimParams = DEFAULT_PARAMS,
) -> tuple[BowlState, ScoopOutcome]:
    """Slide one chunk in a straight line, shoving aside what it runs into."""
    target = state.chunk(chunk_id)
    if not target.intact:
        raise InvalidActionError(f"chunk {chunk_id!r} is broken and cannot be pushed")
    if displacement[0] == 0.0 and displacement[1] == 0.0:
        return state, ScoopOutcome()

    bowl = state.bowl
    start = target.pos
    end = clamp_to_disc(start + displacement, bowl.center, max_chunk_radius(bowl, target))
    seg = end - start
    seg_len = seg.norm()
    support = state._support()

    chunks = []
    broken_ids = []
    for c in state.chunks:
        if c.id == chunk_id:
            chunks.append(replace(c, pos=end))
            continue
        if not c.intact:
            chunks.append(c)
            continue
        d = point_segment_distance(c.pos, start, end)
        overlap = target.radius + c.radius - d
        if overlap <= 0:
            chunks.append(c)
            continue
        # shove sideways, away from the closest point of the sweep
        if seg_len > 0:
            t = max(0.0, min(1.0, ((c.pos - start).x * seg.x + (c.pos - start).y * seg.y) / seg_len**2))
        else:
            t = 0.0
        closest = start + seg * t
        away = c.pos - closest
        if away.norm() == 0.0:
            away = Vec2(-seg.y, seg.x) if seg_len > 0 else Vec2(1.0, 0.0)
        away = away * (1.0 / away.norm())
        new_pos = clamp_to_disc(c.pos + away * overlap, bowl.center, max_chunk_radius(bowl, c))
        p_break = params.breakage_p * params.fragility.get(c.material, 1.0) * (1.0 - support)
        broke = rng.random() < p_break
        if broke:
            broken_ids.append(c.id)
        chunks.append(replace(c, pos=new_pos, intact=not broke))

    new_state = replace(
        state, chunks=tuple(chunks), broken_total=state.broken_total + len(broken_ids)
    )
    return new_state, ScoopOutcome(broken=tuple(broken_ids), duration=seg_len / params.push_speed)


def drift_step(
    state: BowlState, rng: np.random.Generator, params: SimParams = DEFAULT_PARAMS
) -> BowlState:
    """Random float of intact chunks on a fluid layer, bounded by drift_max * fluidity."""
    f = state._support()
    if f == 0.0 or not state.intact_chunks:
        return state
    bowl = state.bowl
    reach = params.drift_max * f
    chunks = []
    for c in state.chunks:
        if not c.intact:
            chunks.append(c)
            continue
        ang = rng.uniform(0.0, 2.0 * math.pi)
        mag = rng.uniform(0.0, reach)
        moved = c.pos + Vec2(mag * math.cos(ang), mag * math.sin(ang))
        chunks.append(replace(c, pos=clamp_to_disc(moved, bowl.center, max_chunk_radius(bowl, c))))
    return replace(state, chunks=tuple(chunks))


def rotate_bowl(state: BowlState, angle: float) -> BowlState:
    bowl = state.bowl
    chunks = tuple(
        replace(
            c,
            pos=clamp_to_disc(
                rotate_about(c.pos, bowl.center, angle), bowl.center, max_chunk_radius(bowl, c)
            ),
        )
        for c in state.chunks
    )
    return replace(state, bowl=replace(bowl, rotation=bowl.rotation + angle), chunks=chunks)


def is_cleared(state: BowlState, clear_volume: float) -> bool:
    if clear_volume < 0:
        raise ContractViolation(f"clear_volume must be non-negative, got {clear_volume}")
    return not state.intact_chunks and state.bulk_volume <= clear_volume


def chunks_inside(state: BowlState, tol: float = 1e-12) -> bool:
    return all(
        centroid_distance(c.pos, state.bowl) <= max_chunk_radius(state.bowl, c) + tol
        for c in state.chunks
    )
