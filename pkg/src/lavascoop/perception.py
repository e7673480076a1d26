"""Oracle perception: structured observations with calibrated corruption.

Stands in for the food classifier, the instance segmenter and the depth
regressor. Ground truth is read off the state, then each channel is
independently corrupted with probability ``1 - accuracy``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ContractViolation, NoBulkError
from .geometry import BowlModel, Subregion, Vec2, classify_subregion
from .primitives import DEPTH_CLASSES_CM, HighPrimitive
from .sim import BowlState

CHUNKED = "chunked"
BULK_GRANULAR = "bulk-granular"
BULK_LIQUID = "bulk-liquid"
BULK_SEMISOLID = "bulk-semisolid"
SOUP = "soup-with-chunks"
CATEGORIES = (CHUNKED, BULK_GRANULAR, BULK_LIQUID, BULK_SEMISOLID, SOUP)

# bulk below this volume is invisible to the camera
MIN_VISIBLE_VOLUME = 0.5  # ml


@dataclass(frozen=True)
class NoiseModel:
    scoopnet_acc: float = 1.00
    targetnet_acc: float = 0.879
    depthnet_acc: float = 0.857

    def __post_init__(self):
        for name in ("scoopnet_acc", "targetnet_acc", "depthnet_acc"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ContractViolation(f"{name} must lie in [0, 1], got {v}")


NOISELESS = NoiseModel(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class Instance:
    id: int
    centroid: Vec2
    subregion: Subregion


@dataclass(frozen=True)
class Observation:
    category: Optional[str]  # None for an empty bowl
    instances: tuple
    depth_class: Optional[float]
    bowl: BowlModel

    @property
    def is_empty(self) -> bool:
        return not self.instances and self.depth_class is None


def depth_class(h_cm: float) -> float:
    """Nearest depth class; exact midpoints round up to the deeper class."""
    if h_cm >= 4.75:
        return 5.5
    if h_cm >= 3.0:
        return 4.0
    return 2.0


def _adjacent_classes(c: float) -> list[float]:
    i = DEPTH_CLASSES_CM.index(c)
    return [DEPTH_CLASSES_CM[j] for j in (i - 1, i + 1) if 0 <= j < len(DEPTH_CLASSES_CM)]


def ground_truth(state: BowlState) -> Observation:
    chunks = state.intact_chunks
    has_bulk = state.bulk is not None and state.bulk.volume > MIN_VISIBLE_VOLUME
    positions = [c.pos for c in chunks]
    instances = tuple(
        Instance(c.id, c.pos, classify_subregion(c.pos, positions, state.bowl)) for c in chunks
    )
    if chunks and has_bulk:
        category = SOUP
    elif chunks:
        category = CHUNKED
    elif has_bulk:
        category = "bulk-" + state.bulk.kind
    else:
        category = None
    dc = depth_class(state.bulk.depth_h) if has_bulk else None
    return Observation(category, instances, dc, state.bowl)


def observe(state: BowlState, noise: NoiseModel, rng: np.random.Generator) -> Observation:
    """Ground truth passed through the three corruption channels.

    One uniform draw per channel decides corruption, so the three channels
    are independent; replacement labels are drawn only when needed.
    """
    obs = ground_truth(state)
    u_cat, u_tgt, u_dep = rng.random(3)

    category = obs.category
    if category is not None and u_cat >= noise.scoopnet_acc:
        others = [c for c in CATEGORIES if c != category]
        category = others[int(rng.integers(len(others)))]

    instances = obs.instances
    if instances and u_tgt >= noise.targetnet_acc:
        k = int(rng.integers(len(instances)))
        wrong = [s for s in Subregion if s != instances[k].subregion]
        new = wrong[int(rng.integers(len(wrong)))]
        instances = instances[:k] + (replace(instances[k], subregion=new),) + instances[k + 1 :]

    dc = obs.depth_class
    if dc is not None and u_dep >= noise.depthnet_acc:
        options = _adjacent_classes(dc)
        dc = options[int(rng.integers(len(options)))]

    return Observation(category, instances, dc, obs.bowl)


def classify_food(obs: Observation) -> dict:
    """Distribution over high-level primitives given the food category."""
    wide = obs.category in (CHUNKED, SOUP)
    return {HighPrimitive.WIDE: 1.0 if wide else 0.0, HighPrimitive.DEEP: 0.0 if wide else 1.0}


def estimate_depth(obs: Observation) -> float:
    if obs.depth_class is None:
        raise NoBulkError("no bulk layer detected; depth is undefined")
    return obs.depth_class
