"""Primitive vocabulary shared by the policies, the executor and the simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import ContractViolation
from .geometry import BowlModel, Vec2

DEPTH_CLASSES_CM = (5.5, 4.0, 2.0)
BITE_DEPTH = 0.015  # m below the food surface

WALL_GUIDED = "wall-guided"
DIRECT = "direct"
PUSH = "push"
FIXED = "fixed"
FAMILIES = (WALL_GUIDED, DIRECT)


class HighPrimitive(str, Enum):
    WIDE = "Wide"
    DEEP = "Deep"


def ideal_insertion(h_cm: float, bowl: BowlModel, bite_depth: float = BITE_DEPTH) -> float:
    """Tip depth below the rim that reaches the food surface plus one bite.

    Clamped to the bowl floor for very shallow layers.
    """
    z = bowl.inner_depth - h_cm / 100.0 + bite_depth
    return min(max(z, 0.0), bowl.inner_depth)


@dataclass(frozen=True)
class WallGuidedScoop:
    delta: float
    target_id: int
    bearing: float  # heading of the target seen from the bowl center


@dataclass(frozen=True)
class Align:
    gamma: float
    push: Vec2
    target_id: int
    start: Vec2

    @property
    def beta(self) -> float:
        return 0.0


@dataclass(frozen=True)
class DirectScoop:
    h: float

    def __post_init__(self):
        if not any(math.isclose(self.h, c) for c in DEPTH_CLASSES_CM):
            raise ContractViolation(f"depth class must be one of {DEPTH_CLASSES_CM}, got {self.h}")


MidPrimitive = Union[WallGuidedScoop, Align, DirectScoop]


def family_of(mid: MidPrimitive) -> str:
    if isinstance(mid, WallGuidedScoop):
        return WALL_GUIDED
    if isinstance(mid, DirectScoop):
        return DIRECT
    return PUSH
