"""Scenario files: the initial bowl contents for a family of trials.

A scenario is a JSON object::

    {
      "name": "soup_tofu",
      "bowl": {"radius": 0.04, "inner_depth": 0.07},
      "bulk": {"kind": "liquid", "depth_cm": 5.5},          # or "volume_ml"; null for none
      "chunks": [{"id": 0, "x": 0.0, "y": 0.0, "radius": 0.006, "material": "tofu"}],
      "position_jitter": 0.0,                               # m, uniform per-trial offset
      "seed": 0,
      "trials": 10
    }

``bulk.fluidity`` is optional and overrides the default for the kind.
Chunk ``x``/``y`` are offsets from the bowl center. Lengths are meters
except bulk depth (cm); volumes are ml.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ScenarioError
from .geometry import BowlModel, Vec2, clamp_to_disc
from .sim import FLUIDITY, BowlState, BulkFood, Chunk

BUILTIN_SUITE = ("cereal", "water", "yogurt", "tofu", "fruit", "soup_tofu")


@dataclass(frozen=True)
class ChunkSpec:
    id: int
    x: float
    y: float
    radius: float = 0.006
    material: str = "tofu"


@dataclass(frozen=True)
class BulkSpec:
    kind: str
    depth_cm: Optional[float] = None
    volume_ml: Optional[float] = None
    fluidity: Optional[float] = None

    def __post_init__(self):
        if self.kind not in FLUIDITY:
            raise ScenarioError(f"unknown bulk kind {self.kind!r}")
        if (self.depth_cm is None) == (self.volume_ml is None):
            raise ScenarioError("bulk needs exactly one of depth_cm or volume_ml")


@dataclass(frozen=True)
class Scenario:
    name: str
    bowl: BowlModel = field(default_factory=BowlModel)
    bulk: Optional[BulkSpec] = None
    chunks: tuple = ()
    position_jitter: float = 0.0
    seed: int = 0
    trials: int = 10

    @property
    def food(self) -> str:
        return self.name

    @property
    def liquid_like(self) -> bool:
        return self.bulk is not None and self.bulk.kind == "liquid"


def scenario_to_dict(sc: Scenario) -> dict:
    bulk = None
    if sc.bulk is not None:
        bulk = {k: v for k, v in asdict(sc.bulk).items() if v is not None}
    return {
        "name": sc.name,
        "bowl": {
            "center": [sc.bowl.center.x, sc.bowl.center.y],
            "radius": sc.bowl.radius,
            "inner_depth": sc.bowl.inner_depth,
        },
        "bulk": bulk,
        "chunks": [asdict(c) for c in sc.chunks],
        "position_jitter": sc.position_jitter,
        "seed": sc.seed,
        "trials": sc.trials,
    }


def scenario_from_dict(d: dict, source: str = "<dict>") -> Scenario:
    try:
        b = d.get("bowl") or {}
        center = b.get("center", [0.0, 0.0])
        bowl = BowlModel(
            Vec2(float(center[0]), float(center[1])),
            float(b.get("radius", 0.04)),
            float(b.get("inner_depth", 0.07)),
        )
        bulk = BulkSpec(**d["bulk"]) if d.get("bulk") else None
        chunks = tuple(ChunkSpec(**c) for c in d.get("chunks", []))
        sc = Scenario(
            name=str(d["name"]),
            bowl=bowl,
            bulk=bulk,
            chunks=chunks,
            position_jitter=float(d.get("position_jitter", 0.0)),
            seed=int(d.get("seed", 0)),
            trials=int(d.get("trials", 10)),
        )
    except ScenarioError as e:
        raise ScenarioError(f"{source}: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioError(f"{source}: malformed scenario ({e!r})") from e
    ids = [c.id for c in sc.chunks]
    if len(set(ids)) != len(ids):
        raise ScenarioError(f"{source}: duplicate chunk ids {ids}")
    if sc.trials < 1:
        raise ScenarioError(f"{source}: trials must be >= 1")
    return sc


def save_scenario(sc: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(sc), indent=2) + "\n")


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}") from e
    return scenario_from_dict(data, str(path))


def builtin_scenario(name: str) -> Scenario:
    res = resources.files("lavascoop") / "data" / "scenarios" / f"{name}.json"
    if not res.is_file():
        raise ScenarioError(f"no builtin scenario named {name!r}; known: {BUILTIN_SUITE}")
    return scenario_from_dict(json.loads(res.read_text()), f"builtin:{name}")


def resolve_scenario(ref) -> Scenario:
    """A scenario file path, or the name of a bundled scenario."""
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        return load_scenario(p)
    return builtin_scenario(str(ref))


def default_suite() -> list[Scenario]:
    return [builtin_scenario(n) for n in BUILTIN_SUITE]


def initial_state(sc: Scenario, rng: np.random.Generator | None = None) -> BowlState:
    """Materialize a scenario, jittering chunk positions when requested."""
    bowl = sc.bowl
    bulk = None
    if sc.bulk is not None:
        if sc.bulk.depth_cm is not None:
            bulk = BulkFood.from_depth(sc.bulk.kind, sc.bulk.depth_cm, bowl, sc.bulk.fluidity)
        else:
            bulk = BulkFood.from_volume(sc.bulk.kind, sc.bulk.volume_ml, bowl, sc.bulk.fluidity)
    chunks = []
    for c in sc.chunks:
        pos = bowl.center + Vec2(c.x, c.y)
        if sc.position_jitter > 0 and rng is not None:
            ang = rng.uniform(0.0, 2.0 * math.pi)
            mag = rng.uniform(0.0, sc.position_jitter)
            pos = pos + Vec2(mag * math.cos(ang), mag * math.sin(ang))
        pos = clamp_to_disc(pos, bowl.center, bowl.radius - c.radius)
        chunks.append(Chunk(c.id, pos, c.radius, c.material))
    return BowlState(bowl, bulk, tuple(chunks))
