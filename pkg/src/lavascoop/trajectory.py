"""Demonstrations, fixed-length trajectories, median aggregation and warping.

A trajectory waypoint is the action vector ``(x, y, roll, pitch, z)``: spoon
tip position in the bowl-centered frame (m), roll and pitch (rad), and tip
depth below the rim (m).
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidDemoError,
    InvalidInputError,
    LibraryIncompleteError,
    ScenarioError,
)
from .geometry import BowlModel, wrap_angle
from .median import MedianConfig, geometric_median
from .primitives import (
    BITE_DEPTH,
    DIRECT,
    FAMILIES,
    WALL_GUIDED,
    Align,
    DirectScoop,
    MidPrimitive,
    WallGuidedScoop,
    family_of,
    ideal_insertion,
)

X, Y, ROLL, PITCH, Z = range(5)
DEFAULT_T = 50
# distance kept between the spoon's first contact point and the target centroid
WALL_BACKOFF = 0.012


@dataclass(frozen=True)
class Demonstration:
    t: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    family: str

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        q = np.asarray(self.q, dtype=float)
        qdot = np.asarray(self.qdot, dtype=float)
        if q.ndim == 1:
            q = q[:, None]
        if qdot.ndim == 1:
            qdot = qdot[:, None]
        if t.ndim != 1 or len(t) < 2:
            raise InvalidDemoError("a demonstration needs at least 2 samples")
        if q.shape[0] != len(t) or qdot.shape != q.shape:
            raise InvalidDemoError(f"shape mismatch: t {t.shape}, q {q.shape}, qdot {qdot.shape}")
        if not np.all(np.diff(t) > 0):
            raise InvalidDemoError("timestamps must be strictly increasing")
        for name, a in (("t", t), ("q", q), ("qdot", qdot)):
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def dim(self) -> int:
        return self.q.shape[1]

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])


@dataclass(frozen=True, eq=False)
class Trajectory:
    waypoints: np.ndarray
    duration: float
    family: str = DIRECT

    def __post_init__(self):
        w = np.array(self.waypoints, dtype=float)
        if w.ndim != 2 or w.shape[0] < 1:
            raise InvalidInputError("trajectory needs a (T, D) waypoint array with T >= 1")
        if not self.duration >= 0:
            raise InvalidInputError(f"duration must be non-negative, got {self.duration}")
        w.setflags(write=False)
        object.__setattr__(self, "waypoints", w)
        object.__setattr__(self, "duration", float(self.duration))

    def __len__(self) -> int:
        return self.waypoints.shape[0]

    def same_as(self, other: "Trajectory") -> bool:
        return (
            self.family == other.family
            and self.duration == other.duration
            and np.array_equal(self.waypoints, other.waypoints)
        )

    @property
    def lowest_index(self) -> int:
        return int(np.argmax(self.waypoints[:, Z]))

    @property
    def insertion(self) -> float:
        return float(self.waypoints[:, Z].max())

    def planar_path(self) -> np.ndarray:
        return self.waypoints[:, [X, Y]]

    def translated(self, dx: float, dy: float) -> "Trajectory":
        if dx == 0.0 and dy == 0.0:
            return self
        w = self.waypoints.copy()
        w[:, X] += dx
        w[:, Y] += dy
        return Trajectory(w, self.duration, self.family)


def resample(demo: Demonstration, T: int = DEFAULT_T) -> Trajectory:
    """Linearly interpolate ``demo.q`` at ``T`` evenly spaced times."""
    if T < 2:
        raise InvalidInputError(f"T must be >= 2, got {T}")
    ts = np.linspace(demo.t[0], demo.t[-1], T)
    w = np.column_stack([np.interp(ts, demo.t, demo.q[:, j]) for j in range(demo.dim)])
    # exact endpoints regardless of rounding in linspace
    w[0], w[-1] = demo.q[0], demo.q[-1]
    return Trajectory(w, demo.duration, demo.family)


def aggregate_demos(
    demos: Sequence[Demonstration], T: int = DEFAULT_T, cfg: MedianConfig | None = None
) -> Trajectory:
    """Geometric median of the demos in flattened, time-resampled space."""
    if not demos:
        raise InvalidInputError("need at least one demonstration")
    families = {d.family for d in demos}
    dims = {d.dim for d in demos}
    if len(families) != 1 or len(dims) != 1:
        raise InvalidInputError(f"demos must share family and dimension, got {families}, {dims}")

    flat = np.stack([resample(d, T).waypoints.ravel() for d in demos])
    # canonical order so the result does not depend on input order
    flat = flat[np.lexsort(flat.T[::-1])]
    med = geometric_median(flat, cfg)
    duration = float(np.median([d.duration for d in demos]))
    return Trajectory(med.point.reshape(T, -1), duration, demos[0].family)


@dataclass(frozen=True)
class CostWeights:
    position: float = 1.0
    velocity: float = 0.1


def trajectory_cost(
    traj: Trajectory, reference: Trajectory, weights: CostWeights = CostWeights()
) -> float:
    """Discretized integral of a quadratic tracking cost against ``reference``.

    Position deviation is integrated with the trapezoid rule; velocity
    deviation uses the per-interval finite-difference velocities.
    """
    if traj.waypoints.shape != reference.waypoints.shape:
        raise InvalidInputError("trajectory and reference must have the same shape")
    T = len(traj)
    if T < 2 or traj.duration == 0:
        return 0.0
    dt = traj.duration / (T - 1)
    dev = traj.waypoints - reference.waypoints
    sq = np.sum(dev**2, axis=1)
    pos = float(np.sum(0.5 * (sq[1:] + sq[:-1])) * dt)
    vel_dev = np.diff(traj.waypoints, axis=0) / dt - np.diff(reference.waypoints, axis=0) / (
        reference.duration / (T - 1)
    )
    vel = float(np.sum(vel_dev**2) * dt)
    return weights.position * pos + weights.velocity * vel


def adapt_trajectory(
    template: Trajectory,
    mid: MidPrimitive,
    bowl: BowlModel | None = None,
    bite_depth: float = BITE_DEPTH,
) -> Trajectory:
    """Warp a bowl-centered template to the parameters of ``mid``.

    Direct scoops only shift the depth profile so the deepest waypoint sits
    at the ideal insertion. Wall-guided scoops are rotated to the target
    bearing and radially rescaled so first contact lands ``WALL_BACKOFF``
    behind the target while the wall end of the path stays put.
    """
    if family_of(mid) != template.family:
        raise InvalidInputError(
            f"cannot adapt a {template.family!r} template to {type(mid).__name__}"
        )
    bowl = bowl or BowlModel()
    w = template.waypoints.copy()

    if isinstance(mid, DirectScoop):
        target = ideal_insertion(mid.h, bowl, bite_depth)
        i = int(np.argmax(w[:, Z]))
        w[:, Z] = np.maximum(w[:, Z] + (target - w[i, Z]), 0.0)
        w[i, Z] = target
        return Trajectory(w, template.duration, template.family)

    assert isinstance(mid, WallGuidedScoop)
    rho = np.hypot(w[:, X], w[:, Y])
    phi = np.arctan2(w[:, Y], w[:, X])
    rho_start, rho_end = rho[0], rho.max()
    new_start = min(max(mid.delta - WALL_BACKOFF, 0.0), rho_end)
    if abs(new_start - rho_start) < 1e-12:
        new_start = rho_start
    if rho_end > rho_start and new_start != rho_start:
        k = (rho_end - new_start) / (rho_end - rho_start)
        rho = rho_end - (rho_end - rho) * k
    if mid.bearing != 0.0 or new_start != rho_start:
        phi = phi + mid.bearing
        w[:, X] = rho * np.cos(phi)
        w[:, Y] = rho * np.sin(phi)
        w[:, ROLL] = [wrap_angle(g + mid.bearing) for g in w[:, ROLL]]
    return Trajectory(w, template.duration, template.family)


def push_trajectory(
    align: Align, T: int = DEFAULT_T, depth: float = 0.05, speed: float = 0.02
) -> Trajectory:
    """Straight, untilted push from the target centroid along ``align.push``."""
    s = np.linspace(0.0, 1.0, T)[:, None]
    start = np.array(align.start, dtype=float)
    xy = start + s * np.array(align.push, dtype=float)
    xy[-1] = start + np.array(align.push, dtype=float)
    w = np.column_stack([xy, np.full(T, align.gamma), np.zeros(T), np.full(T, depth)])
    length = math.hypot(*align.push)
    return Trajectory(w, length / speed, "push")


class TrajectoryLibrary:
    """Aggregated templates keyed by primitive family."""

    def __init__(self, templates: dict[str, Trajectory] | None = None):
        self.templates = dict(templates or {})

    def __contains__(self, family: str) -> bool:
        return family in self.templates

    def template(self, family: str) -> Trajectory:
        try:
            return self.templates[family]
        except KeyError:
            raise LibraryIncompleteError(f"no template for family {family!r}") from None

    @classmethod
    def from_demos(
        cls, demos: Iterable[Demonstration], T: int = DEFAULT_T, cfg: MedianConfig | None = None
    ) -> "TrajectoryLibrary":
        by_family: dict[str, list[Demonstration]] = {}
        for d in demos:
            by_family.setdefault(d.family, []).append(d)
        return cls({f: aggregate_demos(ds, T, cfg) for f, ds in sorted(by_family.items())})


@functools.lru_cache(maxsize=1)
def default_library() -> TrajectoryLibrary:
    """Templates aggregated from the bundled demonstrations."""
    demos = []
    root = resources.files("lavascoop") / "data" / "demos"
    for family in FAMILIES:
        with resources.as_file(root / family) as d:
            demos.extend(load_demos(d))
    return TrajectoryLibrary.from_demos(demos)


# ---------------------------------------------------------------------------
# file formats

def save_demo(demo: Demonstration, path) -> None:
    """Write a demo as CSV preceded by ``# family:`` and ``# dim:`` header lines."""
    D = demo.dim
    with open(path, "w", newline="") as fh:
        fh.write(f"# family: {demo.family}\n# dim: {D}\n")
        w = csv.writer(fh)
        w.writerow(["t"] + [f"q{j}" for j in range(D)] + [f"qdot{j}" for j in range(D)])
        for i in range(len(demo.t)):
            w.writerow([repr(float(v)) for v in (demo.t[i], *demo.q[i], *demo.qdot[i])])


def _read_header_csv(path) -> tuple[dict[str, str], list[list[str]]]:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    meta = {}
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    return meta, rows


def load_demo(path) -> Demonstration:
    meta, rows = _read_header_csv(path)
    try:
        family = meta["family"]
        D = int(meta["dim"])
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except (KeyError, ValueError) as exc:
        raise ScenarioError(f"malformed demo file {path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 1 + 2 * D:
        raise ScenarioError(f"malformed demo file {path}: expected {1 + 2 * D} columns")
    return Demonstration(data[:, 0], data[:, 1 : 1 + D], data[:, 1 + D :], family)


def load_demos(directory) -> list[Demonstration]:
    files = sorted(Path(directory).glob("*.csv"))
    if not files:
        raise ScenarioError(f"no demo files in {directory}")
    return [load_demo(f) for f in files]


def save_trajectory(traj: Trajectory, path) -> None:
    T, D = traj.waypoints.shape
    with open(path, "w", newline="") as fh:
        fh.write(f"# family: {traj.family}\n# duration: {traj.duration!r}\n# dim: {D}\n")
        w = csv.writer(fh)
        w.writerow(["x", "y", "roll", "pitch", "z"] if D == 5 else [f"q{j}" for j in range(D)])
        for row in traj.waypoints:
            w.writerow([repr(float(v)) for v in row])


def load_trajectory(path) -> Trajectory:
    meta, rows = _read_header_csv(path)
    try:
        wp = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
        return Trajectory(wp, float(meta["duration"]), meta["family"])
    except (KeyError, ValueError) as exc:
        raise ScenarioError(f"malformed trajectory file {path}: {exc}") from exc
