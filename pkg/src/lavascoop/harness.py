"""Episode runner, experiment matrix and reports."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ContractViolation, LavaError, ScenarioError
from .perception import NoiseModel, observe
from .policy import POLICIES, Action, Policy
from .scenario import Scenario, initial_state, resolve_scenario
from .sim import (
    DEFAULT_PARAMS,
    BowlState,
    SimParams,
    apply_push,
    apply_scoop,
    drift_step,
    is_cleared,
    rotate_bowl,
)

SUCCESS, PARTIAL, FAILURE = "success", "partial", "failure"
CSV_COLUMNS = (
    "config_id",
    "policy",
    "food",
    "trial",
    "outcome",
    "attempts",
    "time_s",
    "spillage_ml",
    "breakage_n",
)
DEFAULT_PARTIAL_CREDIT = 0.5


@dataclass(frozen=True)
class TrialConfig:
    scenario: Union[str, Scenario]
    policy: str = "lava"
    trials: int = 10
    seed: int = 0
    noise: NoiseModel = field(default_factory=NoiseModel)
    max_attempts: int = 25
    clear_volume: float = 5.0
    params: SimParams = DEFAULT_PARAMS

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ContractViolation(f"unknown policy {self.policy!r}; choose from {POLICIES}")
        if self.trials < 1:
            raise ContractViolation("trials must be >= 1")
        if self.max_attempts < 1:
            raise ContractViolation("max_attempts must be >= 1")
        if self.clear_volume < 0:
            raise ContractViolation("clear_volume must be non-negative")

    def resolved(self) -> "TrialConfig":
        if isinstance(self.scenario, Scenario):
            return self
        return replace(self, scenario=resolve_scenario(self.scenario))

    @property
    def food(self) -> str:
        return self.resolved().scenario.name

    @property
    def config_id(self) -> str:
        return f"{self.food}/{self.policy}"


@dataclass(frozen=True)
class EpisodeResult:
    outcome: str
    attempts: int
    total_time: float
    spillage: float
    breakage: int
    cleared: bool


@dataclass(frozen=True)
class Step:
    """One executed action, kept for inspection of an episode."""

    action: Action
    volume_before: float
    volume_after: float
    scooped: float
    spilled: float
    broken: tuple
    scooped_chunks: tuple
    chunks: tuple  # every chunk after the action and the drift that follows it


def classify_outcome(cleared: bool, spillage: float, breakage: int) -> str:
    """Success needs a clean clearance; spilling while clearing is partial."""
    if not cleared or breakage > 0:
        return FAILURE
    return PARTIAL if spillage > 0 else SUCCESS


def trial_streams(seed: int, trial_index: int) -> list[np.random.Generator]:
    """Independent setup, observation, dynamics and drift streams for one trial."""
    ss = np.random.SeedSequence(seed ^ trial_index)
    return [np.random.default_rng(s) for s in ss.spawn(4)]


def simulate_episode(cfg: TrialConfig, trial_index: int, record: bool = False):
    """Run one trial; returns (EpisodeResult, final state, trace)."""
    cfg = cfg.resolved()
    setup_rng, obs_rng, dyn_rng, drift_rng = trial_streams(cfg.seed, trial_index)
    params = cfg.params
    state: BowlState = initial_state(cfg.scenario, setup_rng)
    policy = Policy(cfg.policy, bite_depth=params.bite_depth)
    trace = []
    time_s = 0.0
    steps = 0
    while (
        not is_cleared(state, cfg.clear_volume)
        and state.attempts < cfg.max_attempts
        and steps < 3 * cfg.max_attempts
    ):
        obs = observe(state, cfg.noise, obs_rng)
        action = policy.step(obs)
        if action.kind == "done":
            break
        before = state.bulk_volume
        if action.kind == "scoop":
            state, out = apply_scoop(state, action.trajectory, None, dyn_rng, params)
        elif action.kind == "push":
            state, out = apply_push(state, action.target_id, action.mid.push, dyn_rng, params)
        else:
            state = rotate_bowl(state, action.angle)
            out = None
        time_s += out.duration if out is not None else abs(action.angle) / params.rotate_speed
        after = state.bulk_volume
        state = drift_step(state, drift_rng, params)
        steps += 1
        if record:
            trace.append(
                Step(
                    action,
                    before,
                    after,
                    out.scooped_volume if out else 0.0,
                    out.spilled if out else 0.0,
                    out.broken if out else (),
                    out.scooped_chunks if out else (),
                    state.chunks,
                )
            )

    cleared = is_cleared(state, cfg.clear_volume)
    result = EpisodeResult(
        outcome=classify_outcome(cleared, state.spilled_total, state.broken_total),
        attempts=state.attempts,
        total_time=time_s,
        spillage=state.spilled_total,
        breakage=state.broken_total,
        cleared=cleared,
    )
    return result, state, trace


def run_episode(cfg: TrialConfig, trial_index: int) -> EpisodeResult:
    return simulate_episode(cfg, trial_index)[0]


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Row:
    config_id: str
    policy: str
    food: str
    trial: int
    outcome: str
    attempts: int
    time_s: float
    spillage_ml: float
    breakage_n: int

    def key(self):
        return (self.config_id, self.trial)


@dataclass(frozen=True)
class Aggregate:
    config_id: str
    policy: str
    food: str
    n: int
    success_rate: float
    success_stderr: float
    mean_time_s: float
    mean_spillage_ml: float
    mean_breakage_n: float
    mean_attempts: float


def _credit(outcome: str, partial_credit: float) -> float:
    return {SUCCESS: 1.0, PARTIAL: partial_credit, FAILURE: 0.0}[outcome]


def aggregate_rows(rows: Sequence[Row], partial_credit: float = DEFAULT_PARTIAL_CREDIT) -> list[Aggregate]:
    groups: dict[str, list[Row]] = {}
    for r in rows:
        groups.setdefault(r.config_id, []).append(r)
    out = []
    for cid in sorted(groups):
        g = groups[cid]
        scores = np.array([_credit(r.outcome, partial_credit) for r in g])
        n = len(g)
        stderr = float(np.std(scores, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        out.append(
            Aggregate(
                config_id=cid,
                policy=g[0].policy,
                food=g[0].food,
                n=n,
                success_rate=float(np.mean(scores)),
                success_stderr=stderr,
                mean_time_s=float(np.mean([r.time_s for r in g])),
                mean_spillage_ml=float(np.mean([r.spillage_ml for r in g])),
                mean_breakage_n=float(np.mean([r.breakage_n for r in g])),
                mean_attempts=float(np.mean([r.attempts for r in g])),
            )
        )
    return out


@dataclass
class Report:
    rows: list
    partial_credit: float = DEFAULT_PARTIAL_CREDIT

    def __post_init__(self):
        self.rows = sorted(self.rows, key=Row.key)

    @property
    def aggregates(self) -> list[Aggregate]:
        return aggregate_rows(self.rows, self.partial_credit)

    def aggregate(self, config_id: str) -> Aggregate:
        for a in self.aggregates:
            if a.config_id == config_id:
                return a
        raise KeyError(config_id)

    def by_cell(self) -> dict:
        return {(a.food, a.policy): a for a in self.aggregates}


def _run_config(cfg: TrialConfig) -> list[Row]:
    try:
        cfg = cfg.resolved()
    except ScenarioError as e:
        raise ScenarioError(f"config {cfg.scenario!r}/{cfg.policy}: {e}") from e
    rows = []
    for k in range(cfg.trials):
        try:
            res = run_episode(cfg, k)
        except LavaError as e:
            raise type(e)(f"config {cfg.config_id} trial {k}: {e}") from e
        rows.append(
            Row(
                cfg.config_id,
                cfg.policy,
                cfg.food,
                k,
                res.outcome,
                res.attempts,
                res.total_time,
                res.spillage,
                res.breakage,
            )
        )
    return rows


def run_experiment(
    matrix: Sequence[TrialConfig],
    partial_credit: float = DEFAULT_PARTIAL_CREDIT,
    workers: int = 1,
) -> Report:
    """Run every trial of every config; configs may run in worker processes."""
    if not matrix:
        raise ContractViolation("experiment matrix is empty")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_config, matrix))
    else:
        chunks = [_run_config(c) for c in matrix]
    return Report([r for rows in chunks for r in rows], partial_credit)


def _row_from_strings(d: dict) -> Row:
    return Row(
        d["config_id"],
        d["policy"],
        d["food"],
        int(d["trial"]),
        d["outcome"],
        int(d["attempts"]),
        float(d["time_s"]),
        float(d["spillage_ml"]),
        int(d["breakage_n"]),
    )


def emit_report(report: Report, fmt: str, out_path) -> Path:
    out_path = Path(out_path)
    if fmt == "csv":
        with open(out_path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in report.rows:
                w.writerow([repr(v) if isinstance(v, float) else v for v in (getattr(r, c) for c in CSV_COLUMNS)])
    elif fmt == "json":
        doc = {
            "partial_credit": report.partial_credit,
            "rows": [{c: getattr(r, c) for c in CSV_COLUMNS} for r in report.rows],
            "aggregates": [a.__dict__ for a in report.aggregates],
        }
        out_path.write_text(json.dumps(doc, indent=1) + "\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return out_path


def load_report(path, partial_credit: Optional[float] = None) -> Report:
    """Read a CSV or JSON report back; JSON keeps its own partial-credit mode."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text())
        credit = doc["partial_credit"] if partial_credit is None else partial_credit
        return Report([_row_from_strings(d) for d in doc["rows"]], credit)
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ScenarioError(f"{path}: unexpected report columns {reader.fieldnames}")
        rows = [_row_from_strings(d) for d in reader]
    credit = DEFAULT_PARTIAL_CREDIT if partial_credit is None else partial_credit
    return Report(rows, credit)


def suite_matrix(
    scenarios: Sequence, policies: Sequence[str] = POLICIES, **kw
) -> list[TrialConfig]:
    return [TrialConfig(sc, p, **kw) for sc in scenarios for p in policies]
