"""Command-line entry point: ``lavascoop run | aggregate-demos | median-selftest``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .errors import LavaError
from .harness import DEFAULT_PARTIAL_CREDIT, TrialConfig, emit_report, run_experiment
from .perception import NoiseModel
from .policy import POLICIES
from .primitives import FAMILIES
from .scenario import default_suite, resolve_scenario
from .selftest import run_selftest
from .trajectory import aggregate_demos, load_demos, save_trajectory


def _load_config(ref: str) -> dict:
    """Scenarios plus optional run settings from a suite file, scenario file or name.

    A suite file is a JSON object with a ``scenarios`` list (names or paths,
    relative to the file) and optional ``trials``, ``seed``, ``max_attempts``,
    ``clear_volume``, ``partial_credit`` and ``noise`` keys.
    """
    if ref == "default-suite":
        return {"scenarios": default_suite()}
    p = Path(ref)
    if p.is_file():
        try:
            doc = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise LavaError(f"{p}: not valid JSON ({e})") from e
        if isinstance(doc, dict) and "scenarios" in doc:
            scs = []
            for s in doc["scenarios"]:
                local = p.parent / s
                scs.append(resolve_scenario(local if local.is_file() else s))
            return {**doc, "scenarios": scs}
    return {"scenarios": [resolve_scenario(ref)]}


def _cmd_run(args) -> int:
    conf = _load_config(args.config)
    noise_doc = conf.get("noise", {})
    base = NoiseModel(
        noise_doc.get("scoopnet", NoiseModel.scoopnet_acc),
        noise_doc.get("targetnet", NoiseModel.targetnet_acc),
        noise_doc.get("depthnet", NoiseModel.depthnet_acc),
    )
    overrides = {
        k: v
        for k, v in (
            ("scoopnet_acc", args.noise_scoopnet),
            ("targetnet_acc", args.noise_targetnet),
            ("depthnet_acc", args.noise_depthnet),
        )
        if v is not None
    }
    noise = replace(base, **overrides)
    policies = POLICIES if args.policy == "all" else (args.policy,)
    seed = args.seed if args.seed is not None else int(conf.get("seed", 0))
    matrix = []
    for sc in conf["scenarios"]:
        trials = args.trials or int(conf.get("trials", sc.trials))
        for pol in policies:
            matrix.append(
                TrialConfig(
                    sc,
                    pol,
                    trials=trials,
                    seed=seed,
                    noise=noise,
                    max_attempts=args.max_attempts or int(conf.get("max_attempts", 25)),
                    clear_volume=float(
                        args.clear_volume if args.clear_volume is not None else conf.get("clear_volume", 5.0)
                    ),
                )
            )
    credit = args.partial_credit
    if credit is None:
        credit = float(conf.get("partial_credit", DEFAULT_PARTIAL_CREDIT))
    report = run_experiment(matrix, partial_credit=credit, workers=args.workers)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = emit_report(report, args.format, out / f"report.{args.format}")
    print(f"partial credit {report.partial_credit}")
    for a in report.aggregates:
        print(
            f"{a.config_id:24s} success {a.success_rate:.3f} ± {a.success_stderr:.3f}  "
            f"time {a.mean_time_s:7.1f} s  spill {a.mean_spillage_ml:6.2f} ml  "
            f"breakage {a.mean_breakage_n:.2f}"
        )
    print(f"wrote {path}")
    return 0


def _cmd_aggregate(args) -> int:
    demos = load_demos(args.demos)
    if not demos:
        raise LavaError(f"no demonstrations found in {args.demos}")
    wrong = {d.family for d in demos} - {args.family}
    if wrong:
        raise LavaError(f"{args.demos} holds demos of family {sorted(wrong)}, expected {args.family}")
    traj = aggregate_demos(demos, args.T)
    save_trajectory(traj, args.out)
    print(f"aggregated {len(demos)} {args.family} demos -> {args.out}")
    return 0


def _cmd_selftest(args) -> int:
    checks = run_selftest(args.instances, args.seed)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:22s} {c.detail}")
    return 0 if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lavascoop", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment and write a report")
    r.add_argument("--config", required=True, help="suite file, scenario file, scenario name or 'default-suite'")
    r.add_argument("--policy", default="lava", choices=POLICIES + ("all",))
    r.add_argument("--trials", type=int, help="trials per config (default: from the scenario)")
    r.add_argument("--seed", type=int)
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--format", default="csv", choices=("csv", "json"))
    r.add_argument("--noise-scoopnet", type=float)
    r.add_argument("--noise-targetnet", type=float)
    r.add_argument("--noise-depthnet", type=float)
    r.add_argument("--max-attempts", type=int)
    r.add_argument("--clear-volume", type=float)
    r.add_argument("--partial-credit", type=float, help="credit for a partial success (0 disables)")
    r.add_argument("--workers", type=int, default=1)
    r.set_defaults(func=_cmd_run)

    a = sub.add_parser("aggregate-demos", help="median-aggregate demos into a template")
    a.add_argument("--family", required=True, choices=FAMILIES)
    a.add_argument("--demos", required=True, help="directory of demo CSV files")
    a.add_argument("--out", required=True)
    a.add_argument("--T", type=int, default=50)
    a.set_defaults(func=_cmd_aggregate)

    m = sub.add_parser("median-selftest", help="check the Weiszfeld solver against an oracle")
    m.add_argument("--instances", type=int, default=50)
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LavaError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
