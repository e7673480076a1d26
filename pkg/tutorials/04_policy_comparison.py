"""Compare LAVA against its two baselines on the built-in food suite.

Takes around ten seconds with 100 trials per cell. Pass a smaller count as
the first argument for a quicker look.
"""

import sys

from lavascoop.harness import run_experiment, suite_matrix
from lavascoop.scenario import default_suite

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 100
report = run_experiment(suite_matrix(default_suite(), trials=trials, seed=0))
cells = report.by_cell()
foods = sorted({food for food, _ in cells})

print(f"{'food':10s} " + " ".join(f"{p:>18s}" for p in ("lava", "lava-low", "fts")))
for food in foods:
    row = []
    for p in ("lava", "lava-low", "fts"):
        a = cells[food, p]
        row.append(f"{a.success_rate:5.2f}±{a.success_stderr:4.2f} sp{a.mean_spillage_ml:5.1f}")
    print(f"{food:10s} " + " ".join(f"{r:>18s}" for r in row))

print("\nsuccess counts partial outcomes (spilled while clearing) at half credit; sp is mean spillage in ml")
