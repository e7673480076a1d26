"""From noisy demonstrations to one template per scooping family.

Each family's demos are resampled to a common length and reduced to their
geometric median, which ignores the occasional sloppy demo better than a
plain average would.
"""

import numpy as np

from lavascoop.primitives import DirectScoop, WallGuidedScoop
from lavascoop.synthetic import synthesize_demos
from lavascoop.trajectory import aggregate_demos, adapt_trajectory

for family in ("wall-guided", "direct"):
    demos = synthesize_demos(family, n=25, seed=3)
    template = aggregate_demos(demos)
    per_demo = [aggregate_demos([d]).insertion for d in demos]
    print(f"{family}: {len(demos)} demos -> template of {len(template)} waypoints, {template.duration:.2f} s")
    print(
        f"  deepest point {template.insertion:.4f} m below the rim"
        f" (demos range {min(per_demo):.4f} to {max(per_demo):.4f} m)"
    )

# One outlier demo barely moves the median.
demos = synthesize_demos("direct", n=9, seed=4)
clean = aggregate_demos(demos)
demos[0] = type(demos[0])(demos[0].t, demos[0].q + 0.05, demos[0].qdot, demos[0].family)
shifted = aggregate_demos(demos)
print(f"\nmax waypoint shift after corrupting one of 9 demos by 5 cm: {np.abs(shifted.waypoints - clean.waypoints).max() * 100:.2f} cm")

# Templates are bent to the situation at hand.
direct = aggregate_demos(synthesize_demos("direct", n=25, seed=3))
for h in (5.5, 4.0, 2.0):
    print(f"direct scoop for {h} cm of food reaches {adapt_trajectory(direct, DirectScoop(h)).insertion:.4f} m")
wall = aggregate_demos(synthesize_demos("wall-guided", n=25, seed=3))
bent = adapt_trajectory(wall, WallGuidedScoop(0.03, 0, np.pi / 2))
print(f"wall-guided scoop toward +y starts at {np.round(bent.waypoints[0, :2], 4)} and ends at {np.round(bent.waypoints[-1, :2], 4)}")
