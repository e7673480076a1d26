"""Tour of the bowl model: subregions, alignment headings and pushes.

Run with ``python3 tutorials/01_bowl_and_geometry.py``.
"""

import math

from lavascoop.geometry import BowlModel, alignment_angle, centroid_distance, classify_subregion, push_vector
from lavascoop.sim import depth_at_volume, volume_at_depth

bowl = BowlModel()
print(f"bowl radius {bowl.radius * 100:.1f} cm, depth {bowl.inner_depth * 100:.1f} cm")
for h in (5.5, 4.0, 2.0):
    v = volume_at_depth(h, bowl)
    print(f"  {h:3.1f} cm of food holds {v:6.2f} ml (inverse gives {depth_at_volume(v, bowl):.3f} cm)")

# Three tofu pieces: one hugging the wall, one mid-way, one near the middle.
pieces = [(0.033, 0.004), (-0.018, 0.010), (0.003, -0.004)]
print("\nsubregions")
for p in pieces:
    label = classify_subregion(p, pieces, bowl)
    print(f"  piece at ({p[0]:+.3f}, {p[1]:+.3f})  {centroid_distance(p, bowl) * 100:4.2f} cm from center -> {label.value}")

# The mid-way piece gets pushed toward the middle, stopping one piece radius short.
mid = pieces[1]
heading = alignment_angle(mid, (bowl.center.x, bowl.center.y))
push = push_vector(mid, bowl, stop_margin=0.006)
end = (mid[0] + push.x, mid[1] + push.y)
print(f"\npush heading {math.degrees(heading):.1f} deg, length {push.norm() * 100:.2f} cm")
print(f"piece ends {centroid_distance(end, bowl) * 100:.3f} cm from center")
