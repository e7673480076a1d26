"""Step through one soup-with-tofu episode and print every decision.

Perception is noiseless here so each step is easy to follow; the broth
still nudges the tofu around between actions.
"""

from lavascoop.harness import TrialConfig, simulate_episode
from lavascoop.perception import NOISELESS

cfg = TrialConfig("soup_tofu", "lava", noise=NOISELESS)
result, final, trace = simulate_episode(cfg, 0, record=True)

for i, s in enumerate(trace):
    mid = s.action.mid
    name = type(mid).__name__ if mid is not None else s.action.kind
    target = getattr(mid, "target_id", None)
    extra = f" target {target}" if target is not None else ""
    picked = f", lifted chunks {s.scooped_chunks}" if s.scooped_chunks else ""
    print(f"{i:2d} {name:16s}{extra:10s} broth {s.volume_before:6.1f} -> {s.volume_after:6.1f} ml{picked}")

print(f"\noutcome {result.outcome} after {result.attempts} scoops, {result.total_time:.1f} s, spilled {result.spillage:.2f} ml")
