#!/usr/bin/env python3
"""Record optimal and suboptimal demonstrations and compare their quality.

The suboptimal pilot weaves around the middle of the pipe, reacts late and
occasionally mashes a random action; the evaluation rewards make the gap
measurable. Writes demo files under gallery/out/demos/.
"""

from pathlib import Path

from magaisil.demos import record_demos
from magaisil.world import read_task_file

task = read_task_file("task1")
out = Path(__file__).parent / "out" / "demos"

for quality in ("optimal", "suboptimal"):
    rep = record_demos(task, quality, episodes=5, seed=1, out_dir=out)
    print(f"{quality:10s}: {rep.episodes} episodes in {rep.attempts} attempts, "
          f"mean steps {rep.mean_steps:.0f}")
    for agent, mean in rep.mean_eval_reward.items():
        print(f"    {agent:8s} mean eval reward {mean:.3f}  ({rep.files[agent].name})")

print("\nthe optimal-vs-suboptimal gap is what the judged self-imitation "
      "mechanism later has to close and surpass")
