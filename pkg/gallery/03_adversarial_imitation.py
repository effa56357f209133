#!/usr/bin/env python3
"""A small adversarial-imitation run, watched through its metrics.

Trains both agents against the optimal demonstrations for a modest number
of episodes (enough to see discriminator rewards and episode lengths move;
the full desk-scale runs live in the acceptance suite). Expect a few
minutes of CPU.
"""

from pathlib import Path

import numpy as np

from magaisil.algo import TrainConfig, build_learner, run_episode
from magaisil.demos import demo_set_from_file, record_demos
from magaisil.world import read_task_file

task = read_task_file("task1")
out = Path(__file__).parent / "out" / "demos"
rep = record_demos(task, "optimal", episodes=5, seed=1, out_dir=out)

config = TrainConfig(seed=0)
rng = np.random.default_rng(config.seed)
leader = build_learner("leader", config, rng, demo_set_from_file(rep.files["leader"]))
follower = build_learner("follower", config, rng, demo_set_from_file(rep.files["follower"]))

print("ep | steps | end            | disc reward (L,F) | eval reward (L,F)")
for ep in range(150):
    report, _ = run_episode(leader, follower, task, config, rng, ep, mode="magail")
    if (ep + 1) % 25 == 0:
        print(
            f"{ep + 1:3d} | {report.steps:5d} | {report.term_reason:14s} | "
            f"({report.leader.mean_disc_reward:4.2f}, {report.follower.mean_disc_reward:4.2f})   | "
            f"({report.leader.mean_eval_reward:4.2f}, {report.follower.mean_eval_reward:4.2f})"
        )

print("\nepisode lengths grow as the pair survives the first corner;")
print("train for ~600-800 episodes to reach the goal consistently")
