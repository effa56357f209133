#!/usr/bin/env python3
"""The self-imitation mechanism in action, with the scripted judge.

Starts from deliberately weak demonstrations. Episodes the judge scores
above the current demo set pool up; when the pool holds 2000 state-action
pairs it replaces the demo set outright and the discriminator starts
pulling the policies toward the agents' own better behavior. Expect a few
minutes of CPU.
"""

from pathlib import Path

import numpy as np

from magaisil.algo import OracleJudge, TrainConfig, build_learner, run_episode
from magaisil.demos import demo_set_from_file, record_demos
from magaisil.world import read_task_file

task = read_task_file("task1")
out = Path(__file__).parent / "out" / "demos"
rep = record_demos(task, "suboptimal", episodes=5, seed=1, out_dir=out)
print(f"starting demo means: leader {rep.mean_eval_reward['leader']:.3f}, "
      f"follower {rep.mean_eval_reward['follower']:.3f}\n")

config = TrainConfig(seed=0)
rng = np.random.default_rng(config.seed)
leader = build_learner("leader", config, rng, demo_set_from_file(rep.files["leader"]))
follower = build_learner("follower", config, rng, demo_set_from_file(rep.files["follower"]))
judge = OracleJudge()

for ep in range(200):
    report, _ = run_episode(
        leader, follower, task, config, rng, ep, mode="magaisil", judge=judge
    )
    for agent_report, learner in ((report.leader, leader), (report.follower, follower)):
        if agent_report.pool_outcome == "replaced":
            print(f"ep {ep:3d}: {learner.agent_id} demos replaced -> "
                  f"{learner.demo_set.total_pairs} self-generated pairs, "
                  f"mean eval {learner.demo_set.mean_eval_reward:.3f}")

print("\nfinal demo sets:")
for learner in (leader, follower):
    d = learner.demo_set
    print(f"  {learner.agent_id:8s}: {d.provenance}, {d.total_pairs} pairs, "
          f"mean eval {d.mean_eval_reward:.3f}")
