#!/usr/bin/env python3
"""Evaluate a trained checkpoint and draw its trajectories.

Expects a checkpoint from a CLI run, e.g.:

    magaisil gen-demos --task task1 --quality optimal --episodes 10 --seed 1 --out demos
    magaisil train --mode magail --task task1 --episodes 800 --seed 0 \
        --demos-leader demos/optimal_leader.jsonl \
        --demos-follower demos/optimal_follower.jsonl --out-dir runs/magail

    python gallery/05_evaluate_and_render.py runs/magail/checkpoint_final.json
"""

import sys
from pathlib import Path

from magaisil.evaluate import evaluate_checkpoint
from magaisil.render import corridor_svg, load_paths_file
from magaisil.world import load_task

if len(sys.argv) != 2:
    sys.exit(__doc__)
checkpoint = sys.argv[1]

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

# cross-task evaluation: the checkpoint was trained on task1 only
for task_id in ("task1", "task2", "task3"):
    report_path = out / f"eval_{task_id}.jsonl"
    summary = evaluate_checkpoint(checkpoint, task_id, episodes=5, out=report_path)
    print(f"{task_id}: success {summary.success_rate:.0%}, "
          f"leader eval {summary.mean_eval_reward['leader']:.3f}, "
          f"follower eval {summary.mean_eval_reward['follower']:.3f}")
    _, paths = load_paths_file(report_path)
    svg_path = out / f"paths_{task_id}.svg"
    svg_path.write_text(corridor_svg(load_task(task_id), paths))
    print(f"  wrote {svg_path}")
