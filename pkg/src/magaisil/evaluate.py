"""Greedy-policy evaluation of a trained checkpoint."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algo import greedy_action
from .service.session import load_checkpoint, restore_learners
from .world import (
    follower_eval_from_obs,
    leader_eval_from_obs,
    observe,
    read_task_file,
    reset,
    step,
)

REPORT_FORMAT = "magaisil-eval"
REPORT_VERSION = 1


@dataclass(frozen=True)
class EvalSummary:
    task_id: str
    episodes: int
    success_rate: float
    mean_eval_reward: dict[str, float]
    mean_steps: float
    report_path: Path | None


def rollout_greedy(leader, follower, task) -> dict:
    """One argmax-policy episode; returns the per-step series used for
    reports and plots."""
    state = reset(task.corridor, task.kinematics)
    leader_obs, follower_obs = observe(state)
    series = {
        "leader_path": [],
        "follower_path": [],
        "d_leader": [],
        "d_follower": [],
        "g": [],
        "a": [],
        "r_leader": [],
        "r_follower": [],
    }
    while True:
        la = greedy_action(leader, leader_obs)
        fa = greedy_action(follower, follower_obs)
        series["leader_path"].append([state.leader.x, state.leader.y])
        series["follower_path"].append([state.follower.x, state.follower.y])
        series["d_leader"].append(float(np.min(leader_obs)))
        series["d_follower"].append(float(np.min(follower_obs[2:])))
        series["g"].append(float(follower_obs[0]))
        series["a"].append(float(follower_obs[1]))
        series["r_leader"].append(leader_eval_from_obs(leader_obs))
        series["r_follower"].append(follower_eval_from_obs(follower_obs))
        state, out = step(state, la, fa)
        leader_obs, follower_obs = out.leader_obs, out.follower_obs
        if out.done:
            break
    return {
        "steps": len(series["leader_path"]),
        "term_reason": out.term_reason,
        "success": out.term_reason == "goal_reached",
        "progress": out.progress,
        "mean_eval_reward": {
            "leader": float(np.mean(series["r_leader"])),
            "follower": float(np.mean(series["r_follower"])),
        },
        "series": series,
    }


def evaluate_checkpoint(
    checkpoint: str | Path,
    task: str | Path,
    episodes: int = 20,
    out: str | Path | None = None,
) -> EvalSummary:
    """Evaluate a checkpoint's greedy policies on a task.

    The task may differ from the training task (the adaptation setting).
    Writes a line-delimited report when ``out`` is given: a header line,
    then one record per episode with the full per-step series.
    """
    blob = load_checkpoint(checkpoint)
    leader, follower = restore_learners(blob)
    task_file = read_task_file(task)

    rows = [rollout_greedy(leader, follower, task_file) for _ in range(episodes)]
    successes = sum(1 for r in rows if r["success"])
    summary = EvalSummary(
        task_id=task_file.task_id,
        episodes=episodes,
        success_rate=successes / episodes,
        mean_eval_reward={
            "leader": float(np.mean([r["mean_eval_reward"]["leader"] for r in rows])),
            "follower": float(np.mean([r["mean_eval_reward"]["follower"] for r in rows])),
        },
        mean_steps=float(np.mean([r["steps"] for r in rows])),
        report_path=Path(out) if out else None,
    )
    if out is not None:
        lines = [
            json.dumps(
                {
                    "format": REPORT_FORMAT,
                    "version": REPORT_VERSION,
                    "task": task_file.task_id,
                    "checkpoint": str(checkpoint),
                    "episodes": episodes,
                }
            )
        ]
        for i, r in enumerate(rows):
            lines.append(
                json.dumps(
                    {
                        "episode": i,
                        "steps": r["steps"],
                        "term_reason": r["term_reason"],
                        "success": r["success"],
                        "progress": round(r["progress"], 3),
                        "mean_eval_reward": {
                            k: round(v, 6) for k, v in r["mean_eval_reward"].items()
                        },
                        "leader_path": np.round(r["series"]["leader_path"], 3).tolist(),
                        "follower_path": np.round(r["series"]["follower_path"], 3).tolist(),
                        "d_leader": np.round(r["series"]["d_leader"], 3).tolist(),
                        "d_follower": np.round(r["series"]["d_follower"], 3).tolist(),
                        "g": np.round(r["series"]["g"], 3).tolist(),
                        "a": np.round(r["series"]["a"], 4).tolist(),
                    }
                )
            )
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
        tmp.replace(path)
    return summary
