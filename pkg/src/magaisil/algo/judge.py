"""Trajectory judging: decisions, the scripted oracle, and the protocol a
live (human) judge implements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from .trajectory import DemoSet, Trajectory


@dataclass(frozen=True)
class JudgeDecision:
    trajectory_id: str
    agent_id: str
    accept: bool
    source: str  # "oracle" | "human"
    latency: float  # seconds; the timeout value when a human never answered


class Judge(Protocol):
    """Two-phase judging so both agents' episodes can be shown at once."""

    def submit(self, trajectory: Trajectory, demo_set: DemoSet) -> None: ...

    def wait(self, trajectory_id: str) -> JudgeDecision: ...


class OracleJudge:
    """Scripted stand-in for a human trainer.

    Accepts a trajectory iff its mean per-step evaluation reward strictly
    exceeds the mean over the agent's current demo set. Equality rejects.
    """

    def __init__(self):
        self._decisions: dict[str, JudgeDecision] = {}

    def submit(self, trajectory: Trajectory, demo_set: DemoSet) -> None:
        accept = trajectory.mean_eval_reward > demo_set.mean_eval_reward
        self._decisions[trajectory.trajectory_id] = JudgeDecision(
            trajectory_id=trajectory.trajectory_id,
            agent_id=trajectory.agent_id,
            accept=bool(accept),
            source="oracle",
            latency=0.0,
        )

    def wait(self, trajectory_id: str) -> JudgeDecision:
        return self._decisions.pop(trajectory_id)


def pool_insert_and_maybe_replace(learner, trajectory: Trajectory, decision: JudgeDecision) -> str:
    """Apply a judge decision to the learner's pool.

    Accepted trajectories join the pool; once the pooled pair count reaches
    capacity the demo set is atomically replaced by the pool contents
    (provenance becomes self-generated) and the pool is emptied.
    Returns one of "pooled", "replaced", "rejected".
    """
    if decision.trajectory_id != trajectory.trajectory_id:
        raise ValueError("decision does not match trajectory")
    if not decision.accept:
        return "rejected"
    pool = learner.pool
    pool.trajectories.append(trajectory)
    if pool.total_pairs >= pool.capacity_pairs:
        learner.demo_set = pool.to_demo_set()
        pool.clear()
        return "replaced"
    return "pooled"
