"""One training episode: joint rollout, adversarial reward, updates, judging."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..world import (
    TaskFile,
    follower_eval_from_obs,
    leader_eval_from_obs,
    observe,
    reset,
    step,
)
from .config import TrainConfig
from .gail import discriminator_reward, sample_pairs, update_discriminator
from .judge import Judge, JudgeDecision, pool_insert_and_maybe_replace
from .learner import AgentLearner
from .ppo import ppo_update, select_action, state_value
from .trajectory import Trajectory

MODES = ("magail", "magaisil")


@dataclass(frozen=True)
class AgentEpisodeReport:
    agent_id: str
    steps: int
    term_reason: str
    mean_disc_reward: float
    mean_eval_reward: float
    judged: bool
    accepted: bool | None
    pool_outcome: str | None  # pooled | replaced | rejected
    pool_pairs: int
    demo_provenance: str
    disc_loss: float
    policy_loss: float
    value_loss: float
    entropy: float


@dataclass(frozen=True)
class EpisodeReport:
    episode: int
    steps: int
    term_reason: str
    success: bool
    leader: AgentEpisodeReport
    follower: AgentEpisodeReport


def rollout_episode(
    leader: AgentLearner,
    follower: AgentLearner,
    task: TaskFile,
    rng: np.random.Generator,
    episode_index: int,
) -> tuple[Trajectory, Trajectory, str]:
    """Roll one joint episode, recording each agent's trajectory.

    Discriminator rewards come from each agent's current discriminator at
    the moment the pair is generated; evaluation rewards are recorded as a
    measurement sidecar only.
    """
    state = reset(task.corridor, task.kinematics)
    leader_obs, follower_obs = observe(state)

    buf = {
        "leader": {k: [] for k in ("obs", "act", "logp", "val", "disc_r", "eval_r", "pose")},
        "follower": {k: [] for k in ("obs", "act", "logp", "val", "disc_r", "eval_r", "pose")},
    }
    term_reason = "step_limit"
    while True:
        la, l_logp, l_val = select_action(leader, leader_obs, rng)
        fa, f_logp, f_val = select_action(follower, follower_obs, rng)
        lb, fb = buf["leader"], buf["follower"]
        lb["obs"].append(leader_obs)
        lb["act"].append(la)
        lb["logp"].append(l_logp)
        lb["val"].append(l_val)
        lb["disc_r"].append(discriminator_reward(leader, leader_obs, la))
        lb["eval_r"].append(leader_eval_from_obs(leader_obs))
        lb["pose"].append((state.leader.x, state.leader.y))
        fb["obs"].append(follower_obs)
        fb["act"].append(fa)
        fb["logp"].append(f_logp)
        fb["val"].append(f_val)
        fb["disc_r"].append(discriminator_reward(follower, follower_obs, fa))
        fb["eval_r"].append(follower_eval_from_obs(follower_obs))
        fb["pose"].append((state.follower.x, state.follower.y))

        state, outcome = step(state, la, fa)
        leader_obs, follower_obs = outcome.leader_obs, outcome.follower_obs
        if outcome.done:
            term_reason = outcome.term_reason
            break

    truncated = term_reason == "step_limit"

    def build(
        learner: AgentLearner, agent_buf: dict, partner_buf: dict, final_obs: np.ndarray
    ) -> Trajectory:
        return Trajectory(
            agent_id=learner.agent_id,
            episode_index=episode_index,
            observations=np.asarray(agent_buf["obs"], dtype=float),
            actions=np.asarray(agent_buf["act"], dtype=int),
            log_probs=np.asarray(agent_buf["logp"], dtype=float),
            values=np.asarray(agent_buf["val"], dtype=float),
            disc_rewards=np.asarray(agent_buf["disc_r"], dtype=float),
            term_reason=term_reason,
            bootstrap_value=state_value(learner, final_obs) if truncated else 0.0,
            eval_rewards=np.asarray(agent_buf["eval_r"], dtype=float),
            poses=np.asarray(agent_buf["pose"], dtype=float),
            partner_poses=np.asarray(partner_buf["pose"], dtype=float),
        )

    return (
        build(leader, buf["leader"], buf["follower"], leader_obs),
        build(follower, buf["follower"], buf["leader"], follower_obs),
        term_reason,
    )


def train_on_trajectory(
    learner: AgentLearner,
    trajectory: Trajectory,
    config: TrainConfig,
    rng: np.random.Generator,
) -> dict:
    """The per-episode update block: discriminator first, then the generator."""
    disc_loss = 0.0
    for _ in range(config.disc_updates_per_episode):
        a_obs, a_act = sample_pairs(
            trajectory.observations, trajectory.actions, config.pair_batch, rng
        )
        e_obs, e_act = sample_pairs(
            learner.demo_set.observations, learner.demo_set.actions, config.pair_batch, rng
        )
        disc_loss += update_discriminator(learner, a_obs, a_act, e_obs, e_act)
    disc_loss /= max(config.disc_updates_per_episode, 1)
    stats = ppo_update(learner, trajectory, config, rng)
    stats["disc_loss"] = disc_loss
    return stats


def run_episode(
    leader: AgentLearner,
    follower: AgentLearner,
    task: TaskFile,
    config: TrainConfig,
    rng: np.random.Generator,
    episode_index: int,
    mode: str = "magail",
    judge: Judge | None = None,
) -> tuple[EpisodeReport, dict[str, Trajectory]]:
    """Roll, learn, and (in magaisil mode) judge one episode.

    In magail mode the demo sets are never touched. In magaisil mode both
    trajectories are submitted to the judge after the updates; accepted
    ones accumulate in the per-agent pools, which replace the demo sets
    when full.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "magaisil" and judge is None:
        raise ValueError("magaisil mode needs a judge")

    l_traj, f_traj, term_reason = rollout_episode(leader, follower, task, rng, episode_index)
    trajs = {"leader": l_traj, "follower": f_traj}
    stats = {
        "leader": train_on_trajectory(leader, l_traj, config, rng),
        "follower": train_on_trajectory(follower, f_traj, config, rng),
    }

    decisions: dict[str, JudgeDecision | None] = {"leader": None, "follower": None}
    outcomes: dict[str, str | None] = {"leader": None, "follower": None}
    if mode == "magaisil":
        judge.submit(l_traj, leader.demo_set)
        judge.submit(f_traj, follower.demo_set)
        for learner, traj in ((leader, l_traj), (follower, f_traj)):
            decision = judge.wait(traj.trajectory_id)
            decisions[learner.agent_id] = decision
            outcomes[learner.agent_id] = pool_insert_and_maybe_replace(learner, traj, decision)

    def agent_report(learner: AgentLearner, traj: Trajectory) -> AgentEpisodeReport:
        decision = decisions[learner.agent_id]
        s = stats[learner.agent_id]
        return AgentEpisodeReport(
            agent_id=learner.agent_id,
            steps=len(traj),
            term_reason=term_reason,
            mean_disc_reward=traj.mean_disc_reward,
            mean_eval_reward=traj.mean_eval_reward,
            judged=decision is not None,
            accepted=None if decision is None else decision.accept,
            pool_outcome=outcomes[learner.agent_id],
            pool_pairs=learner.pool.total_pairs,
            demo_provenance=learner.demo_set.provenance,
            disc_loss=s["disc_loss"],
            policy_loss=s["policy_loss"],
            value_loss=s["value_loss"],
            entropy=s["entropy"],
        )

    report = EpisodeReport(
        episode=episode_index,
        steps=len(l_traj),
        term_reason=term_reason,
        success=term_reason == "goal_reached",
        leader=agent_report(leader, l_traj),
        follower=agent_report(follower, f_traj),
    )
    return report, trajs
