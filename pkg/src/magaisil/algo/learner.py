"""Per-agent learning state: policy, value and discriminator networks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import nn
from ..world import FOLLOWER_OBS_DIM, LEADER_OBS_DIM, N_ACTIONS
from .config import TrainConfig
from .trajectory import DemoSet, TrajectoryPool

AGENT_IDS = ("leader", "follower")


class TrainingFault(RuntimeError):
    """A non-finite value surfaced during training; the session must stop."""


def obs_dim_for(agent_id: str) -> int:
    if agent_id == "leader":
        return LEADER_OBS_DIM
    if agent_id == "follower":
        return FOLLOWER_OBS_DIM
    raise ValueError(f"unknown agent id: {agent_id}")


def obs_scale_for(agent_id: str) -> np.ndarray:
    """Fixed input scaling that maps raw observations into roughly [-1, 1].

    Sonar ranges divide by the 33 m cap; the follower's spacing divides by
    the same cap and its heading deviation by the pi/3 limit.
    """
    if agent_id == "leader":
        return np.full(LEADER_OBS_DIM, 1.0 / 33.0)
    return np.array([1.0 / 33.0, 3.0 / np.pi] + [1.0 / 33.0] * 6)


@dataclass(eq=False)
class AgentLearner:
    agent_id: str
    policy: nn.Mlp
    policy_adam: nn.AdamState
    value: nn.Mlp
    value_adam: nn.AdamState
    disc: nn.Mlp
    disc_adam: nn.AdamState
    demo_set: DemoSet
    pool: TrajectoryPool
    obs_scale: np.ndarray

    @property
    def obs_dim(self) -> int:
        return self.policy.in_dim

    def normalize_obs(self, obs: np.ndarray) -> np.ndarray:
        return np.asarray(obs, dtype=float) * self.obs_scale


def build_learner(
    agent_id: str,
    config: TrainConfig,
    rng: np.random.Generator,
    demo_set: DemoSet,
) -> AgentLearner:
    obs_dim = obs_dim_for(agent_id)
    if demo_set.agent_id != agent_id:
        raise ValueError(f"demo set for {demo_set.agent_id!r} given to {agent_id!r}")
    if demo_set.observations.shape[1] != obs_dim:
        raise ValueError(
            f"demo observation dim {demo_set.observations.shape[1]} != agent dim {obs_dim}"
        )
    hidden = list(config.hidden_sizes)
    policy = nn.build_mlp([obs_dim] + hidden + [N_ACTIONS], "softmax", rng, out_gain=0.01)
    value = nn.build_mlp([obs_dim] + hidden + [1], "scalar", rng, out_gain=1.0)
    disc = nn.build_mlp([obs_dim + N_ACTIONS] + hidden + [1], "sigmoid", rng, out_gain=1.0)
    policy_adam = nn.adam_state_for(policy, config.policy_lr)
    value_adam = nn.adam_state_for(value, config.value_lr)
    disc_adam = nn.adam_state_for(disc, config.disc_lr)
    for st in (policy_adam, value_adam, disc_adam):
        st.beta1, st.beta2, st.eps = config.adam_beta1, config.adam_beta2, config.adam_eps
    return AgentLearner(
        agent_id=agent_id,
        policy=policy,
        policy_adam=policy_adam,
        value=value,
        value_adam=value_adam,
        disc=disc,
        disc_adam=disc_adam,
        demo_set=demo_set,
        pool=TrajectoryPool(agent_id, capacity_pairs=config.pool_capacity_pairs),
        obs_scale=obs_scale_for(agent_id),
    )


def learner_to_dict(learner: AgentLearner) -> dict:
    return {
        "agent_id": learner.agent_id,
        "policy": nn.net_to_dict(learner.policy, learner.policy_adam),
        "value": nn.net_to_dict(learner.value, learner.value_adam),
        "disc": nn.net_to_dict(learner.disc, learner.disc_adam),
        "demo_set": {
            "agent_id": learner.demo_set.agent_id,
            "observations": learner.demo_set.observations.tolist(),
            "actions": learner.demo_set.actions.tolist(),
            "episode_bounds": [list(b) for b in learner.demo_set.episode_bounds],
            "provenance": learner.demo_set.provenance,
            "representative_path": (
                learner.demo_set.representative_path.tolist()
                if learner.demo_set.representative_path is not None
                else None
            ),
        },
        "pool": {
            "capacity_pairs": learner.pool.capacity_pairs,
            "trajectories": [
                {
                    "agent_id": t.agent_id,
                    "episode_index": t.episode_index,
                    "observations": t.observations.tolist(),
                    "actions": t.actions.tolist(),
                    "log_probs": t.log_probs.tolist(),
                    "values": t.values.tolist(),
                    "disc_rewards": t.disc_rewards.tolist(),
                    "term_reason": t.term_reason,
                    "bootstrap_value": t.bootstrap_value,
                    "eval_rewards": t.eval_rewards.tolist(),
                    "poses": t.poses.tolist(),
                    "partner_poses": t.partner_poses.tolist(),
                }
                for t in learner.pool.trajectories
            ],
        },
    }


def learner_from_dict(d: dict) -> AgentLearner:
    from .trajectory import Trajectory  # local to avoid cycle at import time

    policy, policy_adam = nn.net_from_dict(d["policy"])
    value, value_adam = nn.net_from_dict(d["value"])
    disc, disc_adam = nn.net_from_dict(d["disc"])
    ds = d["demo_set"]
    demo_set = DemoSet(
        agent_id=ds["agent_id"],
        observations=np.asarray(ds["observations"], dtype=float),
        actions=np.asarray(ds["actions"], dtype=int),
        episode_bounds=[tuple(b) for b in ds["episode_bounds"]],
        provenance=ds["provenance"],
        representative_path=(
            np.asarray(ds["representative_path"], dtype=float)
            if ds.get("representative_path") is not None
            else None
        ),
    )
    pool = TrajectoryPool(d["agent_id"], capacity_pairs=d["pool"]["capacity_pairs"])
    for t in d["pool"]["trajectories"]:
        pool.trajectories.append(
            Trajectory(
                agent_id=t["agent_id"],
                episode_index=t["episode_index"],
                observations=np.asarray(t["observations"], dtype=float),
                actions=np.asarray(t["actions"], dtype=int),
                log_probs=np.asarray(t["log_probs"], dtype=float),
                values=np.asarray(t["values"], dtype=float),
                disc_rewards=np.asarray(t["disc_rewards"], dtype=float),
                term_reason=t["term_reason"],
                bootstrap_value=t["bootstrap_value"],
                eval_rewards=np.asarray(t["eval_rewards"], dtype=float),
                poses=np.asarray(t["poses"], dtype=float),
                partner_poses=np.asarray(t.get("partner_poses", []), dtype=float),
            )
        )
    return AgentLearner(
        agent_id=d["agent_id"],
        policy=policy,
        policy_adam=policy_adam,
        value=value,
        value_adam=value_adam,
        disc=disc,
        disc_adam=disc_adam,
        demo_set=demo_set,
        pool=pool,
        obs_scale=obs_scale_for(d["agent_id"]),
    )
