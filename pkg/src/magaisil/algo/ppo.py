"""Clipped-surrogate policy optimization with an entropy bonus."""

from __future__ import annotations

import numpy as np

from .. import nn
from .config import TrainConfig
from .gae import compute_gae
from .learner import AgentLearner, TrainingFault
from .trajectory import Trajectory

_LOG_FLOOR = 1e-12


def select_action(
    learner: AgentLearner, obs: np.ndarray, rng: np.random.Generator
) -> tuple[int, float, float]:
    """Sample an action from the policy; also return its log-probability and
    the value estimate the critic assigns to the observation."""
    x = learner.normalize_obs(obs)
    probs, _ = nn.forward(learner.policy, x)
    if not np.all(np.isfinite(probs)):
        raise TrainingFault(f"non-finite policy output for {learner.agent_id}")
    action = int(rng.choice(len(probs), p=probs))
    value, _ = nn.forward(learner.value, x)
    if not np.isfinite(value[0]):
        raise TrainingFault(f"non-finite value output for {learner.agent_id}")
    log_prob = float(np.log(max(probs[action], _LOG_FLOOR)))
    return action, log_prob, float(value[0])


def greedy_action(learner: AgentLearner, obs: np.ndarray) -> int:
    probs, _ = nn.forward(learner.policy, learner.normalize_obs(obs))
    return int(np.argmax(probs))


def state_value(learner: AgentLearner, obs: np.ndarray) -> float:
    value, _ = nn.forward(learner.value, learner.normalize_obs(obs))
    return float(value[0])


def entropy_of(probs: np.ndarray) -> np.ndarray:
    p = np.clip(probs, _LOG_FLOOR, 1.0)
    return -(p * np.log(p)).sum(axis=-1)


def ppo_update(
    learner: AgentLearner,
    trajectory: Trajectory,
    config: TrainConfig,
    rng: np.random.Generator,
) -> dict:
    """Run the configured number of generator updates on one episode.

    Each update takes one Adam step on a random minibatch of at most
    ``pair_batch`` steps: the policy maximizes the clipped surrogate plus
    the entropy bonus, the critic regresses onto the GAE returns.
    Advantages are normalized once per episode.
    """
    advantages, returns = compute_gae(trajectory, config.gamma, config.gae_lambda)
    advantages = (advantages - advantages.mean()) / (advantages.std() + 1e-8)

    obs = np.atleast_2d(trajectory.observations) * learner.obs_scale
    actions = trajectory.actions
    old_log_probs = trajectory.log_probs
    n = len(trajectory)
    batch = min(config.pair_batch, n)
    eps = config.clip_epsilon
    stats = {"policy_loss": 0.0, "value_loss": 0.0, "entropy": 0.0}

    for _ in range(config.gen_updates_per_episode):
        idx = rng.permutation(n)[:batch]
        x = obs[idx]
        adv = advantages[idx]
        ret = returns[idx]
        act = actions[idx]
        old_lp = old_log_probs[idx]

        probs, cache = nn.forward(learner.policy, x)
        p_act = np.clip(probs[np.arange(batch), act], _LOG_FLOOR, 1.0)
        ratio = np.exp(np.log(p_act) - old_lp)
        clipped = np.clip(ratio, 1.0 - eps, 1.0 + eps)
        surrogate = float(np.mean(np.minimum(ratio * adv, clipped * adv)))
        ent = entropy_of(probs)
        objective = surrogate + config.entropy_weight * float(np.mean(ent))
        if not np.isfinite(objective):
            raise TrainingFault(f"non-finite policy objective for {learner.agent_id}")

        # gradient of the maximized objective wrt the probability vector;
        # the clipped branch contributes nothing where the clip is active
        unclipped_active = ratio * adv <= clipped * adv + 1e-12
        dprobs = np.zeros_like(probs)
        dprobs[np.arange(batch), act] = np.where(
            unclipped_active, adv * np.exp(-old_lp), 0.0
        )
        p_safe = np.clip(probs, _LOG_FLOOR, 1.0)
        dprobs += config.entropy_weight * (-(np.log(p_safe) + 1.0))
        grads = nn.backward(learner.policy, cache, -dprobs / batch)  # minimize -objective
        nn.adam_step(learner.policy, learner.policy_adam, grads)

        values, vcache = nn.forward(learner.value, x)
        verr = values[:, 0] - ret
        value_loss = 0.5 * float(np.mean(verr**2))
        if not np.isfinite(value_loss):
            raise TrainingFault(f"non-finite value loss for {learner.agent_id}")
        vgrads = nn.backward(
            learner.value, vcache, (config.value_coef * verr / batch)[:, None]
        )
        nn.adam_step(learner.value, learner.value_adam, vgrads)

        stats["policy_loss"] += -objective / config.gen_updates_per_episode
        stats["value_loss"] += value_loss / config.gen_updates_per_episode
        stats["entropy"] += float(np.mean(ent)) / config.gen_updates_per_episode
    return stats
