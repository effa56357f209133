"""Adversarial imitation signal: per-agent discriminators over
(observation, action) pairs and the reward they induce.
"""

from __future__ import annotations

import numpy as np

from .. import nn
from ..world import N_ACTIONS
from .learner import AgentLearner, TrainingFault

D_CLAMP = 1e-6  # discriminator outputs are clamped to [D_CLAMP, 1 - D_CLAMP] before any log
MAX_DISC_REWARD = -float(np.log(D_CLAMP))  # ~13.8155


def encode_pairs(learner: AgentLearner, obs: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """Discriminator input: scaled observation with a one-hot action appended."""
    obs = np.atleast_2d(np.asarray(obs, dtype=float)) * learner.obs_scale
    actions = np.atleast_1d(np.asarray(actions, dtype=int))
    onehot = np.zeros((len(actions), N_ACTIONS))
    onehot[np.arange(len(actions)), actions] = 1.0
    return np.concatenate([obs, onehot], axis=1)


def _clamped_disc(learner: AgentLearner, inputs: np.ndarray) -> tuple[np.ndarray, np.ndarray, dict]:
    raw, cache = nn.forward(learner.disc, inputs)
    d = raw[:, 0]
    return np.clip(d, D_CLAMP, 1.0 - D_CLAMP), d, cache


def discriminator_reward(learner: AgentLearner, obs: np.ndarray, action: int) -> float:
    """-log(1 - D(o, a)); higher when the pair looks demonstration-like."""
    d, _, _ = _clamped_disc(learner, encode_pairs(learner, obs, [action]))
    return float(-np.log(1.0 - d[0]))


def discriminator_rewards_batch(
    learner: AgentLearner, obs: np.ndarray, actions: np.ndarray
) -> np.ndarray:
    d, _, _ = _clamped_disc(learner, encode_pairs(learner, obs, actions))
    return -np.log(1.0 - d)


def sample_pairs(
    obs: np.ndarray, actions: np.ndarray, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw n pairs; sources shorter than n are sampled with replacement."""
    total = len(obs)
    if total == 0:
        raise ValueError("cannot sample from an empty pair source")
    idx = rng.choice(total, size=n, replace=total < n)
    return obs[idx], actions[idx]


def update_discriminator(
    learner: AgentLearner,
    agent_obs: np.ndarray,
    agent_actions: np.ndarray,
    expert_obs: np.ndarray,
    expert_actions: np.ndarray,
) -> float:
    """One Adam step pushing D toward 0 on agent pairs and 1 on expert pairs.

    Returns the pre-step adversarial loss
    mean(log D(agent)) + mean(log(1 - D(expert))).
    The descent step itself follows the cross-entropy gradient for the same
    targets (agent = 0, expert = 1): its per-output gradients match the
    adversarial loss exactly at D = 0.5 and share its sign everywhere, but
    stay bounded near the optima instead of blowing up, which keeps shared
    network features from being dragged toward one side.
    """
    if len(agent_obs) == 0 or len(expert_obs) == 0:
        raise ValueError("discriminator update needs non-empty pair batches")
    n_a, n_e = len(agent_obs), len(expert_obs)
    inputs = np.concatenate(
        [encode_pairs(learner, agent_obs, agent_actions), encode_pairs(learner, expert_obs, expert_actions)]
    )
    d_clamped, d_raw, cache = _clamped_disc(learner, inputs)
    da, de = d_clamped[:n_a], d_clamped[n_a:]
    loss = float(np.mean(np.log(da)) + np.mean(np.log(1.0 - de)))
    if not np.isfinite(loss):
        raise TrainingFault("non-finite discriminator loss")
    grad = np.empty(n_a + n_e)
    grad[:n_a] = 1.0 / (1.0 - da) / n_a
    grad[n_a:] = -1.0 / de / n_e
    grads = nn.backward(learner.disc, cache, grad[:, None])
    nn.adam_step(learner.disc, learner.disc_adam, grads)
    return loss
