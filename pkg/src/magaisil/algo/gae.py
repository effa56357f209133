"""Generalized advantage estimation."""

from __future__ import annotations

import numpy as np


def gae_from_arrays(
    rewards: np.ndarray,
    values: np.ndarray,
    bootstrap_value: float,
    gamma: float,
    lam: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Exponentially weighted TD advantages over one episode.

    ``bootstrap_value`` is the value of the state after the last step: zero
    when the episode genuinely terminated, V(s_T) when it was cut off by
    the step limit. Returns (advantages, returns = advantages + values).
    """
    rewards = np.asarray(rewards, dtype=float)
    values = np.asarray(values, dtype=float)
    n = len(rewards)
    if n == 0:
        raise ValueError("empty episode")
    advantages = np.empty(n)
    next_value = bootstrap_value
    acc = 0.0
    for t in range(n - 1, -1, -1):
        delta = rewards[t] + gamma * next_value - values[t]
        acc = delta + gamma * lam * acc
        advantages[t] = acc
        next_value = values[t]
    return advantages, advantages + values


def compute_gae(trajectory, gamma: float, gae_lambda: float) -> tuple[np.ndarray, np.ndarray]:
    """GAE over a recorded trajectory (see ``gae_from_arrays``)."""
    return gae_from_arrays(
        trajectory.disc_rewards,
        trajectory.values,
        trajectory.bootstrap_value,
        gamma,
        gae_lambda,
    )
