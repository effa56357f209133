"""Hand-defined evaluation rewards.

These score how well the vehicles hold the middle of the pipe and the
formation. They are measurement-only: the learning stack never sees them
as a training signal; they drive evaluation reports and the scripted
judge's accept/reject calls.
"""

from __future__ import annotations

import numpy as np

SAFE_WALL_DISTANCE = 17.3  # m, wall distance that centers the vehicle
WALL_REWARD_SCALE = 8.65  # m, half of the safe distance
TARGET_SPACING = 18.0  # m, desired leader-follower distance
SPACING_SCALE = 15.0


def eval_reward_leader(d: float) -> float:
    """Score in (-inf, 1] peaking at the safe wall distance 17.3 m."""
    return 1.0 - abs(d - SAFE_WALL_DISTANCE) / WALL_REWARD_SCALE


def eval_reward_follower(g: float, a: float, d: float) -> float:
    """Mean of a tracking term (heading deviation + spacing) and a wall term."""
    tracking = -(abs(a) * 3.0 / np.pi) + abs(1.0 - abs(g - TARGET_SPACING) / SPACING_SCALE)
    wall = 1.0 - abs(d - SAFE_WALL_DISTANCE) / WALL_REWARD_SCALE
    return 0.5 * tracking + 0.5 * wall


def leader_eval_from_obs(obs: np.ndarray) -> float:
    """Leader reward from a 6-value sector scan (uses the all-sector minimum)."""
    return eval_reward_leader(float(np.min(obs)))


def follower_eval_from_obs(obs: np.ndarray) -> float:
    """Follower reward from the 8-value observation [g, a, 6 sector minima]."""
    return eval_reward_follower(float(obs[0]), float(obs[1]), float(np.min(obs[2:])))
