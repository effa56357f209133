"""Episode records and demonstration pools."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..world import follower_eval_from_obs, leader_eval_from_obs

PROVENANCES = ("expert-optimal", "expert-suboptimal", "self-generated")


def eval_reward_fn(agent_id: str):
    if agent_id == "leader":
        return leader_eval_from_obs
    if agent_id == "follower":
        return follower_eval_from_obs
    raise ValueError(f"unknown agent id: {agent_id}")


@dataclass(eq=False)
class Trajectory:
    """One agent's record of one episode.

    ``eval_rewards`` and ``poses`` are measurement sidecars: the judge and
    UI read them, the gradient path never does.
    """

    agent_id: str
    episode_index: int
    observations: np.ndarray  # (T, obs_dim)
    actions: np.ndarray  # (T,) int
    log_probs: np.ndarray  # (T,)
    values: np.ndarray  # (T,)
    disc_rewards: np.ndarray  # (T,)
    term_reason: str
    bootstrap_value: float = 0.0
    eval_rewards: np.ndarray = field(default_factory=lambda: np.empty(0))
    poses: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))  # own (x, y) path
    partner_poses: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    def __post_init__(self):
        if len(self.observations) == 0:
            raise ValueError("trajectory must have at least one step")
        n = len(self.observations)
        for name in ("actions", "log_probs", "values", "disc_rewards"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length {len(getattr(self, name))} != {n} steps")

    @property
    def trajectory_id(self) -> str:
        return f"{self.agent_id}-ep{self.episode_index}"

    def __len__(self) -> int:
        return len(self.observations)

    @property
    def mean_eval_reward(self) -> float:
        return float(np.mean(self.eval_rewards))

    @property
    def mean_disc_reward(self) -> float:
        return float(np.mean(self.disc_rewards))


@dataclass(eq=False)
class DemoSet:
    """Flattened (observation, action) pairs an agent currently imitates."""

    agent_id: str
    observations: np.ndarray  # (P, obs_dim)
    actions: np.ndarray  # (P,)
    episode_bounds: list[tuple[int, int]]
    provenance: str
    representative_path: np.ndarray | None = None
    mean_eval_reward: float = field(init=False)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")
        if len(self.observations) == 0:
            raise ValueError("demo set must be non-empty")
        if len(self.observations) != len(self.actions):
            raise ValueError("observations and actions must align")
        fn = eval_reward_fn(self.agent_id)
        self.mean_eval_reward = float(np.mean([fn(o) for o in self.observations]))

    @property
    def total_pairs(self) -> int:
        return len(self.observations)

    @classmethod
    def from_episodes(
        cls,
        agent_id: str,
        episodes: list[tuple[np.ndarray, np.ndarray]],
        provenance: str,
        representative_path: np.ndarray | None = None,
    ) -> "DemoSet":
        bounds, start = [], 0
        for obs, _ in episodes:
            bounds.append((start, start + len(obs)))
            start += len(obs)
        return cls(
            agent_id=agent_id,
            observations=np.concatenate([o for o, _ in episodes]),
            actions=np.concatenate([a for _, a in episodes]),
            episode_bounds=bounds,
            provenance=provenance,
            representative_path=representative_path,
        )


@dataclass(eq=False)
class TrajectoryPool:
    """Judge-accepted trajectories waiting to replace the demo set."""

    agent_id: str
    capacity_pairs: int = 2000
    trajectories: list[Trajectory] = field(default_factory=list)

    @property
    def total_pairs(self) -> int:
        return sum(len(t) for t in self.trajectories)

    def clear(self):
        self.trajectories = []

    def to_demo_set(self) -> DemoSet:
        episodes = [(t.observations, t.actions) for t in self.trajectories]
        rep = self.trajectories[0].poses if len(self.trajectories) else None
        return DemoSet.from_episodes(
            self.agent_id, episodes, "self-generated", representative_path=rep
        )
