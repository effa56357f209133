"""Training hyperparameters shared by both agents."""

from __future__ import annotations

from dataclasses import dataclass, field, fields


@dataclass(frozen=True)
class TrainConfig:
    gamma: float = 0.99
    entropy_weight: float = 0.01
    clip_epsilon: float = 0.09
    pair_batch: int = 256  # state-action pairs per discriminator side / PPO minibatch cap
    disc_updates_per_episode: int = 3
    gen_updates_per_episode: int = 9
    pool_capacity_pairs: int = 2000
    gae_lambda: float = 1.0
    policy_lr: float = 3e-4
    value_lr: float = 1e-3
    disc_lr: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    value_coef: float = 0.5
    hidden_sizes: tuple[int, ...] = (64, 64)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must be in (0, 1)")
        if self.clip_epsilon <= 0.0:
            raise ValueError("clip_epsilon must be positive")
        if self.pair_batch < 1:
            raise ValueError("pair_batch must be at least 1")
        if self.pool_capacity_pairs <= 0:
            raise ValueError("pool_capacity_pairs must be positive")
        if not 0.0 <= self.gae_lambda <= 1.0:
            raise ValueError("gae_lambda must be in [0, 1]")
        if self.disc_updates_per_episode < 0 or self.gen_updates_per_episode < 0:
            raise ValueError("update counts must be non-negative")

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["hidden_sizes"] = list(self.hidden_sizes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        kwargs = {k: v for k, v in d.items() if k in known}
        if "hidden_sizes" in kwargs:
            kwargs["hidden_sizes"] = tuple(kwargs["hidden_sizes"])
        return cls(**kwargs)
