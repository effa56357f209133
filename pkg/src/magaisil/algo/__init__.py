"""Learning stack: independent PPO per agent, adversarial discriminators,
and judged self-imitation trajectory pools.
"""

from .config import TrainConfig
from .episode import (
    AgentEpisodeReport,
    EpisodeReport,
    MODES,
    rollout_episode,
    run_episode,
    train_on_trajectory,
)
from .gae import compute_gae, gae_from_arrays
from .gail import (
    D_CLAMP,
    MAX_DISC_REWARD,
    discriminator_reward,
    discriminator_rewards_batch,
    encode_pairs,
    sample_pairs,
    update_discriminator,
)
from .judge import Judge, JudgeDecision, OracleJudge, pool_insert_and_maybe_replace
from .learner import (
    AGENT_IDS,
    AgentLearner,
    TrainingFault,
    build_learner,
    learner_from_dict,
    learner_to_dict,
    obs_dim_for,
    obs_scale_for,
)
from .ppo import greedy_action, ppo_update, select_action, state_value
from .trajectory import PROVENANCES, DemoSet, Trajectory, TrajectoryPool

__all__ = [
    "AGENT_IDS",
    "AgentEpisodeReport",
    "AgentLearner",
    "D_CLAMP",
    "DemoSet",
    "EpisodeReport",
    "Judge",
    "JudgeDecision",
    "MAX_DISC_REWARD",
    "MODES",
    "OracleJudge",
    "PROVENANCES",
    "TrainConfig",
    "TrainingFault",
    "Trajectory",
    "TrajectoryPool",
    "build_learner",
    "compute_gae",
    "discriminator_reward",
    "discriminator_rewards_batch",
    "encode_pairs",
    "gae_from_arrays",
    "greedy_action",
    "learner_from_dict",
    "learner_to_dict",
    "obs_dim_for",
    "obs_scale_for",
    "pool_insert_and_maybe_replace",
    "ppo_update",
    "rollout_episode",
    "run_episode",
    "sample_pairs",
    "select_action",
    "state_value",
    "train_on_trajectory",
    "update_discriminator",
]
