"""Deterministic 2D corridor world: geometry, sonar, dynamics, rewards."""

from .corridor import (
    Corridor,
    KinematicsConfig,
    ObstacleSpec,
    SHIPPED_TASKS,
    TaskFile,
    TaskFileError,
    load_task,
    read_task_file,
    resolve_task_path,
)
from .geometry import normalize_angle
from .rewards import (
    eval_reward_follower,
    eval_reward_leader,
    follower_eval_from_obs,
    leader_eval_from_obs,
)
from .simulate import (
    ACTION_DEFLECTIONS_DEG,
    ACTION_NAMES,
    COLLISION_DISTANCE,
    FOLLOWER_OBS_DIM,
    LEADER_OBS_DIM,
    N_ACTIONS,
    STRAIGHT,
    FollowerGeometry,
    Pose,
    StepOutcome,
    WorldState,
    follower_geometry,
    observe,
    raycast_sonar_pose,
    reset,
    step,
    termination_reason,
)
from .sonar import MAX_RANGE, N_BEAMS, N_SECTORS, InvalidPoseError, raycast_sonar

__all__ = [
    "ACTION_DEFLECTIONS_DEG",
    "ACTION_NAMES",
    "COLLISION_DISTANCE",
    "Corridor",
    "FOLLOWER_OBS_DIM",
    "FollowerGeometry",
    "InvalidPoseError",
    "KinematicsConfig",
    "LEADER_OBS_DIM",
    "MAX_RANGE",
    "N_ACTIONS",
    "N_BEAMS",
    "N_SECTORS",
    "ObstacleSpec",
    "Pose",
    "SHIPPED_TASKS",
    "STRAIGHT",
    "StepOutcome",
    "TaskFile",
    "TaskFileError",
    "WorldState",
    "eval_reward_follower",
    "eval_reward_leader",
    "follower_eval_from_obs",
    "follower_geometry",
    "leader_eval_from_obs",
    "load_task",
    "normalize_angle",
    "observe",
    "raycast_sonar",
    "raycast_sonar_pose",
    "read_task_file",
    "reset",
    "resolve_task_path",
    "step",
    "termination_reason",
]
