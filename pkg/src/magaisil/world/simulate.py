"""Two-vehicle episode dynamics inside a corridor.

Both vehicles are planar unicycles moving at constant forward speed; the
five discrete actions command fixed steering deflections. The leader drives
the pipe, the follower holds formation behind it. All functions are pure:
``step`` maps (state, actions) to a fresh state plus an outcome record.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .corridor import Corridor, KinematicsConfig
from .geometry import normalize_angle
from .sonar import MAX_RANGE, beam_ranges, sector_minima
from . import sonar

# action index -> steering deflection; positive turns left (counterclockwise)
ACTION_DEFLECTIONS_DEG = (20.0, 14.0, 0.0, -14.0, -20.0)
ACTION_NAMES = ("turn_left_2", "turn_left_1", "straight", "turn_right_1", "turn_right_2")
N_ACTIONS = len(ACTION_DEFLECTIONS_DEG)
STRAIGHT = 2

COLLISION_DISTANCE = 2.0  # m, sonar minimum at or below this ends the episode
SPACING_MIN = 3.0  # m, exclusive
SPACING_MAX = 33.0  # m, exclusive
HEADING_LIMIT = np.pi / 3.0  # rad, inclusive

LEADER_START_PROGRESS = 18.0
FOLLOWER_START_PROGRESS = 1.0

LEADER_OBS_DIM = 6
FOLLOWER_OBS_DIM = 8

TERM_REASONS = (
    "none",
    "collision_leader",
    "collision_follower",
    "spacing_violation",
    "heading_violation",
    "goal_reached",
    "step_limit",
)


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float  # radians in (-pi, pi]

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    def position(self) -> np.ndarray:
        return np.array([self.x, self.y])


class FollowerGeometry(NamedTuple):
    g_f: float  # Euclidean leader-follower distance
    a_f: float  # follower heading minus bearing from follower to leader
    degenerate: bool


def follower_geometry(leader: Pose, follower: Pose) -> FollowerGeometry:
    """Formation observables.

    The deviation a_f is the follower's heading minus the bearing from the
    follower to the leader, where bearing = atan2(y_l - y_f, x_l - x_f)
    (the standard two-argument form), wrapped into (-pi, pi]. Coincident
    vehicles have no defined bearing; a_f is then 0 with the degenerate
    flag set (spacing termination makes this unreachable in episodes).
    """
    dx = leader.x - follower.x
    dy = leader.y - follower.y
    g = float(np.hypot(dx, dy))
    if g < 1e-9:
        return FollowerGeometry(g, 0.0, True)
    bearing = float(np.arctan2(dy, dx))
    return FollowerGeometry(g, normalize_angle(follower.heading - bearing), False)


@dataclass(frozen=True)
class WorldState:
    corridor: Corridor
    kinematics: KinematicsConfig
    leader: Pose
    follower: Pose
    step_count: int = 0
    done: bool = False
    term_reason: str = "none"


@dataclass(frozen=True)
class StepOutcome:
    leader_obs: np.ndarray  # 6 sector minima
    follower_obs: np.ndarray  # [g_f, a_f, 6 sector minima]
    done: bool
    term_reason: str
    progress: float  # leader along-track arc length, meters


def action_deflection(action: int) -> float:
    if not 0 <= action < N_ACTIONS:
        raise ValueError(f"action index must be in 0..{N_ACTIONS - 1}, got {action}")
    return float(np.deg2rad(ACTION_DEFLECTIONS_DEG[action]))


def _scan(corridor: Corridor, pose: Pose) -> np.ndarray:
    # unchecked scan: during a step a pose may have just left the free space,
    # termination handling below turns that into a collision
    return sector_minima(beam_ranges(corridor, pose.x, pose.y, pose.heading, MAX_RANGE))


def observe(state: WorldState) -> tuple[np.ndarray, np.ndarray]:
    """(leader_obs, follower_obs) for the current poses."""
    leader_scan = _scan(state.corridor, state.leader)
    follower_scan = _scan(state.corridor, state.follower)
    geo = follower_geometry(state.leader, state.follower)
    follower_obs = np.concatenate([[geo.g_f, geo.a_f], follower_scan])
    return leader_scan, follower_obs


def reset(corridor: Corridor, kinematics: KinematicsConfig) -> WorldState:
    """Start state: both vehicles on the centerline, headed along it."""
    lp, lh = corridor.point_at(LEADER_START_PROGRESS)
    fp, fh = corridor.point_at(FOLLOWER_START_PROGRESS)
    return WorldState(
        corridor=corridor,
        kinematics=kinematics,
        leader=Pose(float(lp[0]), float(lp[1]), lh),
        follower=Pose(float(fp[0]), float(fp[1]), fh),
    )


def _advance(pose: Pose, action: int, kin: KinematicsConfig) -> Pose:
    heading = pose.heading + kin.yaw_gain * action_deflection(action) * kin.dt
    heading = normalize_angle(heading)
    x = pose.x + kin.forward_speed * kin.dt * np.cos(heading)
    y = pose.y + kin.forward_speed * kin.dt * np.sin(heading)
    return Pose(float(x), float(y), heading)


def termination_reason(
    *,
    leader_min: float,
    follower_min: float,
    g_f: float,
    a_f: float,
    progress: float,
    goal_progress: float,
    step_count: int,
    max_steps: int,
    leader_free: bool = True,
    follower_free: bool = True,
) -> str:
    """Termination rule, checked in a fixed order.

    Boundary semantics: a sonar minimum of exactly 2.0 is a collision;
    spacings of exactly 3.0 and 33.0 continue; a heading deviation of
    exactly pi/3 terminates.
    """
    if not leader_free or leader_min <= COLLISION_DISTANCE:
        return "collision_leader"
    if not follower_free or follower_min <= COLLISION_DISTANCE:
        return "collision_follower"
    if g_f < SPACING_MIN or g_f > SPACING_MAX:
        return "spacing_violation"
    if abs(a_f) >= HEADING_LIMIT:
        return "heading_violation"
    if progress >= goal_progress:
        return "goal_reached"
    if step_count >= max_steps:
        return "step_limit"
    return "none"


def step(state: WorldState, leader_action: int, follower_action: int) -> tuple[WorldState, StepOutcome]:
    """Advance both vehicles one tick and evaluate termination."""
    if state.done:
        raise RuntimeError("cannot step a finished episode")
    kin = state.kinematics
    corr = state.corridor
    leader = _advance(state.leader, leader_action, kin)
    follower = _advance(state.follower, follower_action, kin)
    step_count = state.step_count + 1

    leader_scan = _scan(corr, leader)
    follower_scan = _scan(corr, follower)
    geo = follower_geometry(leader, follower)
    follower_obs = np.concatenate([[geo.g_f, geo.a_f], follower_scan])
    progress = corr.progress_of(leader.position())

    reason = termination_reason(
        leader_min=float(leader_scan.min()),
        follower_min=float(follower_scan.min()),
        g_f=geo.g_f,
        a_f=geo.a_f,
        progress=progress,
        goal_progress=corr.goal_progress,
        step_count=step_count,
        max_steps=kin.max_steps,
        leader_free=corr.in_free_space(leader.position()),
        follower_free=corr.in_free_space(follower.position()),
    )
    done = reason != "none"
    new_state = replace(
        state,
        leader=leader,
        follower=follower,
        step_count=step_count,
        done=done,
        term_reason=reason,
    )
    outcome = StepOutcome(
        leader_obs=leader_scan,
        follower_obs=follower_obs,
        done=done,
        term_reason=reason,
        progress=progress,
    )
    return new_state, outcome


def raycast_sonar_pose(corridor: Corridor, pose: Pose, max_range: float = MAX_RANGE) -> np.ndarray:
    """Checked scan from an explicit pose (see sonar.raycast_sonar)."""
    return sonar.raycast_sonar(corridor, pose.x, pose.y, pose.heading, max_range)
