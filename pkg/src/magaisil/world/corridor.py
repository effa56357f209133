"""Corridor world model: a constant-width pipe around a polyline centerline,
with optional wall-mounted rectangular obstacles, loaded from task files.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import (
    offset_polyline,
    point_at_arclength,
    point_in_polygon,
    polyline_cumlengths,
    polyline_segments,
    project_to_polyline,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class TaskFileError(ValueError):
    """Raised when a task file cannot be parsed or violates an invariant."""

    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(frozen=True)
class ObstacleSpec:
    """Wall-mounted rectangle: ``length`` along the pipe, ``width`` into it.

    ``side`` is 'left' or 'right' relative to the direction of travel;
    ``offset`` is the along-track arc length where the rectangle starts.
    The rectangle must lie within a single straight stretch of the pipe.
    """

    length: float
    width: float
    side: str
    offset: float


@dataclass(eq=False)
class Corridor:
    """Validated pipe geometry with precomputed walls and obstacle polygons."""

    centerline: np.ndarray  # (n, 2) waypoints, meters
    width: float
    goal_progress: float
    obstacles: tuple[ObstacleSpec, ...] = ()

    cum_lengths: np.ndarray = field(init=False, repr=False)
    total_length: float = field(init=False, repr=False)
    left_wall: np.ndarray = field(init=False, repr=False)
    right_wall: np.ndarray = field(init=False, repr=False)
    obstacle_polygons: list[np.ndarray] = field(init=False, repr=False)
    sonar_segments: np.ndarray = field(init=False, repr=False)  # (S, 2, 2)
    boundary_polygon: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.centerline = np.asarray(self.centerline, dtype=float)
        self._validate_base()
        half = self.width / 2.0
        self.cum_lengths = polyline_cumlengths(self.centerline)
        self.total_length = float(self.cum_lengths[-1])
        if not 0.0 < self.goal_progress <= self.total_length + 1e-9:
            raise TaskFileError(
                "goal_progress",
                f"must be in (0, total centerline length {self.total_length:.3f}]",
            )
        self.left_wall = offset_polyline(self.centerline, +half)
        self.right_wall = offset_polyline(self.centerline, -half)
        self.obstacle_polygons = [self._obstacle_polygon(o) for o in self.obstacles]
        walls = np.concatenate(
            [polyline_segments(self.left_wall), polyline_segments(self.right_wall)]
        )
        if self.obstacle_polygons:
            edges = [
                np.stack([poly, np.roll(poly, -1, axis=0)], axis=1)
                for poly in self.obstacle_polygons
            ]
            walls = np.concatenate([walls] + edges)
        self.sonar_segments = walls
        self.boundary_polygon = np.concatenate([self.left_wall, self.right_wall[::-1]])

    def _validate_base(self):
        if self.width <= 0:
            raise TaskFileError("width", "must be positive")
        if self.centerline.ndim != 2 or self.centerline.shape[1] != 2:
            raise TaskFileError("centerline", "must be a list of [x, y] waypoints")
        if len(self.centerline) < 2:
            raise TaskFileError("centerline", "needs at least 2 waypoints")
        deltas = np.diff(self.centerline, axis=0)
        if np.any(np.hypot(deltas[:, 0], deltas[:, 1]) < 1e-9):
            raise TaskFileError("centerline", "consecutive waypoints must be distinct")

    def _obstacle_polygon(self, o: ObstacleSpec) -> np.ndarray:
        if o.side not in ("left", "right"):
            raise TaskFileError("obstacles.side", f"must be 'left' or 'right', got {o.side!r}")
        if o.length <= 0 or o.width <= 0:
            raise TaskFileError("obstacles", "length and width must be positive")
        if o.width >= self.width:
            raise TaskFileError("obstacles.width", "must be smaller than the pipe width")
        s0, s1 = o.offset, o.offset + o.length
        if s0 < 0 or s1 > self.total_length:
            raise TaskFileError("obstacles.offset", "rectangle falls outside the pipe")
        i = int(np.searchsorted(self.cum_lengths, s0, side="right") - 1)
        i = min(i, len(self.centerline) - 2)
        if s1 > self.cum_lengths[i + 1] + 1e-9:
            raise TaskFileError(
                "obstacles.offset", "rectangle must fit within one straight stretch"
            )
        a = self.centerline[i]
        seg = self.centerline[i + 1] - a
        seg_len = float(np.hypot(seg[0], seg[1]))
        tang = seg / seg_len
        nrm = np.array([-tang[1], tang[0]])  # left normal
        half = self.width / 2.0
        wall_lat = half if o.side == "left" else -half
        inner_lat = wall_lat - o.width if o.side == "left" else wall_lat + o.width
        t0, t1 = s0 - self.cum_lengths[i], s1 - self.cum_lengths[i]
        return np.array(
            [
                a + t0 * tang + wall_lat * nrm,
                a + t1 * tang + wall_lat * nrm,
                a + t1 * tang + inner_lat * nrm,
                a + t0 * tang + inner_lat * nrm,
            ]
        )

    # --- queries -----------------------------------------------------------

    def point_at(self, s: float) -> tuple[np.ndarray, float]:
        """Centerline point and tangent heading at arc length ``s``."""
        return point_at_arclength(self.centerline, s)

    def progress_of(self, p: np.ndarray) -> float:
        """Along-track arc length of the closest centerline point."""
        s, _, _ = project_to_polyline(self.centerline, np.asarray(p, dtype=float))
        return s

    def in_free_space(self, p: np.ndarray) -> bool:
        """True if ``p`` is between the walls and outside every obstacle."""
        p = np.asarray(p, dtype=float)
        if not point_in_polygon(self.boundary_polygon, p):
            return False
        return not any(point_in_polygon(poly, p) for poly in self.obstacle_polygons)


@dataclass(frozen=True)
class KinematicsConfig:
    """Vehicle response constants shared by both vehicles."""

    forward_speed: float = 1.5  # m/s
    yaw_gain: float = 0.3  # rad/s of heading change per rad of deflection
    dt: float = 0.5  # s
    max_steps: int = 600

    def __post_init__(self):
        for name in ("forward_speed", "yaw_gain", "dt", "max_steps"):
            if getattr(self, name) <= 0:
                raise TaskFileError(f"kinematics.{name}", "must be positive")


@dataclass(frozen=True)
class TaskFile:
    """A parsed task file: corridor geometry plus kinematics constants."""

    task_id: str
    corridor: Corridor
    kinematics: KinematicsConfig


_TASK_DIR = Path(__file__).resolve().parent.parent / "tasks"
SHIPPED_TASKS = ("task1", "task2", "task3")


def resolve_task_path(task: str | Path) -> Path:
    """Map a shipped task id (``task1``...) or a filesystem path to a file."""
    p = Path(task)
    if p.exists():
        return p
    candidate = _TASK_DIR / f"{task}.toml"
    if candidate.exists():
        return candidate
    raise TaskFileError("task", f"no such task file or shipped task id: {task}")


def read_task_file(task: str | Path) -> TaskFile:
    """Parse and validate a task file (TOML)."""
    path = resolve_task_path(task)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as e:
        raise TaskFileError("file", f"cannot parse {path}: {e}") from e
    try:
        width = float(raw["width"])
        goal = float(raw["goal_progress"])
        centerline = np.asarray(raw["centerline"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise TaskFileError("file", f"missing or malformed key in {path}: {e}") from e
    obstacles = tuple(
        ObstacleSpec(
            length=float(o["length"]),
            width=float(o["width"]),
            side=str(o["side"]),
            offset=float(o["offset"]),
        )
        for o in raw.get("obstacles", [])
    )
    corridor = Corridor(
        centerline=centerline, width=width, goal_progress=goal, obstacles=obstacles
    )
    kin_raw = raw.get("kinematics", {})
    kinematics = KinematicsConfig(
        forward_speed=float(kin_raw.get("forward_speed", 1.5)),
        yaw_gain=float(kin_raw.get("yaw_gain", 0.3)),
        dt=float(kin_raw.get("dt", 0.5)),
        max_steps=int(kin_raw.get("max_steps", 600)),
    )
    return TaskFile(task_id=path.stem, corridor=corridor, kinematics=kinematics)


def load_task(task: str | Path) -> Corridor:
    """Load just the corridor geometry from a task file."""
    return read_task_file(task).corridor
