"""Deterministic SVG rendering of a corridor and vehicle paths."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .world import Corridor

LEADER_COLOR = "#c0392b"
FOLLOWER_COLOR = "#2471a3"
WALL_COLOR = "#2c3e50"
OBSTACLE_COLOR = "#7f8c8d"
CENTER_COLOR = "#bdc3c7"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _points(pts) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in pts)  # y up


def corridor_svg(
    corridor: Corridor,
    paths: list[dict] | None = None,
    margin: float = 10.0,
) -> str:
    """An SVG drawing of the pipe, its obstacles, and optional paths.

    Each path entry is {"points": [[x, y], ...], "color": str, "label": str}.
    Output is byte-deterministic for identical inputs.
    """
    pts = np.concatenate([corridor.left_wall, corridor.right_wall])
    x0, y0 = pts.min(axis=0) - margin
    x1, y1 = pts.max(axis=0) + margin
    width, height = x1 - x0, y1 - y0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(-y1)} '
        f'{_fmt(width)} {_fmt(height)}" width="{_fmt(width * 4)}" height="{_fmt(height * 4)}">',
        f'<rect x="{_fmt(x0)}" y="{_fmt(-y1)}" width="{_fmt(width)}" height="{_fmt(height)}" fill="#fdfefe"/>',
        f'<polyline points="{_points(corridor.centerline)}" fill="none" '
        f'stroke="{CENTER_COLOR}" stroke-width="0.5" stroke-dasharray="4 3"/>',
        f'<polyline points="{_points(corridor.left_wall)}" fill="none" '
        f'stroke="{WALL_COLOR}" stroke-width="1.2"/>',
        f'<polyline points="{_points(corridor.right_wall)}" fill="none" '
        f'stroke="{WALL_COLOR}" stroke-width="1.2"/>',
    ]
    for poly in corridor.obstacle_polygons:
        parts.append(
            f'<polygon points="{_points(poly)}" fill="{OBSTACLE_COLOR}" stroke="{WALL_COLOR}" stroke-width="0.5"/>'
        )
    goal, _ = corridor.point_at(corridor.goal_progress)
    parts.append(
        f'<circle cx="{_fmt(goal[0])}" cy="{_fmt(-goal[1])}" r="2" fill="none" '
        f'stroke="#27ae60" stroke-width="0.8"/>'
    )
    for p in paths or []:
        if len(p["points"]) == 0:
            continue
        parts.append(
            f'<polyline points="{_points(p["points"])}" fill="none" '
            f'stroke="{p["color"]}" stroke-width="0.8" opacity="{p.get("opacity", "0.9")}"/>'
        )
    labels = [p["label"] for p in paths or [] if p.get("label")]
    for i, label in enumerate(dict.fromkeys(labels)):
        color = next(p["color"] for p in paths if p.get("label") == label)
        parts.append(
            f'<text x="{_fmt(x0 + 3)}" y="{_fmt(-y1 + 6 + 6 * i)}" font-size="5" '
            f'fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def load_paths_file(path: str | Path) -> tuple[str | None, list[dict]]:
    """Paths from an evaluation report (JSONL) or a plain JSON object with
    leader_path/follower_path lists. Returns (task_id or None, path specs)."""
    text = Path(path).read_text(encoding="utf-8").strip()
    if not text:
        raise ValueError(f"{path}: empty trajectory file")
    first = json.loads(text.splitlines()[0])
    paths = []
    task_id = None
    if isinstance(first, dict) and first.get("format") == "magaisil-eval":
        task_id = first.get("task")
        for line in text.splitlines()[1:]:
            rec = json.loads(line)
            paths.append(
                {"points": rec["leader_path"], "color": LEADER_COLOR, "label": "leader"}
            )
            paths.append(
                {"points": rec["follower_path"], "color": FOLLOWER_COLOR, "label": "follower"}
            )
    else:
        rec = json.loads(text)
        task_id = rec.get("task")
        paths.append(
            {"points": rec["leader_path"], "color": LEADER_COLOR, "label": "leader"}
        )
        if "follower_path" in rec:
            paths.append(
                {"points": rec["follower_path"], "color": FOLLOWER_COLOR, "label": "follower"}
            )
    return task_id, paths
