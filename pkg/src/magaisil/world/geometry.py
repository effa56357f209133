"""Planar geometry helpers: polylines, offsets, projections, ray casting.

Everything works on plain numpy arrays so the corridor can precompute its
wall segments once and ray casts stay fully vectorized.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def normalize_angle(a: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = float(a) % TWO_PI
    if a > np.pi:
        a -= TWO_PI
    return a


def polyline_cumlengths(points: np.ndarray) -> np.ndarray:
    """Cumulative arc length at each vertex, starting at 0."""
    deltas = np.diff(points, axis=0)
    seg_len = np.hypot(deltas[:, 0], deltas[:, 1])
    return np.concatenate([[0.0], np.cumsum(seg_len)])


def point_at_arclength(points: np.ndarray, s: float) -> tuple[np.ndarray, float]:
    """Point and tangent heading at arc length ``s`` along a polyline.

    ``s`` is clamped to [0, total length].
    """
    cum = polyline_cumlengths(points)
    s = float(np.clip(s, 0.0, cum[-1]))
    i = int(np.searchsorted(cum, s, side="right") - 1)
    i = min(i, len(points) - 2)
    seg = points[i + 1] - points[i]
    seg_len = float(np.hypot(seg[0], seg[1]))
    t = (s - cum[i]) / seg_len if seg_len > 0 else 0.0
    heading = float(np.arctan2(seg[1], seg[0]))
    return points[i] + t * seg, heading


def project_to_polyline(points: np.ndarray, p: np.ndarray) -> tuple[float, float, float]:
    """Project ``p`` onto a polyline.

    Returns (arclength, signed lateral offset, distance). The lateral sign
    is positive to the left of the direction of travel. The distance is the
    true point-to-polyline distance; at corners it may exceed |lateral| of
    the nearest segment's infinite line.
    """
    a = points[:-1]
    d = points[1:] - a
    seg_len2 = np.einsum("ij,ij->i", d, d)
    rel = p[None, :] - a
    t = np.clip(np.einsum("ij,ij->i", rel, d) / np.maximum(seg_len2, 1e-12), 0.0, 1.0)
    closest = a + t[:, None] * d
    diff = p[None, :] - closest
    dist = np.hypot(diff[:, 0], diff[:, 1])
    j = int(np.argmin(dist))
    cum = polyline_cumlengths(points)
    seg_len = np.sqrt(seg_len2[j])
    s = cum[j] + t[j] * seg_len
    # signed lateral: cross(segment direction, p - a)
    cross = d[j, 0] * (p[1] - a[j, 1]) - d[j, 1] * (p[0] - a[j, 0])
    lateral = cross / max(seg_len, 1e-12)
    return float(s), float(lateral), float(dist[j])


def offset_polyline(points: np.ndarray, offset: float) -> np.ndarray:
    """Offset a polyline laterally; positive offset is to the left.

    Interior vertices use miter joins (intersection of the adjacent offset
    lines), which is exact for a constant-width corridor.
    """
    n = len(points)
    d = points[1:] - points[:-1]
    lengths = np.hypot(d[:, 0], d[:, 1])
    dirs = d / lengths[:, None]
    normals = np.stack([-dirs[:, 1], dirs[:, 0]], axis=1)  # left normals
    out = np.empty_like(points)
    out[0] = points[0] + offset * normals[0]
    out[-1] = points[-1] + offset * normals[-1]
    for i in range(1, n - 1):
        n0, n1 = normals[i - 1], normals[i]
        bisector = n0 + n1
        norm2 = bisector @ bisector
        if norm2 < 1e-12:  # 180 degree reversal, no sane miter
            out[i] = points[i] + offset * n0
            continue
        # miter point: along the normal bisector, scaled so both offset
        # lines are met: |m| = offset / cos(theta/2)
        bis = bisector / np.sqrt(norm2)
        cos_half = bis @ n0
        out[i] = points[i] + (offset / max(cos_half, 1e-6)) * bis
    return out


def polyline_segments(points: np.ndarray) -> np.ndarray:
    """View a polyline as an (n-1, 2, 2) array of segments."""
    return np.stack([points[:-1], points[1:]], axis=1)


def point_in_polygon(poly: np.ndarray, p: np.ndarray) -> bool:
    """Even-odd crossing test. ``poly`` is (n, 2), implicitly closed."""
    x, y = float(p[0]), float(p[1])
    xs, ys = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(xs, -1), np.roll(ys, -1)
    crosses = ((ys > y) != (yn > y)) & (
        x < xs + (y - ys) * (xn - xs) / np.where(yn != ys, yn - ys, 1e-30)
    )
    return bool(np.count_nonzero(crosses) % 2)


def raycast(
    origin: np.ndarray,
    angles: np.ndarray,
    segments: np.ndarray,
    max_range: float,
) -> np.ndarray:
    """Distances from ``origin`` along world-frame ``angles`` to the nearest
    segment, clamped to ``max_range``.

    ``segments`` is (S, 2, 2); result has the shape of ``angles``.
    """
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)  # (R, 2)
    a = segments[:, 0, :]  # (S, 2)
    e = segments[:, 1, :] - a  # (S, 2)
    ao = a[None, :, :] - origin[None, None, :]  # (1, S, 2)
    # solve origin + t*dir = a + u*e
    denom = dirs[:, None, 0] * e[None, :, 1] - dirs[:, None, 1] * e[None, :, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (ao[..., 0] * e[None, :, 1] - ao[..., 1] * e[None, :, 0]) / denom
        u = (ao[..., 0] * dirs[:, None, 1] - ao[..., 1] * dirs[:, None, 0]) / denom
    valid = (np.abs(denom) > 1e-12) & (t > 1e-9) & (u >= 0.0) & (u <= 1.0)
    t = np.where(valid, t, np.inf)
    dist = t.min(axis=1)
    return np.minimum(dist, max_range)
