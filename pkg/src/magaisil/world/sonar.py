"""Forward-looking sector sonar.

600 beams spread evenly over [-60, +60] degrees relative to the vehicle
heading, grouped into 6 contiguous 20-degree sectors of 100 beams each.
A sector reports the minimum beam range, clamped to 33 m. Sector 0 is the
rightmost (most negative relative angle), sector 5 the leftmost.
"""

from __future__ import annotations

import numpy as np

from .corridor import Corridor
from .geometry import raycast

N_BEAMS = 600
N_SECTORS = 6
BEAMS_PER_SECTOR = N_BEAMS // N_SECTORS
FOV = 2.0 * np.pi / 3.0
MAX_RANGE = 33.0

# beam angles at bin centers so each sector covers exactly its 20-degree slice
_REL_ANGLES = -FOV / 2.0 + (np.arange(N_BEAMS) + 0.5) * (FOV / N_BEAMS)


class InvalidPoseError(RuntimeError):
    """Scan requested from a pose outside the pipe's free space."""


def beam_ranges(
    corridor: Corridor, x: float, y: float, heading: float, max_range: float = MAX_RANGE
) -> np.ndarray:
    """Raw per-beam ranges (length 600), without a free-space check."""
    origin = np.array([x, y], dtype=float)
    return raycast(origin, heading + _REL_ANGLES, corridor.sonar_segments, max_range)


def sector_minima(beams: np.ndarray) -> np.ndarray:
    """Collapse 600 beam ranges into 6 per-sector minima."""
    return beams.reshape(N_SECTORS, BEAMS_PER_SECTOR).min(axis=1)


def raycast_sonar(
    corridor: Corridor, x: float, y: float, heading: float, max_range: float = MAX_RANGE
) -> np.ndarray:
    """Six per-sector minimum ranges from a pose inside the free space.

    Raises InvalidPoseError when the pose is outside the pipe or inside an
    obstacle; callers treat that as a collision.
    """
    if not corridor.in_free_space(np.array([x, y])):
        raise InvalidPoseError(f"pose ({x:.3f}, {y:.3f}) outside free space")
    return sector_minima(beam_ranges(corridor, x, y, heading, max_range))
