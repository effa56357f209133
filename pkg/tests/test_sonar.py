import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magaisil.world import Corridor, InvalidPoseError, raycast_sonar
from magaisil.world.sonar import MAX_RANGE, N_BEAMS, _REL_ANGLES

OUTER_ANALYTIC = 15.0 / np.sin(np.pi / 3.0)  # continuous-limit outer-sector minimum


def closed_form_straight_scan(y: float, heading: float, half_width: float = 15.0) -> np.ndarray:
    """Independent sonar oracle for an infinite straight pipe along +x.

    Per-beam wall distances from plain trigonometry (no segment
    intersection code), collapsed to sector minima.
    """
    dists = np.full(N_BEAMS, MAX_RANGE)
    for j, rel in enumerate(_REL_ANGLES):
        phi = heading + rel
        s = np.sin(phi)
        if s > 1e-12:
            d = (half_width - y) / s
        elif s < -1e-12:
            d = (-half_width - y) / s
        else:
            d = np.inf
        dists[j] = min(d, MAX_RANGE)
    return dists.reshape(6, 100).min(axis=1)


def test_centered_outer_sectors_match_analytic(straight_corridor):
    scan = raycast_sonar(straight_corridor, 100.0, 0.0, 0.0)
    assert scan[0] == pytest.approx(OUTER_ANALYTIC, abs=0.1)
    assert scan[5] == pytest.approx(OUTER_ANALYTIC, abs=0.1)
    assert scan[0] == pytest.approx(scan[5], abs=1e-9)  # symmetric pose


def test_open_space_clamps_to_max_range():
    wide = Corridor(
        centerline=np.array([[0.0, 0.0], [500.0, 0.0]]),
        width=200.0,
        goal_progress=500.0,
    )
    scan = raycast_sonar(wide, 250.0, 0.0, 0.0)
    assert np.all(scan == 33.0)


def test_two_meters_from_wall_head_on(straight_corridor):
    # pointing straight at the top wall from 2 m away
    scan = raycast_sonar(straight_corridor, 100.0, 13.0, np.pi / 2)
    assert min(scan[2], scan[3]) == pytest.approx(2.0, abs=1e-3)


def test_outside_free_space_raises(straight_corridor):
    with pytest.raises(InvalidPoseError):
        raycast_sonar(straight_corridor, 100.0, 20.0, 0.0)


def test_scan_values_in_range(straight_corridor):
    scan = raycast_sonar(straight_corridor, 100.0, 5.0, 0.3)
    assert np.all(scan > 0.0)
    assert np.all(scan <= 33.0)


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(40.0, 160.0),
    y=st.floats(-13.5, 13.5),
    heading=st.floats(-np.pi, np.pi),
)
def test_matches_closed_form_oracle_in_straight_pipe(x, y, heading):
    corridor = Corridor(
        centerline=np.array([[0.0, 0.0], [200.0, 0.0]]),
        width=30.0,
        goal_progress=200.0,
    )
    scan = raycast_sonar(corridor, x, y, heading)
    oracle = closed_form_straight_scan(y, heading)
    assert np.max(np.abs(scan - oracle)) < 0.1


@settings(max_examples=40, deadline=None)
@given(
    y=st.floats(-13.0, 13.0),
    heading=st.floats(-np.pi, np.pi),
    r_small=st.floats(5.0, 33.0),
)
def test_shrinking_max_range_never_raises_sectors(y, heading, r_small):
    corridor = Corridor(
        centerline=np.array([[0.0, 0.0], [200.0, 0.0]]),
        width=30.0,
        goal_progress=200.0,
    )
    full = raycast_sonar(corridor, 100.0, y, heading, max_range=33.0)
    short = raycast_sonar(corridor, 100.0, y, heading, max_range=r_small)
    assert np.all(short <= full + 1e-12)


def test_sector_ordering_right_to_left(straight_corridor):
    # vehicle closer to the bottom (right-hand) wall sees smaller sector-0 ranges
    scan = raycast_sonar(straight_corridor, 100.0, -10.0, 0.0)
    assert scan[0] < scan[5]


def test_obstacle_shortens_beams(task1, task2):
    # obstacle spans x in [45, 65] on the left wall of task2, 5 m deep;
    # from (30, 0) its underside cuts into the upper-left sector
    with_obstacle = raycast_sonar(task2.corridor, 30.0, 0.0, 0.0)
    without = raycast_sonar(task1.corridor, 30.0, 0.0, 0.0)
    assert with_obstacle[4] < without[4] - 3.0
    assert np.all(with_obstacle <= without + 1e-12)
