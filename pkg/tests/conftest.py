import numpy as np
import pytest

from magaisil.demos import record_demos
from magaisil.world import Corridor, KinematicsConfig, read_task_file


@pytest.fixture(scope="session")
def task1():
    return read_task_file("task1")


@pytest.fixture(scope="session")
def task2():
    return read_task_file("task2")


@pytest.fixture(scope="session")
def task3():
    return read_task_file("task3")


@pytest.fixture()
def straight_corridor():
    """A 200 m straight pipe, handy for closed-form sonar checks."""
    return Corridor(
        centerline=np.array([[0.0, 0.0], [200.0, 0.0]]),
        width=30.0,
        goal_progress=200.0,
    )


@pytest.fixture()
def default_kinematics():
    return KinematicsConfig()


@pytest.fixture(scope="session")
def demo_runs_task1(task1, tmp_path_factory):
    """Recorded optimal and suboptimal demonstrations on task1, shared by
    the demo tests and the acceptance suite."""
    out = tmp_path_factory.mktemp("demos")
    return {
        "optimal": record_demos(task1, "optimal", episodes=10, seed=1, out_dir=out / "optimal"),
        "suboptimal": record_demos(
            task1, "suboptimal", episodes=10, seed=1, out_dir=out / "suboptimal"
        ),
    }
