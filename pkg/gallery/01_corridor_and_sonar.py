#!/usr/bin/env python3
"""A first look at the world: load a task, scan the pipe, render it.

Run from the repository root:  python gallery/01_corridor_and_sonar.py
Writes gallery/out/corridor.svg.
"""

from pathlib import Path

import numpy as np

from magaisil.render import corridor_svg
from magaisil.world import raycast_sonar, read_task_file

task = read_task_file("task2")
c = task.corridor
print(f"{task.task_id}: width {c.width} m, goal at {c.goal_progress} m of track,")
print(f"  {len(c.obstacles)} obstacles, total walls length {c.total_length:.0f} m")

# A vehicle sitting on the centerline at the start, pointing down the pipe.
scan = raycast_sonar(c, 18.0, 0.0, 0.0)
print("\nsector ranges from (18, 0), heading +x (right to left):")
print(" ", np.round(scan, 2))
print("  outermost sectors sit near 15/sin(60 deg) =", round(15 / np.sin(np.pi / 3), 3))

# Sonar reacts to the wall-mounted obstacle once it enters the cone.
scan2 = raycast_sonar(c, 30.0, 0.0, 0.0)
print("\nsame heading from (30, 0) - the left obstacle shortens a sector:")
print(" ", np.round(scan2, 2))

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
svg = corridor_svg(c)
(out / "corridor.svg").write_text(svg)
print(f"\nwrote {out / 'corridor.svg'}")
