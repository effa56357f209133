"""Scripted demonstrators and demonstration file I/O.

Two reactive controllers (a pipe-centering one for the leader, a tracking
one for the follower) produce demonstrations of controllable quality:
``optimal`` runs the raw control law, ``suboptimal`` adds a reaction delay
and epsilon-random actions, which yields the drifting, oscillating runs a
mediocre human pilot would produce, while still finishing the pipe.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algo.trajectory import DemoSet, eval_reward_fn
from .world import STRAIGHT, TaskFile, observe, reset, step

DEMO_FORMAT = "magaisil-demos"
DEMO_VERSION = 1

QUALITIES = ("optimal", "suboptimal")

SUBOPT_NOISE_P = 0.2
SUBOPT_DELAY = 3
# slow weave of the steering target; mimics a pilot drifting around the middle
SUBOPT_WEAVE_PERIOD = 120
SUBOPT_LEADER_WEAVE = 16.0  # sonar-asymmetry units (meters)
SUBOPT_FOLLOWER_WEAVE = 0.45  # heading-deviation units (radians)
SUBOPT_FOLLOWER_DEADBAND = (0.15, 0.55)


def leader_control_law(obs: np.ndarray, target_asymmetry: float = 0.0) -> int:
    """Steer toward the side with more sonar room.

    The asymmetry of mirrored sectors (left minus right, outer pairs
    weighted most) is positive when the right wall is nearer, which asks
    for a left turn (lower action index). ``target_asymmetry`` shifts the
    setpoint away from the center.
    """
    left = obs[5] + 0.5 * obs[4] + 0.25 * obs[3]
    right = obs[0] + 0.5 * obs[1] + 0.25 * obs[2]
    e = left - right
    ahead = min(obs[2], obs[3])
    if ahead < 20.0:
        # corner or obstacle ahead: commit to the open side
        return 0 if e > 0 else 4
    e -= target_asymmetry
    if e > 6.0:
        return 0
    if e > 1.5:
        return 1
    if e < -6.0:
        return 4
    if e < -1.5:
        return 3
    return STRAIGHT


def follower_control_law(
    obs: np.ndarray,
    target_deviation: float = 0.0,
    deadband: tuple[float, float] = (0.06, 0.35),
) -> int:
    """Track the leader by cancelling the heading deviation, blended with a
    gentle wall-centering term and a close-wall avoidance override."""
    a = obs[1]
    scan = obs[2:]
    left = scan[5] + 0.5 * scan[4]
    right = scan[0] + 0.5 * scan[1]
    e = left - right
    if scan.min() < 6.0:
        return 0 if e > 0 else 4
    # positive signal asks for a left turn
    s = -a + 0.012 * e - target_deviation
    t1, t2 = deadband
    if s > t2:
        return 0
    if s > t1:
        return 1
    if s < -t2:
        return 4
    if s < -t1:
        return 3
    return STRAIGHT


@dataclass
class ScriptedController:
    """Deterministic demonstrator.

    The optimal variant runs the raw control law. The suboptimal variant
    weaves its steering setpoint around the middle, reacts ``delay`` steps
    late, widens its deadband (follower) and substitutes a random action
    with probability ``noise_p``.
    """

    kind: str  # "leader-centering" | "follower-tracking"
    quality: str  # "optimal" | "suboptimal"
    seed: int = 0
    noise_p: float = SUBOPT_NOISE_P
    delay: int = SUBOPT_DELAY
    weave_amplitude: float | None = None
    weave_period: int = SUBOPT_WEAVE_PERIOD
    _rng: np.random.Generator = field(init=False, repr=False)
    _queue: deque = field(init=False, repr=False)
    _t: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("leader-centering", "follower-tracking"):
            raise ValueError(f"unknown controller kind: {self.kind}")
        if self.quality not in QUALITIES:
            raise ValueError(f"quality must be one of {QUALITIES}")
        if self.weave_amplitude is None:
            self.weave_amplitude = (
                SUBOPT_LEADER_WEAVE if self.kind == "leader-centering" else SUBOPT_FOLLOWER_WEAVE
            )
        self.reset()

    def reset(self):
        self._rng = np.random.default_rng(self.seed)
        self._queue = deque([STRAIGHT] * (self.delay if self.quality == "suboptimal" else 0))
        self._t = 0

    def _decide(self, obs: np.ndarray) -> int:
        if self.quality == "optimal":
            if self.kind == "leader-centering":
                return leader_control_law(obs)
            return follower_control_law(obs)
        # follower weave runs out of phase with the leader's
        phase = 0.0 if self.kind == "leader-centering" else 1.0
        weave = self.weave_amplitude * np.sin(2.0 * np.pi * self._t / self.weave_period + phase)
        if self.kind == "leader-centering":
            return leader_control_law(obs, target_asymmetry=weave)
        return follower_control_law(obs, target_deviation=weave, deadband=SUBOPT_FOLLOWER_DEADBAND)

    def act(self, obs: np.ndarray) -> int:
        action = self._decide(np.asarray(obs, dtype=float))
        self._t += 1
        if self.quality == "optimal":
            return action
        self._queue.append(action)
        delayed = self._queue.popleft()
        if self._rng.random() < self.noise_p:
            return int(self._rng.integers(0, 5))
        return delayed


@dataclass(frozen=True)
class DemoEpisode:
    agent_id: str
    provenance: str
    task_id: str
    seed: int
    observations: np.ndarray
    actions: np.ndarray
    poses: np.ndarray


@dataclass(frozen=True)
class DemoRunReport:
    files: dict[str, Path]
    episodes: int
    attempts: int
    mean_eval_reward: dict[str, float]
    mean_steps: float


def run_demo_episode(
    task: TaskFile, leader_ctrl: ScriptedController, follower_ctrl: ScriptedController
) -> tuple[dict[str, DemoEpisode], str]:
    """Roll one joint scripted episode; returns per-agent records and the
    termination reason."""
    state = reset(task.corridor, task.kinematics)
    leader_obs, follower_obs = observe(state)
    buf = {aid: {"obs": [], "act": [], "pose": []} for aid in ("leader", "follower")}
    provenance = (
        "expert-optimal" if leader_ctrl.quality == "optimal" else "expert-suboptimal"
    )
    while True:
        la = leader_ctrl.act(leader_obs)
        fa = follower_ctrl.act(follower_obs)
        buf["leader"]["obs"].append(leader_obs)
        buf["leader"]["act"].append(la)
        buf["leader"]["pose"].append((state.leader.x, state.leader.y))
        buf["follower"]["obs"].append(follower_obs)
        buf["follower"]["act"].append(fa)
        buf["follower"]["pose"].append((state.follower.x, state.follower.y))
        state, out = step(state, la, fa)
        leader_obs, follower_obs = out.leader_obs, out.follower_obs
        if out.done:
            break
    records = {
        aid: DemoEpisode(
            agent_id=aid,
            provenance=provenance,
            task_id=task.task_id,
            seed=leader_ctrl.seed,
            observations=np.asarray(b["obs"], dtype=float),
            actions=np.asarray(b["act"], dtype=int),
            poses=np.asarray(b["pose"], dtype=float),
        )
        for aid, b in buf.items()
    }
    return records, out.term_reason


def record_demos(
    task: TaskFile,
    quality: str,
    episodes: int,
    seed: int,
    out_dir: str | Path,
) -> DemoRunReport:
    """Collect ``episodes`` completed demonstrations and write one file per
    agent under ``out_dir``.

    Only episodes that reach the goal count; the run errors out if the
    controllers cannot complete a single episode within a generous attempt
    budget.
    """
    if quality not in QUALITIES:
        raise ValueError(f"quality must be one of {QUALITIES}")
    if episodes < 1:
        raise ValueError("need at least one episode")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    collected: dict[str, list[DemoEpisode]] = {"leader": [], "follower": []}
    attempts = 0
    max_attempts = max(10 * episodes, 20)
    ep_seed = seed
    steps_total = 0
    while len(collected["leader"]) < episodes:
        if attempts >= max_attempts:
            raise RuntimeError(
                f"{quality} controllers completed only {len(collected['leader'])}/"
                f"{episodes} episodes in {attempts} attempts on {task.task_id}"
            )
        leader_ctrl = ScriptedController("leader-centering", quality, seed=ep_seed)
        follower_ctrl = ScriptedController("follower-tracking", quality, seed=ep_seed + 1)
        records, reason = run_demo_episode(task, leader_ctrl, follower_ctrl)
        attempts += 1
        ep_seed += 2
        if reason != "goal_reached":
            continue
        steps_total += len(records["leader"].observations)
        for aid in ("leader", "follower"):
            collected[aid].append(records[aid])

    files, means = {}, {}
    for aid in ("leader", "follower"):
        path = out_dir / f"{quality}_{aid}.jsonl"
        write_demo_file(path, collected[aid])
        fn = eval_reward_fn(aid)
        means[aid] = float(
            np.mean([fn(o) for ep in collected[aid] for o in ep.observations])
        )
        files[aid] = path
    return DemoRunReport(
        files=files,
        episodes=episodes,
        attempts=attempts,
        mean_eval_reward=means,
        mean_steps=steps_total / episodes,
    )


def write_demo_file(path: str | Path, episodes: list[DemoEpisode]) -> None:
    """Line-delimited records, one episode per line, after a version header.
    Written atomically via a temp file rename."""
    path = Path(path)
    lines = [json.dumps({"format": DEMO_FORMAT, "version": DEMO_VERSION})]
    for ep in episodes:
        lines.append(
            json.dumps(
                {
                    "agent": ep.agent_id,
                    "provenance": ep.provenance,
                    "task_id": ep.task_id,
                    "seed": ep.seed,
                    "obs": ep.observations.tolist(),
                    "actions": ep.actions.tolist(),
                    "poses": ep.poses.tolist(),
                }
            )
        )
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def read_demo_file(path: str | Path) -> list[DemoEpisode]:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty demo file")
    header = json.loads(lines[0])
    if header.get("format") != DEMO_FORMAT or header.get("version") != DEMO_VERSION:
        raise ValueError(f"{path}: not a version-{DEMO_VERSION} {DEMO_FORMAT} file")
    episodes = []
    for line in lines[1:]:
        if not line.strip():
            continue
        d = json.loads(line)
        episodes.append(
            DemoEpisode(
                agent_id=d["agent"],
                provenance=d["provenance"],
                task_id=d["task_id"],
                seed=d["seed"],
                observations=np.asarray(d["obs"], dtype=float),
                actions=np.asarray(d["actions"], dtype=int),
                poses=np.asarray(d.get("poses", []), dtype=float),
            )
        )
    if not episodes:
        raise ValueError(f"{path}: demo file has no episodes")
    return episodes


def demo_set_from_file(path: str | Path) -> DemoSet:
    """Load a demo file into the pair set the learning stack consumes."""
    episodes = read_demo_file(path)
    agent_ids = {ep.agent_id for ep in episodes}
    provenances = {ep.provenance for ep in episodes}
    if len(agent_ids) != 1 or len(provenances) != 1:
        raise ValueError(f"{path}: mixed agents or provenances in one file")
    rep = episodes[0].poses if len(episodes[0].poses) else None
    return DemoSet.from_episodes(
        agent_ids.pop(),
        [(ep.observations, ep.actions) for ep in episodes],
        provenances.pop(),
        representative_path=rep,
    )
