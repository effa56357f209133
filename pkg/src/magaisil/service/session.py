"""Training session orchestration: episode loop, metrics log, checkpoints,
and the blocking judgment exchange a live judge connects to.
"""

from __future__ import annotations

import json
import sys
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..algo import (
    JudgeDecision,
    OracleJudge,
    TrainConfig,
    TrainingFault,
    build_learner,
    learner_from_dict,
    learner_to_dict,
    run_episode,
)
from ..demos import demo_set_from_file
from ..world import read_task_file

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CHECKPOINT_VERSION = 1
METRIC_FIELDS = (
    "episode",
    "agent",
    "steps",
    "term_reason",
    "mean_disc_reward",
    "mean_eval_reward",
    "success",
    "judged",
    "accepted",
    "pool_pairs",
    "demo_provenance",
)

JUDGE_KINDS = ("oracle", "human")


@dataclass(frozen=True)
class SessionConfig:
    mode: str = "magail"
    judge: str = "oracle"
    task: str = "task1"
    demos_leader: str = ""
    demos_follower: str = ""
    episodes: int = 100
    checkpoint_interval: int = 0  # 0: only the final checkpoint
    judgment_timeout: float = 120.0
    out_dir: str = "run"
    serve: bool = False
    train: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        if self.mode not in ("magail", "magaisil"):
            raise ValueError("mode must be magail or magaisil")
        if self.judge not in JUDGE_KINDS:
            raise ValueError(f"judge must be one of {JUDGE_KINDS}")
        if self.episodes < 1:
            raise ValueError("episodes must be positive")
        if self.mode == "magaisil" and self.judge == "human" and not self.serve:
            raise ValueError(
                "a human judge needs the serving API; run the serve command "
                "instead of train, or switch --judge to oracle"
            )

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "judge": self.judge,
            "task": self.task,
            "demos_leader": self.demos_leader,
            "demos_follower": self.demos_follower,
            "episodes": self.episodes,
            "checkpoint_interval": self.checkpoint_interval,
            "judgment_timeout": self.judgment_timeout,
            "out_dir": self.out_dir,
            "serve": self.serve,
            "train": self.train.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionConfig":
        d = dict(d)
        train = TrainConfig.from_dict(d.pop("train", {}))
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(train=train, **known)


def load_session_config(path: str | Path) -> SessionConfig:
    """Session config from a TOML file: a [session] table plus an optional
    [train] table of hyperparameter overrides."""
    raw = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    session = raw.get("session", {})
    session["train"] = raw.get("train", {})
    return SessionConfig.from_dict(session)


class JudgmentExchange:
    """Blocking bridge between the training loop and a live judge.

    The trainer publishes pending judgments and blocks in ``wait``; the API
    thread resolves them via ``decide``. A timeout records a rejection so
    training always proceeds. At most one pending judgment exists per agent.
    """

    def __init__(self, timeout: float):
        self.timeout = timeout
        self._lock = threading.Lock()
        self._pending: dict[str, dict] = {}
        self._decisions: dict[str, JudgeDecision] = {}
        self._events: dict[str, threading.Event] = {}
        self._submitted_at: dict[str, float] = {}

    def submit(self, payload: dict) -> None:
        tid = payload["trajectory_id"]
        with self._lock:
            agent_pending = [p for p in self._pending.values() if p["agent"] == payload["agent"]]
            if agent_pending:
                raise RuntimeError(f"agent {payload['agent']} already has a pending judgment")
            self._pending[tid] = payload
            self._events[tid] = threading.Event()
            self._submitted_at[tid] = time.monotonic()

    def pending(self) -> list[dict]:
        with self._lock:
            return list(self._pending.values())

    def decide(self, trajectory_id: str, accept: bool) -> str:
        """Returns 'ok', 'unknown' or 'conflict' (already decided)."""
        with self._lock:
            if trajectory_id in self._decisions:
                return "conflict"
            if trajectory_id not in self._pending:
                return "unknown"
            latency = time.monotonic() - self._submitted_at[trajectory_id]
            agent = self._pending[trajectory_id]["agent"]
            self._decisions[trajectory_id] = JudgeDecision(
                trajectory_id=trajectory_id,
                agent_id=agent,
                accept=bool(accept),
                source="human",
                latency=latency,
            )
            self._events[trajectory_id].set()
            return "ok"

    def wait(self, trajectory_id: str) -> JudgeDecision:
        event = self._events.get(trajectory_id)
        if event is None:
            raise KeyError(f"no pending judgment {trajectory_id}")
        event.wait(self.timeout)
        with self._lock:
            decision = self._decisions.get(trajectory_id)
            if decision is None:  # timed out: conservative reject
                agent = self._pending[trajectory_id]["agent"]
                decision = JudgeDecision(
                    trajectory_id=trajectory_id,
                    agent_id=agent,
                    accept=False,
                    source="human",
                    latency=self.timeout,
                )
                self._decisions[trajectory_id] = decision
            self._pending.pop(trajectory_id, None)
            self._events.pop(trajectory_id, None)
            self._submitted_at.pop(trajectory_id, None)
            return decision


def downsample(points: np.ndarray, limit: int = 200) -> list:
    if len(points) <= limit:
        return np.asarray(points, dtype=float).round(3).tolist()
    idx = np.linspace(0, len(points) - 1, limit).astype(int)
    return np.asarray(points, dtype=float)[idx].round(3).tolist()


class HumanJudge:
    """Judge backed by the exchange; trajectories are rendered for a person."""

    def __init__(self, exchange: JudgmentExchange):
        self.exchange = exchange

    def submit(self, trajectory, demo_set) -> None:
        demo_rep = demo_set.representative_path
        self.exchange.submit(
            {
                "trajectory_id": trajectory.trajectory_id,
                "agent": trajectory.agent_id,
                "episode": trajectory.episode_index,
                "steps": len(trajectory),
                "term_reason": trajectory.term_reason,
                "candidate_path": downsample(trajectory.poses),
                "partner_path": downsample(trajectory.partner_poses),
                "eval_rewards": downsample(trajectory.eval_rewards.reshape(-1, 1)),
                "mean_eval_reward": trajectory.mean_eval_reward,
                "demo_summary": {
                    "mean_eval_reward": demo_set.mean_eval_reward,
                    "provenance": demo_set.provenance,
                    "representative_path": downsample(demo_rep) if demo_rep is not None else None,
                },
                "created_at": time.time(),
            }
        )

    def wait(self, trajectory_id: str) -> JudgeDecision:
        return self.exchange.wait(trajectory_id)


class SessionState:
    """Thread-safe view of a running session for the API layer."""

    def __init__(self, config: SessionConfig):
        self.config = config
        self._lock = threading.Lock()
        self._records: list[dict] = []
        self._status: dict = {"episode": 0, "running": False, "fault": None}
        self._subscribers: list = []

    def publish(self, record: dict) -> None:
        import queue as _queue

        with self._lock:
            self._records.append(record)
            for q in self._subscribers:
                try:
                    q.put_nowait(record)
                except _queue.Full:
                    pass

    def subscribe(self):
        import queue as _queue

        q = _queue.Queue(maxsize=1000)
        with self._lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def records_after(self, after: int) -> tuple[list[dict], int]:
        with self._lock:
            return self._records[after:], len(self._records)

    def update_status(self, **kwargs) -> None:
        with self._lock:
            self._status.update(kwargs)

    def status(self) -> dict:
        with self._lock:
            return dict(self._status)


@dataclass
class SessionResult:
    episodes_run: int
    metrics_path: Path
    checkpoint_path: Path
    replacements: dict[str, int]
    final_mean_eval: dict[str, float]
    fault: str | None = None


def _record_line(record: dict) -> str:
    return json.dumps(record, separators=(", ", ": "))


def _make_metric_record(report, agent_report) -> dict:
    return {
        "episode": report.episode,
        "agent": agent_report.agent_id,
        "steps": agent_report.steps,
        "term_reason": agent_report.term_reason,
        "mean_disc_reward": round(agent_report.mean_disc_reward, 6),
        "mean_eval_reward": round(agent_report.mean_eval_reward, 6),
        "success": report.success,
        "judged": agent_report.judged,
        "accepted": agent_report.accepted,
        "pool_pairs": agent_report.pool_pairs,
        "demo_provenance": agent_report.demo_provenance,
    }


def save_checkpoint(
    path: Path, episode: int, config: SessionConfig, rng: np.random.Generator, leader, follower
) -> None:
    blob = {
        "version": CHECKPOINT_VERSION,
        "episode": episode,
        "config": config.to_dict(),
        "rng_state": rng.bit_generator.state,
        "leader": learner_to_dict(leader),
        "follower": learner_to_dict(follower),
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(blob), encoding="utf-8")
    tmp.replace(path)


def load_checkpoint(path: str | Path) -> dict:
    blob = json.loads(Path(path).read_text(encoding="utf-8"))
    if blob.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {blob.get('version')}")
    return blob


def restore_learners(blob: dict):
    return learner_from_dict(blob["leader"]), learner_from_dict(blob["follower"])


def run_session(
    config: SessionConfig,
    state: SessionState | None = None,
    exchange: JudgmentExchange | None = None,
    resume_from: str | Path | None = None,
) -> SessionResult:
    """Run the configured number of episodes, streaming metrics and
    checkpoints into ``out_dir``.

    With a human judge the loop blocks at each episode end until decisions
    arrive through ``exchange`` (or its timeout rejects). Faults abort the
    session cleanly after flushing everything written so far.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metrics_path = out_dir / "metrics.jsonl"
    task = read_task_file(config.task)

    if resume_from is not None:
        blob = load_checkpoint(resume_from)
        start_episode = blob["episode"]
        leader, follower = restore_learners(blob)
        rng = np.random.default_rng()
        rng.bit_generator.state = blob["rng_state"]
        existing = []
        if metrics_path.exists():
            for line in metrics_path.read_text(encoding="utf-8").splitlines():
                rec = json.loads(line)
                if rec.get("episode", config.episodes) < start_episode:
                    existing.append(line)
        metrics_path.write_text("".join(l + "\n" for l in existing), encoding="utf-8")
    else:
        start_episode = 0
        rng = np.random.default_rng(config.train.seed)
        leader = build_learner("leader", config.train, rng, demo_set_from_file(config.demos_leader))
        follower = build_learner(
            "follower", config.train, rng, demo_set_from_file(config.demos_follower)
        )
        metrics_path.write_text("", encoding="utf-8")

    if config.mode == "magaisil" and config.judge == "human":
        if exchange is None:
            raise ValueError("human judge requires a judgment exchange")
        judge = HumanJudge(exchange)
    else:
        judge = OracleJudge()

    if state is not None:
        state.update_status(
            running=True,
            episode=start_episode,
            total_episodes=config.episodes,
            mode=config.mode,
            judge=config.judge,
            task=task.task_id,
        )

    replacements = {"leader": 0, "follower": 0}
    final_mean_eval = {"leader": 0.0, "follower": 0.0}
    fault = None
    episode = start_episode
    ckpt_path = out_dir / "checkpoint_final.json"

    with metrics_path.open("a", encoding="utf-8") as metrics_file:

        def emit(record: dict):
            metrics_file.write(_record_line(record) + "\n")
            metrics_file.flush()
            if state is not None:
                state.publish(record)

        try:
            for episode in range(start_episode, config.episodes):
                report, trajs = run_episode(
                    leader,
                    follower,
                    task,
                    config.train,
                    rng,
                    episode,
                    mode=config.mode,
                    judge=judge if config.mode == "magaisil" else None,
                )
                for agent_report in (report.leader, report.follower):
                    emit(_make_metric_record(report, agent_report))
                    final_mean_eval[agent_report.agent_id] = agent_report.mean_eval_reward
                    if agent_report.pool_outcome == "replaced":
                        replacements[agent_report.agent_id] += 1
                        learner = leader if agent_report.agent_id == "leader" else follower
                        emit(
                            {
                                "event": "replacement",
                                "episode": episode,
                                "agent": agent_report.agent_id,
                                "demo_pairs": learner.demo_set.total_pairs,
                                "demo_mean_eval_reward": round(
                                    learner.demo_set.mean_eval_reward, 6
                                ),
                            }
                        )
                if state is not None:
                    state.update_status(
                        episode=episode + 1,
                        agents={
                            learner.agent_id: {
                                "pool_pairs": learner.pool.total_pairs,
                                "pool_capacity": learner.pool.capacity_pairs,
                                "demo_provenance": learner.demo_set.provenance,
                                "demo_mean_eval_reward": round(
                                    learner.demo_set.mean_eval_reward, 6
                                ),
                                "replacements": replacements[learner.agent_id],
                            }
                            for learner in (leader, follower)
                        },
                    )
                if (
                    config.checkpoint_interval
                    and (episode + 1) % config.checkpoint_interval == 0
                    and episode + 1 < config.episodes
                ):
                    save_checkpoint(
                        out_dir / f"checkpoint_ep{episode + 1:06d}.json",
                        episode + 1,
                        config,
                        rng,
                        leader,
                        follower,
                    )
        except TrainingFault as exc:
            fault = str(exc)

        save_checkpoint(ckpt_path, episode + (0 if fault else 1), config, rng, leader, follower)

    if state is not None:
        state.update_status(running=False, fault=fault)
    return SessionResult(
        episodes_run=episode + (0 if fault else 1) - start_episode,
        metrics_path=metrics_path,
        checkpoint_path=ckpt_path,
        replacements=replacements,
        final_mean_eval=final_mean_eval,
        fault=fault,
    )
