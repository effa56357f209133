"""Command-line entry point.

Commands: gen-demos, train, eval, replay, serve. Exit codes: 0 success,
1 usage or configuration error, 2 runtime fault.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from .algo import TrainingFault
from .demos import QUALITIES, record_demos
from .evaluate import evaluate_checkpoint
from .render import corridor_svg, load_paths_file
from .service import SessionConfig, load_session_config, run_session, serve
from .service.server import DATA_DIR_ENV
from .world import TaskFileError, load_task, read_task_file

USAGE_EXIT = 1
FAULT_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="magaisil", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-demos", help="record scripted demonstrations")
    p.add_argument("--task", required=True, help="task id (task1..task3) or task file path")
    p.add_argument("--quality", choices=QUALITIES, required=True)
    p.add_argument("--episodes", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory for demo files")

    p = sub.add_parser("train", help="run a training session")
    _add_session_flags(p)
    p.add_argument("--resume", help="resume from a session checkpoint")

    p = sub.add_parser("eval", help="greedy evaluation of a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--episodes", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write a per-episode report (jsonl)")

    p = sub.add_parser("replay", help="render corridor and paths to SVG")
    p.add_argument("--trajectory-file", required=True, help="eval report or path JSON")
    p.add_argument("--task", help="task id/path; defaults to the file's header")
    p.add_argument("--out", required=True, help="output SVG path")

    p = sub.add_parser("serve", help="train with the judging/monitoring API attached")
    _add_session_flags(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    return parser


def _add_session_flags(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=("magail", "magaisil"))
    p.add_argument("--judge", choices=("oracle", "human"))
    p.add_argument("--task")
    p.add_argument("--demos-leader")
    p.add_argument("--demos-follower")
    p.add_argument("--episodes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="session config file (TOML); flags win")
    p.add_argument("--out-dir")
    p.add_argument("--checkpoint-interval", type=int)
    p.add_argument("--judgment-timeout", type=float)


def _session_config_from_args(args, serve_mode: bool) -> SessionConfig:
    if args.config:
        config = load_session_config(args.config)
    else:
        config = SessionConfig()
    updates = {}
    env_data_dir = os.environ.get(DATA_DIR_ENV)
    if env_data_dir and getattr(args, "out_dir", None) is None:
        updates["out_dir"] = str(Path(env_data_dir) / Path(config.out_dir).name)
    for flag, field_name in (
        ("mode", "mode"),
        ("judge", "judge"),
        ("task", "task"),
        ("demos_leader", "demos_leader"),
        ("demos_follower", "demos_follower"),
        ("episodes", "episodes"),
        ("out_dir", "out_dir"),
        ("checkpoint_interval", "checkpoint_interval"),
        ("judgment_timeout", "judgment_timeout"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            updates[field_name] = value
    train = config.train
    if getattr(args, "seed", None) is not None:
        train = dataclasses.replace(train, seed=args.seed)
    return dataclasses.replace(config, serve=serve_mode, train=train, **updates)


def _require_demos(config: SessionConfig):
    for label, path in (("--demos-leader", config.demos_leader),
                        ("--demos-follower", config.demos_follower)):
        if not path:
            raise TaskFileError(label.lstrip("-"), "demo file required for training")
        if not Path(path).exists():
            raise TaskFileError(label.lstrip("-"), f"demo file not found: {path}")


def cmd_gen_demos(args) -> int:
    task = read_task_file(args.task)
    report = record_demos(task, args.quality, args.episodes, args.seed, args.out)
    print(f"recorded {report.episodes} episodes ({report.attempts} attempts) on {task.task_id}")
    for agent, path in report.files.items():
        print(f"  {agent}: {path} mean_eval_reward={report.mean_eval_reward[agent]:.4f}")
    return 0


def cmd_train(args) -> int:
    config = _session_config_from_args(args, serve_mode=False)
    read_task_file(config.task)  # validate before side effects
    if args.resume is None:
        _require_demos(config)
    result = run_session(config, resume_from=args.resume)
    print(f"trained {result.episodes_run} episodes -> {result.metrics_path}")
    print(f"checkpoint: {result.checkpoint_path}")
    for agent, n in result.replacements.items():
        if n:
            print(f"  {agent}: {n} demo replacement(s)")
    if result.fault:
        print(f"training fault: {result.fault}", file=sys.stderr)
        return FAULT_EXIT
    return 0


def cmd_eval(args) -> int:
    summary = evaluate_checkpoint(args.checkpoint, args.task, args.episodes, args.out)
    print(
        f"{summary.task_id}: success_rate={summary.success_rate:.2f} "
        f"mean_steps={summary.mean_steps:.1f} "
        f"r_leader={summary.mean_eval_reward['leader']:.4f} "
        f"r_follower={summary.mean_eval_reward['follower']:.4f}"
    )
    if summary.report_path:
        print(f"report: {summary.report_path}")
    return 0


def cmd_replay(args) -> int:
    task_id, paths = load_paths_file(args.trajectory_file)
    task = args.task or task_id
    if task is None:
        raise TaskFileError("task", "no --task given and the file names none")
    corridor = load_task(task)
    svg = corridor_svg(corridor, paths)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg, encoding="utf-8")
    print(f"wrote {out}")
    return 0


def cmd_serve(args) -> int:
    config = _session_config_from_args(args, serve_mode=True)
    read_task_file(config.task)
    _require_demos(config)
    return serve(config, host=args.host, port=args.port)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen-demos": cmd_gen_demos,
        "train": cmd_train,
        "eval": cmd_eval,
        "replay": cmd_replay,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (TaskFileError, ValueError, FileNotFoundError) as exc:
        print(f"magaisil {args.command}: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except TrainingFault as exc:
        print(f"magaisil {args.command}: training fault: {exc}", file=sys.stderr)
        return FAULT_EXIT


if __name__ == "__main__":
    sys.exit(main())
