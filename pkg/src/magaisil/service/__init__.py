"""Session orchestration and the interactive judging API."""

from .server import DEFAULT_PORT, build_app, serve, task_geometry
from .session import (
    HumanJudge,
    JudgmentExchange,
    SessionConfig,
    SessionResult,
    SessionState,
    load_checkpoint,
    load_session_config,
    restore_learners,
    run_session,
    save_checkpoint,
)

__all__ = [
    "DEFAULT_PORT",
    "HumanJudge",
    "JudgmentExchange",
    "SessionConfig",
    "SessionResult",
    "SessionState",
    "build_app",
    "load_checkpoint",
    "load_session_config",
    "restore_learners",
    "run_session",
    "save_checkpoint",
    "serve",
    "task_geometry",
]
