"""Acceptance suite: every release criterion with its pinned tolerance.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or in the
captured output). The training-based criteria reuse deterministic runs
cached under ~/.cache/magaisil-acceptance keyed by their exact settings;
delete that directory to force recomputation.
"""

import json
import math
import shutil
import time
from pathlib import Path

import numpy as np
import pytest

from magaisil import nn
from magaisil.algo import (
    DemoSet,
    JudgeDecision,
    TrainConfig,
    Trajectory,
    build_learner,
    discriminator_reward,
    gae_from_arrays,
    pool_insert_and_maybe_replace,
)
from magaisil.cli import main as cli_main
from magaisil.demos import demo_set_from_file
from magaisil.evaluate import evaluate_checkpoint
from magaisil.service import SessionConfig, run_session
from magaisil.world import (
    Corridor,
    eval_reward_follower,
    eval_reward_leader,
    raycast_sonar,
    termination_reason,
)

SEEDS = (0, 1, 2)
TRAIN_EPISODES = 800
CACHE_ROOT = Path.home() / ".cache" / "magaisil-acceptance" / "v1"


def report(criterion: int, name: str, ok: bool, detail: str):
    print(f"ACCEPTANCE {criterion:2d} {name}: {'PASS' if ok else 'FAIL'} — {detail}", flush=True)
    assert ok, f"criterion {criterion} ({name}): {detail}"


# --- criterion 1: gradient correctness ---------------------------------------


def test_criterion_1_gradient_correctness():
    from .test_nn import HEAD_OUT, finite_difference_grads, relative_error

    t0 = time.monotonic()
    worst = 0.0
    for seed in range(10):
        for head in ("softmax", "scalar", "sigmoid"):
            rng = np.random.default_rng(seed)
            net = nn.build_mlp([5, 8, HEAD_OUT[head]], head, rng)
            x = rng.normal(size=(3, 5))
            coeffs = rng.normal(size=(3, HEAD_OUT[head]))
            _, cache = nn.forward(net, x)
            grads = nn.backward(net, cache, coeffs)
            fd = finite_difference_grads(net, x, coeffs)
            for a, b in zip(grads.weights + grads.biases, fd.weights + fd.biases):
                worst = max(worst, relative_error(a, b))
    elapsed = time.monotonic() - t0
    ok = worst < 1e-4 and elapsed < 60.0
    report(1, "gradient correctness", ok, f"max rel err {worst:.2e} in {elapsed:.1f}s")


# --- criterion 2: GAE oracle --------------------------------------------------


def test_criterion_2_gae_matches_brute_force():
    from .test_gae import brute_force_gae

    t0 = time.monotonic()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 21))
        rewards = rng.normal(size=n) * 5
        values = rng.normal(size=n) * 5
        bootstrap = float(rng.normal())
        gamma = float(rng.uniform(0.9, 0.999))
        lam = float(rng.uniform(0.0, 1.0))
        adv, ret = gae_from_arrays(rewards, values, bootstrap, gamma, lam)
        adv_bf, ret_bf = brute_force_gae(rewards, values, bootstrap, gamma, lam)
        worst = max(worst, float(np.max(np.abs(adv - adv_bf))), float(np.max(np.abs(ret - ret_bf))))
    elapsed = time.monotonic() - t0
    ok = worst < 1e-10 and elapsed < 60.0
    report(2, "return/advantage oracle", ok, f"max abs err {worst:.2e} in {elapsed:.1f}s")


# --- criterion 3: reward formulas ---------------------------------------------


def test_criterion_3_reward_formulas():
    checks = [
        abs(eval_reward_leader(17.3) - 1.0),
        abs(eval_reward_leader(21.625) - 0.5),
        abs(eval_reward_leader(8.65) - 0.0),
        abs(eval_reward_follower(g=18.0, a=0.0, d=17.3) - 1.0),
        abs(eval_reward_follower(g=25.5, a=np.pi / 6, d=17.3) - 0.5),
        abs(eval_reward_follower(g=33.0, a=np.pi / 3, d=17.3) - 0.0),
    ]
    worst = max(checks)

    rng = np.random.default_rng(0)
    demo = DemoSet.from_episodes(
        "leader", [(rng.uniform(5, 30, size=(50, 6)), rng.integers(0, 5, size=50))],
        "expert-optimal",
    )
    learner = build_learner("leader", TrainConfig(), rng, demo)
    for w in learner.disc.weights:
        w[:] = 0.0
    for b in learner.disc.biases:
        b[:] = 0.0  # sigmoid(0) = 0.5
    disc_err = abs(discriminator_reward(learner, np.full(6, 20.0), 2) - 0.693147)
    ok = worst < 1e-9 and disc_err < 1e-6
    report(3, "reward formulas", ok, f"reward table err {worst:.1e}, -log(1-D) err {disc_err:.1e}")


# --- criterion 4: sonar geometry ----------------------------------------------


def test_criterion_4_sonar_geometry():
    corridor = Corridor(
        centerline=np.array([[0.0, 0.0], [200.0, 0.0]]), width=30.0, goal_progress=200.0
    )
    scan = raycast_sonar(corridor, 100.0, 0.0, 0.0)
    outer_err = max(abs(scan[0] - 17.32), abs(scan[5] - 17.32))

    wide = Corridor(
        centerline=np.array([[0.0, 0.0], [500.0, 0.0]]), width=200.0, goal_progress=500.0
    )
    open_scan = raycast_sonar(wide, 250.0, 0.0, 0.0)
    ok = outer_err <= 0.1 and bool(np.all(open_scan == 33.0))
    report(
        4, "sonar geometry", ok,
        f"outer sectors {scan[0]:.4f}/{scan[5]:.4f} (target 17.32±0.1), open scan {open_scan.min()}",
    )


# --- criterion 5: termination boundaries --------------------------------------


def test_criterion_5_termination_boundaries():
    base = dict(
        leader_min=20.0, follower_min=20.0, g_f=17.0, a_f=0.0,
        progress=50.0, goal_progress=240.0, step_count=10, max_steps=600,
    )

    def term(**kw):
        return termination_reason(**{**base, **kw})

    cases = [
        (term(leader_min=2.0) == "collision_leader", "d=2.0 terminates"),
        (term(g_f=3.0) == "none", "g=3.0 continues"),
        (term(g_f=33.0) == "none", "g=33.0 continues"),
        (term(g_f=2.99) == "spacing_violation", "g=2.99 terminates"),
        (term(g_f=33.01) == "spacing_violation", "g=33.01 terminates"),
        (term(a_f=np.pi / 3) == "heading_violation", "a=pi/3 terminates"),
    ]
    failed = [label for ok, label in cases if not ok]
    report(5, "termination boundaries", not failed, "all six boundary cases" if not failed else f"failed: {failed}")


# --- criterion 6: demo quality gap --------------------------------------------


def test_criterion_6_demo_quality_gap(demo_runs_task1):
    opt = demo_runs_task1["optimal"].mean_eval_reward
    sub = demo_runs_task1["suboptimal"].mean_eval_reward
    gap_l = opt["leader"] - sub["leader"]
    gap_f = opt["follower"] - sub["follower"]
    ok = gap_l >= 0.15 and gap_f >= 0.15
    report(6, "demo quality gap", ok, f"leader gap {gap_l:.3f}, follower gap {gap_f:.3f} (>=0.15)")


# --- criterion 7: pool semantics ----------------------------------------------


def test_criterion_7_pool_replacement_semantics():
    rng = np.random.default_rng(0)
    demo = DemoSet.from_episodes(
        "leader", [(np.full((50, 6), 10.0), np.full(50, 2, dtype=int))], "expert-suboptimal"
    )
    learner = build_learner("leader", TrainConfig(), rng, demo)
    original = learner.demo_set

    def traj(steps, ep):
        return Trajectory(
            agent_id="leader", episode_index=ep,
            observations=np.full((steps, 6), 17.3), actions=np.full(steps, 2, dtype=int),
            log_probs=np.zeros(steps), values=np.zeros(steps), disc_rewards=np.zeros(steps),
            term_reason="goal_reached", eval_rewards=np.full(steps, 1.0),
            poses=np.zeros((steps, 2)),
        )

    def accept(t):
        return JudgeDecision(t.trajectory_id, "leader", True, "oracle", 0.0)

    replacements = 0
    for ep in range(19):  # 19 x 100 = 1900 pairs
        outcome = pool_insert_and_maybe_replace(learner, traj(100, ep), accept(traj(100, ep)))
        replacements += outcome == "replaced"
    state_at_1900 = (learner.pool.total_pairs, learner.demo_set is original)
    final = pool_insert_and_maybe_replace(learner, traj(150, 99), accept(traj(150, 99)))
    replacements += final == "replaced"
    ok = (
        state_at_1900 == (1900, True)
        and final == "replaced"
        and replacements == 1
        and learner.pool.total_pairs == 0
        and learner.demo_set.total_pairs == 2050
        and learner.demo_set.provenance == "self-generated"
    )
    report(
        7, "pool replacement semantics", ok,
        f"one replacement at 2050 pairs, pool emptied, provenance {learner.demo_set.provenance}",
    )


# --- criteria 8-10: desk-scale training runs ----------------------------------


def _cached_session(mode: str, quality: str, seed: int, demo_files: dict) -> dict:
    key = f"{mode}-{quality}-s{seed}-e{TRAIN_EPISODES}"
    cache_dir = CACHE_ROOT / key
    metrics_path = cache_dir / "metrics.jsonl"
    ckpt_path = cache_dir / "checkpoint_final.json"
    if not (metrics_path.exists() and ckpt_path.exists()):
        if cache_dir.exists():
            shutil.rmtree(cache_dir)
        cache_dir.mkdir(parents=True)
        config = SessionConfig(
            mode=mode,
            judge="oracle",
            task="task1",
            demos_leader=str(demo_files["leader"]),
            demos_follower=str(demo_files["follower"]),
            episodes=TRAIN_EPISODES,
            out_dir=str(cache_dir),
            train=TrainConfig(seed=seed),
        )
        result = run_session(config)
        assert result.fault is None, f"training fault in {key}: {result.fault}"
    records = [json.loads(l) for l in metrics_path.read_text().splitlines()]
    episode_records = [r for r in records if "event" not in r]
    replacements = {
        agent: sum(1 for r in records if r.get("event") == "replacement" and r["agent"] == agent)
        for agent in ("leader", "follower")
    }
    final50 = {}
    for agent in ("leader", "follower"):
        rows = [r["mean_eval_reward"] for r in episode_records if r["agent"] == agent]
        final50[agent] = float(np.mean(rows[-50:]))
    return {
        "key": key,
        "checkpoint": ckpt_path,
        "final50": final50,
        "replacements": replacements,
    }


@pytest.fixture(scope="session")
def training_runs(demo_runs_task1):
    optimal_files = demo_runs_task1["optimal"].files
    suboptimal_files = demo_runs_task1["suboptimal"].files
    runs = {"magail-optimal": {}, "magaisil-suboptimal": {}, "magail-suboptimal": {}}
    for seed in SEEDS:
        runs["magail-optimal"][seed] = _cached_session("magail", "optimal", seed, optimal_files)
    for seed in SEEDS:
        runs["magaisil-suboptimal"][seed] = _cached_session(
            "magaisil", "suboptimal", seed, suboptimal_files
        )
        runs["magail-suboptimal"][seed] = _cached_session(
            "magail", "suboptimal", seed, suboptimal_files
        )
    return runs


@pytest.mark.slow
def test_criterion_8_magail_with_optimal_demos(training_runs, demo_runs_task1):
    demo_mean = demo_runs_task1["optimal"].mean_eval_reward["leader"]
    best = None
    for seed in SEEDS:
        run = training_runs["magail-optimal"][seed]
        summary = evaluate_checkpoint(run["checkpoint"], "task1", episodes=20)
        gap = abs(summary.mean_eval_reward["leader"] - demo_mean)
        entry = (summary.success_rate, -gap, seed, summary)
        if best is None or entry > best:
            best = entry
    success_rate, neg_gap, seed, summary = best
    ok = success_rate >= 0.8 and -neg_gap <= 0.1
    report(
        8, "adversarial imitation of optimal demos", ok,
        f"best seed {seed}: success {success_rate:.0%}, leader eval "
        f"{summary.mean_eval_reward['leader']:.3f} vs demo {demo_mean:.3f} (|diff|<=0.1)",
    )


@pytest.fixture(scope="session")
def criterion_9_verdicts(training_runs, demo_runs_task1):
    sub_means = demo_runs_task1["suboptimal"].mean_eval_reward
    verdicts = {}
    for seed in SEEDS:
        sil = training_runs["magaisil-suboptimal"][seed]
        mag = training_runs["magail-suboptimal"][seed]
        surpasses = all(sil["final50"][a] > sub_means[a] for a in ("leader", "follower"))
        replaced = sum(sil["replacements"].values()) >= 1
        magail_hugs = all(abs(mag["final50"][a] - sub_means[a]) <= 0.1 for a in ("leader", "follower"))
        margin = min(sil["final50"][a] - sub_means[a] for a in ("leader", "follower"))
        verdicts[seed] = {
            "pass": surpasses and replaced and magail_hugs,
            "surpasses": surpasses,
            "replaced": replaced,
            "magail_hugs": magail_hugs,
            "margin": margin,
            "sil": sil,
            "mag": mag,
        }
    return verdicts


@pytest.mark.slow
def test_criterion_9_self_imitation_surpasses_suboptimal(criterion_9_verdicts, demo_runs_task1):
    sub_means = demo_runs_task1["suboptimal"].mean_eval_reward
    passing = [s for s, v in criterion_9_verdicts.items() if v["pass"]]
    details = []
    for seed, v in criterion_9_verdicts.items():
        details.append(
            f"seed {seed}: sil final50 ({v['sil']['final50']['leader']:.3f},"
            f"{v['sil']['final50']['follower']:.3f}) vs demo ({sub_means['leader']:.3f},"
            f"{sub_means['follower']:.3f}), repl {sum(v['sil']['replacements'].values())}, "
            f"magail band {v['magail_hugs']}"
        )
    report(9, "self-imitation surpasses suboptimal demos", bool(passing), "; ".join(details))


@pytest.mark.slow
def test_criterion_10_adaptation_to_other_tasks(criterion_9_verdicts):
    candidates = sorted(
        (s for s, v in criterion_9_verdicts.items() if v["pass"]),
        key=lambda s: -criterion_9_verdicts[s]["margin"],
    )
    if not candidates:
        report(10, "adaptation to unseen tasks", False, "no seed passed criterion 9")
    results = []
    for seed in candidates:
        ckpt = criterion_9_verdicts[seed]["sil"]["checkpoint"]
        t2 = evaluate_checkpoint(ckpt, "task2", episodes=20)
        t3 = evaluate_checkpoint(ckpt, "task3", episodes=20)
        results.append((seed, t2.success_rate, t3.success_rate))
        if t2.success_rate >= 0.5 and t3.success_rate >= 0.5:
            report(
                10, "adaptation to unseen tasks", True,
                f"seed {seed}: task2 {t2.success_rate:.0%}, task3 {t3.success_rate:.0%}",
            )
            return
    report(
        10, "adaptation to unseen tasks", False,
        "; ".join(f"seed {s}: task2 {a:.0%}, task3 {b:.0%}" for s, a, b in results),
    )


# --- criterion 11: command determinism ----------------------------------------


def test_criterion_11_byte_identical_reruns(tmp_path, demo_runs_task1):
    demo_files = demo_runs_task1["suboptimal"].files

    rc = cli_main([
        "gen-demos", "--task", "task1", "--quality", "suboptimal",
        "--episodes", "2", "--seed", "5", "--out", str(tmp_path / "d1"),
    ])
    rc |= cli_main([
        "gen-demos", "--task", "task1", "--quality", "suboptimal",
        "--episodes", "2", "--seed", "5", "--out", str(tmp_path / "d2"),
    ])
    demos_same = (tmp_path / "d1" / "suboptimal_leader.jsonl").read_bytes() == (
        tmp_path / "d2" / "suboptimal_leader.jsonl"
    ).read_bytes()

    train_flags = [
        "train", "--mode", "magaisil", "--judge", "oracle", "--task", "task1",
        "--episodes", "4", "--seed", "3",
        "--demos-leader", str(demo_files["leader"]),
        "--demos-follower", str(demo_files["follower"]),
    ]
    rc |= cli_main(train_flags + ["--out-dir", str(tmp_path / "r1")])
    rc |= cli_main(train_flags + ["--out-dir", str(tmp_path / "r2")])
    train_same = (tmp_path / "r1" / "metrics.jsonl").read_bytes() == (
        tmp_path / "r2" / "metrics.jsonl"
    ).read_bytes()

    eval_flags = [
        "eval", "--checkpoint", str(tmp_path / "r1" / "checkpoint_final.json"),
        "--task", "task1", "--episodes", "3", "--seed", "0",
    ]
    rc |= cli_main(eval_flags + ["--out", str(tmp_path / "e1.jsonl")])
    rc |= cli_main(eval_flags + ["--out", str(tmp_path / "e2.jsonl")])
    eval_same = (tmp_path / "e1.jsonl").read_bytes() == (tmp_path / "e2.jsonl").read_bytes()

    ok = rc == 0 and demos_same and train_same and eval_same
    report(
        11, "oracle-mode determinism", ok,
        f"gen-demos {demos_same}, train {train_same}, eval {eval_same}",
    )
