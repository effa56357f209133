import numpy as np
import pytest

from magaisil.algo import (
    DemoSet,
    JudgeDecision,
    OracleJudge,
    TrainConfig,
    Trajectory,
    TrajectoryPool,
    build_learner,
    pool_insert_and_maybe_replace,
)


def make_traj(steps, episode_index=0, eval_level=0.5, agent_id="leader"):
    dim = 6 if agent_id == "leader" else 8
    return Trajectory(
        agent_id=agent_id,
        episode_index=episode_index,
        observations=np.full((steps, dim), 20.0),
        actions=np.full(steps, 2, dtype=int),
        log_probs=np.zeros(steps),
        values=np.zeros(steps),
        disc_rewards=np.zeros(steps),
        term_reason="goal_reached",
        eval_rewards=np.full(steps, eval_level),
        poses=np.zeros((steps, 2)),
    )


def demo_with_obs(level, agent_id="leader", pairs=50):
    # leader obs of all `level` meters -> eval reward determined by level
    dim = 6 if agent_id == "leader" else 8
    obs = np.full((pairs, dim), level)
    actions = np.full(pairs, 2, dtype=int)
    return DemoSet.from_episodes(agent_id, [(obs, actions)], "expert-suboptimal")


def make_learner(demo=None):
    rng = np.random.default_rng(0)
    return build_learner("leader", TrainConfig(), rng, demo or demo_with_obs(17.3))


def decision_for(traj, accept):
    return JudgeDecision(
        trajectory_id=traj.trajectory_id,
        agent_id=traj.agent_id,
        accept=accept,
        source="oracle",
        latency=0.0,
    )


class TestPoolSemantics:
    def test_crossing_capacity_triggers_exactly_one_replacement(self):
        learner = make_learner()
        original_demo = learner.demo_set
        # fill to 1900 pairs with accepted trajectories
        filled = 0
        ep = 0
        while filled < 1900:
            t = make_traj(100, episode_index=ep)
            assert pool_insert_and_maybe_replace(learner, t, decision_for(t, True)) == "pooled"
            filled += 100
            ep += 1
        assert learner.pool.total_pairs == 1900
        assert learner.demo_set is original_demo

        t = make_traj(150, episode_index=ep)
        outcome = pool_insert_and_maybe_replace(learner, t, decision_for(t, True))
        assert outcome == "replaced"
        assert learner.demo_set is not original_demo
        assert learner.demo_set.total_pairs == 2050
        assert learner.demo_set.provenance == "self-generated"
        assert learner.pool.total_pairs == 0
        assert learner.pool.trajectories == []

    def test_rejected_leaves_pool_untouched(self):
        learner = make_learner()
        t = make_traj(100)
        assert pool_insert_and_maybe_replace(learner, t, decision_for(t, False)) == "rejected"
        assert learner.pool.total_pairs == 0

    def test_mismatched_decision_rejected(self):
        learner = make_learner()
        t = make_traj(10, episode_index=1)
        other = make_traj(10, episode_index=2)
        with pytest.raises(ValueError):
            pool_insert_and_maybe_replace(learner, t, decision_for(other, True))

    def test_pool_demo_set_keeps_episode_bounds(self):
        pool = TrajectoryPool("leader", capacity_pairs=2000)
        pool.trajectories = [make_traj(30, 0), make_traj(20, 1)]
        demo = pool.to_demo_set()
        assert demo.episode_bounds == [(0, 30), (30, 50)]
        assert demo.total_pairs == 50


class TestOracleJudge:
    def test_accepts_strictly_better(self):
        judge = OracleJudge()
        demo = demo_with_obs(25.0)  # mean eval reward 1 - |25-17.3|/8.65 ~ 0.11
        t = make_traj(50, eval_level=0.9)
        judge.submit(t, demo)
        d = judge.wait(t.trajectory_id)
        assert d.accept
        assert d.source == "oracle"

    def test_rejects_equal_means(self):
        judge = OracleJudge()
        demo = demo_with_obs(17.3)  # mean eval reward exactly 1.0
        t = make_traj(50, eval_level=1.0)
        judge.submit(t, demo)
        assert not judge.wait(t.trajectory_id).accept

    def test_rejects_worse(self):
        judge = OracleJudge()
        demo = demo_with_obs(17.3)
        t = make_traj(50, eval_level=0.2)
        judge.submit(t, demo)
        assert not judge.wait(t.trajectory_id).accept

    def test_suboptimal_demo_beaten_by_centered_run(self):
        # demo pairs 10 m from the nearest wall vs a trajectory whose scans sit
        # near the safe distance: the oracle must accept the trajectory
        judge = OracleJudge()
        demo = demo_with_obs(10.0)
        from magaisil.world import eval_reward_leader

        candidate = make_traj(50, eval_level=eval_reward_leader(17.0))
        judge.submit(candidate, demo)
        assert judge.wait(candidate.trajectory_id).accept

    def test_demo_mean_non_decreasing_across_replacements(self):
        learner = make_learner(demo_with_obs(10.0))
        judge = OracleJudge()
        means = [learner.demo_set.mean_eval_reward]
        ep = 0
        for _ in range(3):  # three replacement rounds
            while True:
                # candidates slightly better than the current demo mean,
                # realized through observations at improving wall distances
                level = 17.3 - 0.8 * (17.3 - 10.0) / (1 + ep * 0.2)
                t = Trajectory(
                    agent_id="leader",
                    episode_index=ep,
                    observations=np.full((500, 6), level),
                    actions=np.full(500, 2, dtype=int),
                    log_probs=np.zeros(500),
                    values=np.zeros(500),
                    disc_rewards=np.zeros(500),
                    term_reason="goal_reached",
                    eval_rewards=np.full(500, 0.0),
                    poses=np.zeros((500, 2)),
                )
                from magaisil.world import leader_eval_from_obs

                t.eval_rewards = np.array([leader_eval_from_obs(o) for o in t.observations])
                ep += 1
                judge.submit(t, learner.demo_set)
                d = judge.wait(t.trajectory_id)
                if not d.accept:
                    continue
                if pool_insert_and_maybe_replace(learner, t, d) == "replaced":
                    break
            means.append(learner.demo_set.mean_eval_reward)
        assert all(b >= a for a, b in zip(means, means[1:]))
