/**
 * Dashboard view model. Pure data in, pure data out: the whole view is a
 * function of fetched API payloads plus locally tracked in-flight intents,
 * so a reload reconstructs the same picture. Nothing here ever fabricates
 * values or auto-submits a judgment.
 */

import type {
  AgentId,
  MetricRecord,
  PendingJudgment,
  SessionStatus,
  StreamRecord,
} from "./types.js";
import { isReplacement } from "./types.js";

export interface PoolGauge {
  pairs: number;
  capacity: number;
  fraction: number;
}

export interface AgentView {
  provenance: string;
  demoMean: number | null;
  pool: PoolGauge;
  replacements: number;
  pending: PendingJudgment | null;
  /** accept/reject buttons are enabled only for a judgable pending */
  controlsEnabled: boolean;
  decidedVerdict: boolean | null;
}

export interface DashboardModel {
  connected: boolean;
  running: boolean;
  episode: number;
  totalEpisodes: number | null;
  mode: string;
  judge: string;
  task: string;
  fault: string | null;
  agents: Record<AgentId, AgentView>;
}

export interface JudgmentTracker {
  inFlight: Set<string>;
  decided: Map<string, boolean>;
}

export function newTracker(): JudgmentTracker {
  return { inFlight: new Set(), decided: new Map() };
}

/** Guard for client-side idempotence: true exactly once per trajectory. */
export function beginSubmit(tracker: JudgmentTracker, trajectoryId: string): boolean {
  if (tracker.inFlight.has(trajectoryId) || tracker.decided.has(trajectoryId)) {
    return false;
  }
  tracker.inFlight.add(trajectoryId);
  return true;
}

export function finishSubmit(
  tracker: JudgmentTracker,
  trajectoryId: string,
  accept: boolean,
  outcome: "ok" | "conflict" | "unknown",
): void {
  tracker.inFlight.delete(trajectoryId);
  if (outcome === "ok" || outcome === "conflict") {
    tracker.decided.set(trajectoryId, accept);
  }
}

const AGENTS: AgentId[] = ["leader", "follower"];

export function buildModel(
  status: SessionStatus | null,
  pending: PendingJudgment[],
  tracker: JudgmentTracker,
  connected: boolean,
): DashboardModel {
  const agents = {} as Record<AgentId, AgentView>;
  for (const agent of AGENTS) {
    const agentStatus = status?.agents?.[agent];
    const p = pending.find((x) => x.agent === agent) ?? null;
    const decided = p ? (tracker.decided.get(p.trajectory_id) ?? null) : null;
    agents[agent] = {
      provenance: agentStatus?.demo_provenance ?? "unknown",
      demoMean: agentStatus?.demo_mean_eval_reward ?? null,
      pool: {
        pairs: agentStatus?.pool_pairs ?? 0,
        capacity: agentStatus?.pool_capacity ?? 2000,
        fraction:
          agentStatus && agentStatus.pool_capacity > 0
            ? agentStatus.pool_pairs / agentStatus.pool_capacity
            : 0,
      },
      replacements: agentStatus?.replacements ?? 0,
      pending: p,
      controlsEnabled:
        p !== null && !tracker.inFlight.has(p.trajectory_id) && decided === null,
      decidedVerdict: decided,
    };
  }
  return {
    connected,
    running: status?.running ?? false,
    episode: status?.episode ?? 0,
    totalEpisodes: status?.total_episodes ?? null,
    mode: String(status?.mode ?? status?.config?.["mode"] ?? "?"),
    judge: String(status?.judge ?? status?.config?.["judge"] ?? "?"),
    task: String(status?.task ?? status?.config?.["task"] ?? "?"),
    fault: status?.fault ?? null,
    agents,
  };
}

export interface MetricSeries {
  episodes: number[];
  values: number[];
}

export interface MetricsView {
  perAgent: Record<AgentId, MetricSeries>;
  replacementEpisodes: Record<AgentId, number[]>;
  successRateLast50: number;
  provenance: Record<AgentId, string>;
}

/** Fold the metrics stream into chart series and the provenance badges. */
export function foldMetrics(records: StreamRecord[]): MetricsView {
  const perAgent: Record<AgentId, MetricSeries> = {
    leader: { episodes: [], values: [] },
    follower: { episodes: [], values: [] },
  };
  const replacementEpisodes: Record<AgentId, number[]> = { leader: [], follower: [] };
  const provenance: Record<AgentId, string> = { leader: "unknown", follower: "unknown" };
  const successes: boolean[] = [];
  for (const r of records) {
    if (isReplacement(r)) {
      replacementEpisodes[r.agent].push(r.episode);
      provenance[r.agent] = "self-generated";
      continue;
    }
    const m = r as MetricRecord;
    perAgent[m.agent].episodes.push(m.episode);
    perAgent[m.agent].values.push(m.mean_eval_reward);
    provenance[m.agent] = m.demo_provenance;
    if (m.agent === "leader") successes.push(m.success);
  }
  const last = successes.slice(-50);
  return {
    perAgent,
    replacementEpisodes,
    successRateLast50: last.length
      ? last.filter(Boolean).length / last.length
      : 0,
    provenance,
  };
}
