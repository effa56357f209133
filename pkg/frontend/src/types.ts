/** Payload shapes of the session API. */

export type AgentId = "leader" | "follower";

export interface AgentStatus {
  pool_pairs: number;
  pool_capacity: number;
  demo_provenance: string;
  demo_mean_eval_reward: number;
  replacements: number;
}

export interface SessionStatus {
  episode: number;
  total_episodes?: number;
  running: boolean;
  fault: string | null;
  mode?: string;
  judge?: string;
  task?: string;
  agents?: Partial<Record<AgentId, AgentStatus>>;
  config?: Record<string, unknown>;
}

export interface TaskGeometry {
  task_id: string;
  width: number;
  goal_progress: number;
  total_length: number;
  centerline: number[][];
  left_wall: number[][];
  right_wall: number[][];
  obstacles: number[][][];
}

export interface DemoSummary {
  mean_eval_reward: number;
  provenance: string;
  representative_path: number[][] | null;
}

export interface PendingJudgment {
  trajectory_id: string;
  agent: AgentId;
  episode: number;
  steps: number;
  term_reason: string;
  candidate_path: number[][];
  partner_path: number[][];
  eval_rewards: number[][];
  mean_eval_reward: number;
  demo_summary: DemoSummary;
  created_at: number;
}

export interface MetricRecord {
  episode: number;
  agent: AgentId;
  steps: number;
  term_reason: string;
  mean_disc_reward: number;
  mean_eval_reward: number;
  success: boolean;
  judged: boolean;
  accepted: boolean | null;
  pool_pairs: number;
  demo_provenance: string;
}

export interface ReplacementEvent {
  event: "replacement";
  episode: number;
  agent: AgentId;
  demo_pairs: number;
  demo_mean_eval_reward: number;
}

export type StreamRecord = MetricRecord | ReplacementEvent;

export function isReplacement(r: StreamRecord): r is ReplacementEvent {
  return (r as ReplacementEvent).event === "replacement";
}
