/** Thin typed client over the session API. */

import type {
  PendingJudgment,
  SessionStatus,
  StreamRecord,
  TaskGeometry,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`API error ${status}`);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const res = await fetch(url);
  if (!res.ok) throw new ApiError(res.status, await res.text());
  return (await res.json()) as T;
}

export class SessionApi {
  constructor(public baseUrl: string = "") {}

  status(): Promise<SessionStatus> {
    return getJson(`${this.baseUrl}/api/status`);
  }

  task(): Promise<TaskGeometry> {
    return getJson(`${this.baseUrl}/api/task`);
  }

  pending(): Promise<PendingJudgment[]> {
    return getJson(`${this.baseUrl}/api/pending`);
  }

  async metricsAfter(after: number): Promise<{ records: StreamRecord[]; next: number }> {
    return getJson(`${this.baseUrl}/api/metrics?after=${after}`);
  }

  /**
   * Submit a verdict. Resolves to "ok" when recorded, "conflict" when a
   * decision already exists (e.g. a timeout raced us), "unknown" for a
   * stale trajectory id.
   */
  async submitJudgment(trajectoryId: string, accept: boolean): Promise<"ok" | "conflict" | "unknown"> {
    const res = await fetch(`${this.baseUrl}/api/judgment`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ trajectory_id: trajectoryId, accept }),
    });
    if (res.ok) return "ok";
    if (res.status === 409) return "conflict";
    if (res.status === 404) return "unknown";
    throw new ApiError(res.status, await res.text());
  }
}
