/**
 * End-to-end check against a real served session: gen-demos + serve run as
 * subprocesses, the dashboard's API client drives the judging loop.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionApi } from "../src/api.js";
import type { PendingJudgment } from "../src/types.js";

const PY = process.env.MAGAISIL_PYTHON ?? "python3";
const PORT = 18000 + Math.floor(Math.random() * 10000);
const TIMEOUT = 300_000;

let serveProc: ChildProcess | null = null;
let workDir: string;
const api = new SessionApi(`http://127.0.0.1:${PORT}`);

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

async function waitFor<T>(
  fn: () => Promise<T | null>,
  timeoutMs: number,
  intervalMs = 100,
): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  let lastErr: unknown = null;
  while (Date.now() < deadline) {
    try {
      const v = await fn();
      if (v !== null) return v;
    } catch (err) {
      lastErr = err;
    }
    await sleep(intervalMs);
  }
  throw new Error(`timed out waiting; last error: ${String(lastErr)}`);
}

beforeAll(() => {
  workDir = mkdtempSync(join(tmpdir(), "magaisil-ui-"));
  const gen = spawnSync(
    PY,
    [
      "-m", "magaisil.cli", "gen-demos",
      "--task", "task1", "--quality", "suboptimal",
      "--episodes", "2", "--seed", "3", "--out", join(workDir, "demos"),
    ],
    { encoding: "utf-8" },
  );
  expect(gen.status, gen.stderr).toBe(0);

  serveProc = spawn(PY, [
    "-m", "magaisil.cli", "serve",
    "--mode", "magaisil", "--judge", "human",
    "--task", "task1", "--episodes", "3", "--seed", "5",
    "--judgment-timeout", "120",
    "--demos-leader", join(workDir, "demos", "suboptimal_leader.jsonl"),
    "--demos-follower", join(workDir, "demos", "suboptimal_follower.jsonl"),
    "--out-dir", join(workDir, "run"),
    "--port", String(PORT),
  ]);
}, TIMEOUT);

afterAll(async () => {
  serveProc?.kill("SIGKILL");
  await sleep(100);
});

describe("live session", () => {
  it(
    "lists pendings promptly, accept unblocks training and fills the pool gauge",
    async () => {
      await waitFor(async () => ((await api.status()).running ? true : null), 120_000);

      // the pending judgment shows up quickly after the episode ends
      const firstSeen = await waitFor<PendingJudgment>(async () => {
        const p = await api.pending();
        return p.length ? p[0] : null;
      }, 180_000);
      const listedAfter = Date.now() / 1000 - firstSeen.created_at;
      expect(listedAfter).toBeLessThan(2.0);

      const before = await api.status();
      const agentBefore = before.agents?.[firstSeen.agent];
      const pairsBefore = agentBefore?.pool_pairs ?? 0;

      expect(await api.submitJudgment(firstSeen.trajectory_id, true)).toBe("ok");
      // duplicate submissions conflict server-side
      expect(await api.submitJudgment(firstSeen.trajectory_id, false)).toBe("conflict");
      // the partner's episode verdict must also land before training resumes
      const partner = await waitFor(async () => {
        const p = await api.pending();
        const other = p.find((x) => x.trajectory_id !== firstSeen.trajectory_id);
        return other ?? null;
      }, 120_000);
      expect(await api.submitJudgment(partner.trajectory_id, false)).toBe("ok");

      // training proceeds: the judged trajectory's pairs land in the pool
      const pairsAfter = await waitFor(async () => {
        const s = await api.status();
        const pairs = s.agents?.[firstSeen.agent]?.pool_pairs ?? 0;
        return pairs > pairsBefore ? pairs : null;
      }, 120_000);
      expect(pairsAfter).toBe(pairsBefore + firstSeen.steps);

      // keep rejecting the rest so the session terminates; the server only
      // lingers briefly after the last episode, so track metrics as we go
      const deadline = Date.now() + 240_000;
      let lastRecords: unknown[] = [];
      while (Date.now() < deadline) {
        const metrics = await api.metricsAfter(0).catch(() => null);
        if (metrics) lastRecords = metrics.records;
        const status = await api.status().catch(() => null);
        if (status && !status.running) break;
        if (!status && lastRecords.length) break; // server already gone
        const pending = await api.pending().catch(() => [] as PendingJudgment[]);
        for (const p of pending) {
          if (p.trajectory_id !== firstSeen.trajectory_id) {
            await api.submitJudgment(p.trajectory_id, false).catch(() => undefined);
          }
        }
        await sleep(100);
      }
      const episodeRecords = lastRecords.filter((r) => !(r as { event?: string }).event);
      expect(episodeRecords.length).toBeGreaterThanOrEqual(2);
    },
    TIMEOUT,
  );
});
