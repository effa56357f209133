/** DOM wiring: poll the API, render the model, forward judgment clicks. */

import { SessionApi } from "./api.js";
import {
  beginSubmit,
  buildModel,
  finishSubmit,
  foldMetrics,
  newTracker,
  type DashboardModel,
} from "./state.js";
import {
  corridorSvg,
  judgmentLayers,
  metricsChartSvg,
  sparklineSvg,
} from "./render.js";
import type { AgentId, StreamRecord, TaskGeometry } from "./types.js";

const POLL_MS = 500;
const api = new SessionApi("");
const tracker = newTracker();

let geometry: TaskGeometry | null = null;
let records: StreamRecord[] = [];
let nextMetric = 0;
let connected = false;

const el = (id: string) => document.getElementById(id)!;

function badge(provenance: string): string {
  const cls = provenance === "self-generated" ? "badge self" : "badge expert";
  return `<span class="${cls}">${provenance}</span>`;
}

function gaugeHtml(fraction: number, pairs: number, capacity: number): string {
  const pct = Math.min(100, fraction * 100);
  return (
    `<div class="gauge" data-pairs="${pairs}"><div class="gauge-fill" style="width:${pct.toFixed(1)}%"></div>` +
    `<span class="gauge-text">${pairs} / ${capacity} pairs</span></div>`
  );
}

function pendingCard(agent: AgentId, model: DashboardModel): string {
  const view = model.agents[agent];
  const p = view.pending;
  const head =
    `<h3>${agent} ${badge(view.provenance)}</h3>` +
    gaugeHtml(view.pool.fraction, view.pool.pairs, view.pool.capacity) +
    `<div class="demo-mean">demo mean eval: ${view.demoMean?.toFixed(3) ?? "?"}</div>`;
  if (!p) {
    return `${head}<p class="idle">no pending judgment</p>`;
  }
  const verdict =
    view.decidedVerdict === null
      ? ""
      : `<p class="verdict">recorded: ${view.decidedVerdict ? "accepted" : "rejected"}</p>`;
  const disabled = view.controlsEnabled ? "" : "disabled";
  return (
    head +
    `<p class="pending-info">episode ${p.episode}, ${p.steps} steps, ended: ${p.term_reason},
      mean eval ${p.mean_eval_reward.toFixed(3)}</p>` +
    (geometry ? corridorSvg(geometry, judgmentLayers(p)) : "") +
    `<div class="spark-row">advisory reward ${sparklineSvg(p.eval_rewards)}</div>` +
    `<div class="controls">
      <button class="accept" data-tid="${p.trajectory_id}" data-accept="true" ${disabled}>accept</button>
      <button class="reject" data-tid="${p.trajectory_id}" data-accept="false" ${disabled}>reject</button>
    </div>` +
    verdict
  );
}

function render(model: DashboardModel): void {
  el("session-line").textContent =
    `${model.task} · ${model.mode} · judge: ${model.judge} · episode ${model.episode}` +
    (model.totalEpisodes ? ` / ${model.totalEpisodes}` : "") +
    (model.running ? "" : " · finished") +
    (model.fault ? ` · FAULT: ${model.fault}` : "");
  el("stale-banner").style.display = model.connected ? "none" : "block";
  for (const agent of ["leader", "follower"] as AgentId[]) {
    el(`card-${agent}`).innerHTML = pendingCard(agent, model);
  }
  const view = foldMetrics(records);
  el("chart").innerHTML = metricsChartSvg(view, {
    leader: model.agents.leader.demoMean,
    follower: model.agents.follower.demoMean,
  });
  el("success-line").textContent =
    `success rate (last 50 episodes): ${(view.successRateLast50 * 100).toFixed(0)}%`;
}

async function submit(tid: string, accept: boolean): Promise<void> {
  if (!beginSubmit(tracker, tid)) return;
  try {
    const outcome = await api.submitJudgment(tid, accept);
    finishSubmit(tracker, tid, accept, outcome);
    if (outcome === "conflict") {
      el("stale-banner").textContent = "decision already recorded server-side";
    }
  } catch (err) {
    finishSubmit(tracker, tid, accept, "unknown");
    console.error(err);
  }
  await tick();
}

document.addEventListener("click", (ev) => {
  const target = ev.target as HTMLElement;
  if (target.tagName === "BUTTON" && target.dataset.tid) {
    void submit(target.dataset.tid, target.dataset.accept === "true");
  }
});

async function tick(): Promise<void> {
  try {
    const [status, pending] = await Promise.all([api.status(), api.pending()]);
    const metrics = await api.metricsAfter(nextMetric);
    records = records.concat(metrics.records);
    nextMetric = metrics.next;
    if (!geometry) geometry = await api.task();
    connected = true;
    render(buildModel(status, pending, tracker, connected));
  } catch {
    connected = false;
    render(buildModel(null, [], tracker, connected));
  }
}

function connectStream(): void {
  try {
    const src = new EventSource("/api/stream");
    src.onmessage = () => void tick();  // stream is a poke; polling stays authoritative
    src.onerror = () => {
      src.close();
      setTimeout(connectStream, 2000);
    };
  } catch {
    /* EventSource unavailable: polling covers it */
  }
}

void tick();
connectStream();
setInterval(() => void tick(), POLL_MS);
