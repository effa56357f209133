/**
 * Pure SVG renderers. Everything returns a string so the views are
 * snapshot-testable; the corridor is drawn to scale in world meters via
 * the viewBox.
 */

import type { MetricSeries, MetricsView } from "./state.js";
import type { PendingJudgment, TaskGeometry } from "./types.js";

export const CANDIDATE_COLOR = "#c0392b";
export const PARTNER_COLOR = "#e67e22";
export const DEMO_COLOR = "#2471a3";
const WALL_COLOR = "#2c3e50";
const OBSTACLE_FILL = "#95a5a6";

const f = (v: number): string => v.toFixed(2);

function pts(points: number[][]): string {
  return points.map(([x, y]) => `${f(x)},${f(-y)}`).join(" ");
}

export interface PathLayer {
  points: number[][];
  color: string;
  label: string;
  dash?: string;
  width?: number;
}

/** Corridor with walls and obstacles to scale plus overlaid paths. */
export function corridorSvg(geo: TaskGeometry, layers: PathLayer[] = []): string {
  const all = geo.left_wall.concat(geo.right_wall);
  const xs = all.map((p) => p[0]);
  const ys = all.map((p) => p[1]);
  const margin = 8;
  const x0 = Math.min(...xs) - margin;
  const x1 = Math.max(...xs) + margin;
  const y0 = Math.min(...ys) - margin;
  const y1 = Math.max(...ys) + margin;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="${f(x0)} ${f(-y1)} ${f(x1 - x0)} ${f(y1 - y0)}" class="corridor">`,
    `<polyline points="${pts(geo.centerline)}" fill="none" stroke="#d5d8dc" stroke-width="0.4" stroke-dasharray="3 3"/>`,
    `<polyline points="${pts(geo.left_wall)}" fill="none" stroke="${WALL_COLOR}" stroke-width="1"/>`,
    `<polyline points="${pts(geo.right_wall)}" fill="none" stroke="${WALL_COLOR}" stroke-width="1"/>`,
  ];
  for (const poly of geo.obstacles) {
    parts.push(
      `<polygon points="${pts(poly)}" fill="${OBSTACLE_FILL}" stroke="${WALL_COLOR}" stroke-width="0.4"/>`,
    );
  }
  for (const layer of layers) {
    if (layer.points.length === 0) continue;
    const dash = layer.dash ? ` stroke-dasharray="${layer.dash}"` : "";
    parts.push(
      `<polyline points="${pts(layer.points)}" fill="none" stroke="${layer.color}" stroke-width="${f(layer.width ?? 0.8)}"${dash} data-label="${layer.label}"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** Candidate trajectory vs the current demo's representative path. */
export function judgmentLayers(p: PendingJudgment): PathLayer[] {
  const layers: PathLayer[] = [];
  const demoPath = p.demo_summary.representative_path;
  if (demoPath && demoPath.length) {
    layers.push({ points: demoPath, color: DEMO_COLOR, label: "demo", dash: "2 2" });
  }
  layers.push({
    points: p.partner_path,
    color: PARTNER_COLOR,
    label: "partner",
    width: 0.5,
  });
  layers.push({ points: p.candidate_path, color: CANDIDATE_COLOR, label: "candidate" });
  return layers;
}

/** Small advisory sparkline of the per-step evaluation rewards. */
export function sparklineSvg(values: number[][], width = 160, height = 28): string {
  const flat = values.map((v) => v[0]);
  if (flat.length === 0) return `<svg class="sparkline" width="${width}" height="${height}"></svg>`;
  const lo = Math.min(...flat, 0);
  const hi = Math.max(...flat, 1);
  const span = hi - lo || 1;
  const step = width / Math.max(flat.length - 1, 1);
  const points = flat
    .map((v, i) => `${f(i * step)},${f(height - ((v - lo) / span) * height)}`)
    .join(" ");
  return (
    `<svg class="sparkline" width="${width}" height="${height}">` +
    `<polyline points="${points}" fill="none" stroke="#7f8c8d" stroke-width="1"/>` +
    `</svg>`
  );
}

/** Reward-per-episode chart with demo-replacement markers. */
export function metricsChartSvg(
  view: MetricsView,
  demoMeans: Partial<Record<"leader" | "follower", number | null>>,
  width = 560,
  height = 180,
): string {
  const seriesList: Array<[string, MetricSeries, string]> = [
    ["leader", view.perAgent.leader, CANDIDATE_COLOR],
    ["follower", view.perAgent.follower, DEMO_COLOR],
  ];
  const allEpisodes = seriesList.flatMap(([, s]) => s.episodes);
  const allValues = seriesList.flatMap(([, s]) => s.values);
  if (allEpisodes.length === 0) {
    return `<svg class="chart" width="${width}" height="${height}"></svg>`;
  }
  const x1 = Math.max(...allEpisodes, 1);
  const lo = Math.min(...allValues, 0);
  const hi = Math.max(...allValues, 1);
  const sx = (e: number) => (e / x1) * (width - 40) + 35;
  const sy = (v: number) => height - 18 - ((v - lo) / (hi - lo || 1)) * (height - 30);
  const parts = [
    `<svg class="chart" width="${width}" height="${height}">`,
    `<line x1="35" y1="${f(height - 18)}" x2="${width - 5}" y2="${f(height - 18)}" stroke="#ccc"/>`,
    `<line x1="35" y1="6" x2="35" y2="${f(height - 18)}" stroke="#ccc"/>`,
    `<text x="4" y="${f(sy(hi))}" font-size="9">${hi.toFixed(2)}</text>`,
    `<text x="4" y="${f(sy(lo))}" font-size="9">${lo.toFixed(2)}</text>`,
    `<text x="${width - 30}" y="${f(height - 5)}" font-size="9">ep ${x1}</text>`,
  ];
  for (const [label, s, color] of seriesList) {
    if (!s.episodes.length) continue;
    const points = s.episodes.map((e, i) => `${f(sx(e))},${f(sy(s.values[i]))}`).join(" ");
    parts.push(
      `<polyline points="${points}" fill="none" stroke="${color}" stroke-width="1" data-series="${label}"/>`,
    );
    const demoMean = demoMeans[label as "leader" | "follower"];
    if (demoMean != null) {
      parts.push(
        `<line x1="35" y1="${f(sy(demoMean))}" x2="${width - 5}" y2="${f(sy(demoMean))}" ` +
          `stroke="${color}" stroke-width="0.6" stroke-dasharray="4 3" data-demo-mean="${label}"/>`,
      );
    }
    for (const ep of view.replacementEpisodes[label as "leader" | "follower"]) {
      parts.push(
        `<line x1="${f(sx(ep))}" y1="6" x2="${f(sx(ep))}" y2="${f(height - 18)}" ` +
          `stroke="#27ae60" stroke-width="0.8" data-replacement="${label}"/>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("\n");
}
