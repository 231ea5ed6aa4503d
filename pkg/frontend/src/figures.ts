/**
 * The four figure kinds rendered from dropletlab CSV artifacts.
 *
 * Every value plotted is read from the input files; nothing is recomputed
 * here, so the primary package stays the single source of truth. Reference
 * thresholds on the lambda-curve figure come from the curve CSV header.
 */

import { column, metaNumber, readTable, requireColumns, Table } from "./csv.js";
import {
  axes,
  circles,
  errorBars,
  fmtTick,
  Frame,
  legend,
  LegendEntry,
  makeFrame,
  openSvg,
  padDomain,
  PALETTE,
  polyline,
  r,
} from "./svg.js";

export type FigureKind = "phi" | "lambda-curve" | "census" | "rate";

export const FIGURE_KINDS: readonly FigureKind[] = ["phi", "lambda-curve", "census", "rate"];

export interface PlotSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  title?: string;
  xlabel?: string;
  ylabel?: string;
  xlim?: [number, number];
  ylim?: [number, number];
}

function frameFor(
  spec: PlotSpec,
  xValues: number[],
  yValues: number[],
): Frame {
  const xDomain = spec.xlim ?? padDomain(xValues);
  const yDomain = spec.ylim ?? padDomain(yValues);
  return makeFrame(xDomain, yDomain);
}

function labelsFor(spec: PlotSpec, title: string, xlabel: string, ylabel: string) {
  return {
    title: spec.title ?? title,
    xlabel: spec.xlabel ?? xlabel,
    ylabel: spec.ylabel ?? ylabel,
  };
}

function color(i: number): string {
  return PALETTE[i % PALETTE.length] ?? "#333";
}

/** Free-energy profile over the absorbed fraction, one curve per input CSV. */
function renderPhi(spec: PlotSpec, tables: Table[]): string {
  const series = tables.map((t) => {
    requireColumns(t, ["lambda", "phi"]);
    return { delta: metaNumber(t, "delta"), lambda: column(t, "lambda"), phi: column(t, "phi") };
  });
  const frame = frameFor(
    spec,
    series.flatMap((s) => s.lambda),
    series.flatMap((s) => s.phi),
  );
  const lines = openSvg(frame);
  lines.push(...axes(frame, labelsFor(spec, "Constrained free energy", "lambda (absorbed fraction)", "phi(lambda)")));
  const entries: LegendEntry[] = [];
  series.forEach((s, i) => {
    lines.push(polyline(frame, s.lambda, s.phi, color(i)));
    entries.push({ label: `delta = ${fmtTick(s.delta)}`, color: color(i), marker: "line" });
  });
  lines.push(...legend(frame, entries));
  lines.push("</svg>");
  return lines.join("\n") + "\n";
}

/**
 * Optimal absorbed fraction against the supersaturation, with the onset
 * thresholds marked and an optional measured overlay with error bars.
 */
function renderLambdaCurve(spec: PlotSpec, tables: Table[]): string {
  const curve = tables[0];
  if (curve === undefined) throw new Error("lambda-curve needs a curve CSV");
  requireColumns(curve, ["delta", "lambda_star"]);
  const deltaC = metaNumber(curve, "delta_c");
  const lambdaC = metaNumber(curve, "lambda_c");
  const delta = column(curve, "delta");
  const lambdaStar = column(curve, "lambda_star");
  const overlay = tables[1];
  let overlayX: number[] = [];
  let overlayY: number[] = [];
  let overlayErr: number[] = [];
  if (overlay !== undefined) {
    requireColumns(overlay, ["delta_realized", "mean_lambda", "mean_lambda_err"]);
    overlayX = column(overlay, "delta_realized");
    overlayY = column(overlay, "mean_lambda");
    overlayErr = column(overlay, "mean_lambda_err");
  }
  const frame = frameFor(
    spec,
    [...delta, ...overlayX],
    [0, ...lambdaStar, ...overlayY.map((y, i) => y + (overlayErr[i] ?? 0))],
  );
  const lines = openSvg(frame);
  lines.push(...axes(frame, labelsFor(spec, "Optimal absorbed fraction", "delta (supersaturation)", "lambda")));

  // the onset is a jump: split the theory curve into continuous segments
  const segments: { x: number[]; y: number[] }[] = [{ x: [], y: [] }];
  for (let i = 0; i < delta.length; i++) {
    const prev = lambdaStar[i - 1];
    const here = lambdaStar[i] ?? NaN;
    if (i > 0 && prev !== undefined && Math.abs(here - prev) > 0.3) {
      segments.push({ x: [], y: [] });
    }
    const seg = segments[segments.length - 1];
    if (seg !== undefined) {
      seg.x.push(delta[i] ?? NaN);
      seg.y.push(here);
    }
  }
  for (const seg of segments) {
    if (seg.x.length > 1) lines.push(polyline(frame, seg.x, seg.y, color(0)));
  }

  const gray = "#6b7280";
  const xC = r(frame.x(deltaC));
  const yTop = frame.margin.top;
  const yBot = frame.height - frame.margin.bottom;
  lines.push(`<line x1="${xC}" y1="${yTop}" x2="${xC}" y2="${yBot}" stroke="${gray}" stroke-width="1" stroke-dasharray="5,4"/>`);
  lines.push(`<text x="${Number(xC) + 4}" y="${yBot - 8}" fill="${gray}" font-size="11">delta_c = ${fmtTick(deltaC)}</text>`);
  const yC = r(frame.y(lambdaC));
  const xLeft = frame.margin.left;
  const xRight = frame.width - frame.margin.right;
  lines.push(`<line x1="${xLeft}" y1="${yC}" x2="${xRight}" y2="${yC}" stroke="${gray}" stroke-width="1" stroke-dasharray="5,4"/>`);
  lines.push(`<text x="${xLeft + 6}" y="${Number(yC) - 5}" fill="${gray}" font-size="11">lambda_c = ${fmtTick(lambdaC)}</text>`);

  const entries: LegendEntry[] = [{ label: "theory", color: color(0), marker: "line" }];
  if (overlay !== undefined) {
    lines.push(...errorBars(frame, overlayX, overlayY, overlayErr, color(1)));
    lines.push(...circles(frame, overlayX, overlayY, color(1)));
    entries.push({ label: "measured", color: color(1), marker: "point" });
  }
  lines.push(...legend(frame, entries));
  lines.push("</svg>");
  return lines.join("\n") + "\n";
}

function groupRows(
  xs: number[],
  keys: string[],
): Map<string, number[]> {
  const groups = new Map<string, number[]>();
  for (let i = 0; i < xs.length; i++) {
    const key = keys[i] ?? "";
    const indices = groups.get(key);
    if (indices === undefined) groups.set(key, [i]);
    else indices.push(i);
  }
  return groups;
}

function pick(values: number[], indices: number[]): number[] {
  return indices.map((i) => values[i] ?? NaN);
}

/** Frequency of intermediate-band loops against lattice side, per target. */
function renderCensus(spec: PlotSpec, tables: Table[]): string {
  const t = tables[0];
  if (t === undefined) throw new Error("census needs a runs CSV");
  requireColumns(t, ["L", "delta_target", "K", "p_no_intermediate", "p_no_intermediate_err"]);
  const L = column(t, "L");
  const deltaTarget = column(t, "delta_target");
  const k = column(t, "K");
  const freq = column(t, "p_no_intermediate").map((p) => 1 - p);
  const err = column(t, "p_no_intermediate_err");
  const keys = L.map((_, i) => `delta=${fmtTick(deltaTarget[i] ?? NaN)} K=${fmtTick(k[i] ?? NaN)}`);
  const groups = groupRows(L, keys);
  const frame = frameFor(spec, L, [0, ...freq.map((f, i) => f + (err[i] ?? 0))]);
  const lines = openSvg(frame);
  lines.push(...axes(frame, labelsFor(spec, "Intermediate-contour frequency", "L (lattice side)", "frequency")));
  const entries: LegendEntry[] = [];
  let i = 0;
  for (const [label, indices] of groups) {
    indices.sort((a, b) => (L[a] ?? 0) - (L[b] ?? 0));
    lines.push(polyline(frame, pick(L, indices), pick(freq, indices), color(i)));
    lines.push(...errorBars(frame, pick(L, indices), pick(freq, indices), pick(err, indices), color(i)));
    lines.push(...circles(frame, pick(L, indices), pick(freq, indices), color(i)));
    entries.push({ label, color: color(i), marker: "line" });
    i += 1;
  }
  lines.push(...legend(frame, entries));
  lines.push("</svg>");
  return lines.join("\n") + "\n";
}

/** Measured rare-event rate with error bars against the theory value. */
function renderRate(spec: PlotSpec, tables: Table[]): string {
  const t = tables[0];
  if (t === undefined) throw new Error("rate needs a rate CSV");
  requireColumns(t, ["L", "v", "empirical", "empirical_err", "theory"]);
  const L = column(t, "L");
  const v = column(t, "v");
  const empirical = column(t, "empirical");
  const err = column(t, "empirical_err");
  const theory = column(t, "theory");
  const keys = L.map((x) => `L = ${fmtTick(x)}`);
  const groups = groupRows(v, keys);
  const frame = frameFor(spec, v, [
    ...empirical.map((y, i) => y + (err[i] ?? 0)),
    ...empirical.map((y, i) => y - (err[i] ?? 0)),
    ...theory,
  ]);
  const lines = openSvg(frame);
  lines.push(...axes(frame, labelsFor(spec, "Rare-event rate vs theory", "v (excess volume)", "rate / sqrt(v)")));
  const entries: LegendEntry[] = [];
  let i = 0;
  for (const [label, indices] of groups) {
    indices.sort((a, b) => (v[a] ?? 0) - (v[b] ?? 0));
    lines.push(polyline(frame, pick(v, indices), pick(theory, indices), color(i), "5,4"));
    lines.push(...errorBars(frame, pick(v, indices), pick(empirical, indices), pick(err, indices), color(i)));
    lines.push(...circles(frame, pick(v, indices), pick(empirical, indices), color(i)));
    entries.push({ label: `measured ${label}`, color: color(i), marker: "point" });
    entries.push({ label: `theory ${label}`, color: color(i), marker: "dash" });
    i += 1;
  }
  lines.push(...legend(frame, entries));
  lines.push("</svg>");
  return lines.join("\n") + "\n";
}

/** Render a figure to its SVG text; callers decide where the bytes go. */
export function render(spec: PlotSpec): string {
  const tables = spec.inputs.map(readTable);
  switch (spec.kind) {
    case "phi":
      return renderPhi(spec, tables);
    case "lambda-curve":
      return renderLambdaCurve(spec, tables);
    case "census":
      return renderCensus(spec, tables);
    case "rate":
      return renderRate(spec, tables);
  }
}
