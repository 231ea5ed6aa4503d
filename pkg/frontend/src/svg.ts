/**
 * Hand-built SVG primitives shared by the figure kinds.
 *
 * Everything here is a pure function of its arguments: fixed fonts, fixed
 * palette, rounded coordinates, no timestamps, so a rerendered figure is
 * byte-identical to the previous one.
 */

export const PALETTE = ["#2563eb", "#dc2626", "#059669", "#9333ea", "#ea580c", "#0891b2"];

export const FONT = "Helvetica, Arial, sans-serif";

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export type Scale = (value: number) => number;

export interface Frame {
  width: number;
  height: number;
  margin: Margin;
  xDomain: [number, number];
  yDomain: [number, number];
  x: Scale;
  y: Scale;
}

/** Coordinate formatter: two decimals, trailing zeros trimmed by Number. */
export function r(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  // avoid "-0" so identical geometry always serializes identically
  return String(rounded === 0 ? 0 : rounded);
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function makeFrame(
  xDomain: [number, number],
  yDomain: [number, number],
  width = 640,
  height = 420,
  margin: Margin = { top: 42, right: 24, bottom: 52, left: 68 },
): Frame {
  return {
    width,
    height,
    margin,
    xDomain,
    yDomain,
    x: linearScale(xDomain[0], xDomain[1], margin.left, width - margin.right),
    y: linearScale(yDomain[0], yDomain[1], height - margin.bottom, margin.top),
  };
}

/** Round-valued ticks covering [lo, hi] with roughly n steps. */
export function niceTicks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function fmtTick(value: number): string {
  return String(Number(value.toPrecision(6)));
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Domain padded by 5% on each side (degenerate spans get a unit pad). */
export function padDomain(values: number[]): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const pad = hi > lo ? 0.05 * (hi - lo) : 1.0;
  return [lo - pad, hi + pad];
}

export function openSvg(frame: Frame): string[] {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${frame.width} ${frame.height}" font-family="${FONT}" font-size="12">`,
    `<rect width="${frame.width}" height="${frame.height}" fill="white"/>`,
  ];
}

export interface AxisLabels {
  title: string;
  xlabel: string;
  ylabel: string;
}

export function axes(frame: Frame, labels: AxisLabels): string[] {
  const { margin, width, height } = frame;
  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = height - margin.bottom;
  const y1 = margin.top;
  const out: string[] = [];
  for (const t of niceTicks(frame.yDomain[0], frame.yDomain[1])) {
    const y = r(frame.y(t));
    out.push(`<line x1="${x0}" y1="${y}" x2="${x1}" y2="${y}" stroke="#e5e7eb" stroke-width="1"/>`);
    out.push(`<text x="${x0 - 8}" y="${y}" text-anchor="end" dominant-baseline="middle" fill="#444">${fmtTick(t)}</text>`);
  }
  for (const t of niceTicks(frame.xDomain[0], frame.xDomain[1])) {
    const x = r(frame.x(t));
    out.push(`<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 5}" stroke="#444" stroke-width="1"/>`);
    out.push(`<text x="${x}" y="${y0 + 18}" text-anchor="middle" fill="#444">${fmtTick(t)}</text>`);
  }
  out.push(`<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333" stroke-width="1"/>`);
  out.push(`<text x="${(x0 + x1) / 2}" y="${height - 10}" text-anchor="middle" fill="#333" font-size="13">${escapeText(labels.xlabel)}</text>`);
  out.push(`<text x="16" y="${(y0 + y1) / 2}" text-anchor="middle" fill="#333" font-size="13" transform="rotate(-90,16,${(y0 + y1) / 2})">${escapeText(labels.ylabel)}</text>`);
  out.push(`<text x="${width / 2}" y="20" text-anchor="middle" fill="#333" font-size="14" font-weight="600">${escapeText(labels.title)}</text>`);
  return out;
}

export function polyline(
  frame: Frame,
  xs: number[],
  ys: number[],
  color: string,
  dash?: string,
): string {
  const pts = xs.map((x, i) => `${r(frame.x(x))},${r(frame.y(ys[i] ?? NaN))}`).join(" ");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline fill="none" stroke="${color}" stroke-width="2"${dashAttr} points="${pts}"/>`;
}

export function circles(frame: Frame, xs: number[], ys: number[], color: string): string[] {
  return xs.map(
    (x, i) => `<circle cx="${r(frame.x(x))}" cy="${r(frame.y(ys[i] ?? NaN))}" r="3.5" fill="${color}"/>`,
  );
}

export function errorBars(
  frame: Frame,
  xs: number[],
  ys: number[],
  errs: number[],
  color: string,
): string[] {
  const out: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    const x = r(frame.x(xs[i] ?? NaN));
    const lo = r(frame.y((ys[i] ?? NaN) - (errs[i] ?? 0)));
    const hi = r(frame.y((ys[i] ?? NaN) + (errs[i] ?? 0)));
    out.push(`<line x1="${x}" y1="${lo}" x2="${x}" y2="${hi}" stroke="${color}" stroke-width="1.5"/>`);
    out.push(`<line x1="${Number(x) - 3}" y1="${lo}" x2="${Number(x) + 3}" y2="${lo}" stroke="${color}" stroke-width="1.5"/>`);
    out.push(`<line x1="${Number(x) - 3}" y1="${hi}" x2="${Number(x) + 3}" y2="${hi}" stroke="${color}" stroke-width="1.5"/>`);
  }
  return out;
}

export interface LegendEntry {
  label: string;
  color: string;
  marker: "line" | "dash" | "point";
}

export function legend(frame: Frame, entries: LegendEntry[]): string[] {
  const lineH = 16;
  const boxW = 10 + 8 * Math.max(...entries.map((e) => e.label.length), 8) + 30;
  const x = frame.width - frame.margin.right - boxW - 6;
  const y = frame.margin.top + 6;
  const out: string[] = [
    `<rect x="${x}" y="${y}" width="${boxW}" height="${entries.length * lineH + 10}" rx="3" fill="white" stroke="#e5e7eb"/>`,
  ];
  entries.forEach((e, i) => {
    const cy = y + 12 + i * lineH;
    if (e.marker === "point") {
      out.push(`<circle cx="${x + 14}" cy="${cy}" r="3.5" fill="${e.color}"/>`);
    } else {
      const dashAttr = e.marker === "dash" ? ` stroke-dasharray="5,4"` : "";
      out.push(`<line x1="${x + 7}" y1="${cy}" x2="${x + 21}" y2="${cy}" stroke="${e.color}" stroke-width="2"${dashAttr}/>`);
    }
    out.push(`<text x="${x + 27}" y="${cy}" dominant-baseline="middle" fill="#333" font-size="11">${escapeText(e.label)}</text>`);
  });
  return out;
}
