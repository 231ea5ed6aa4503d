/**
 * report-plots: publication-style SVG figures from dropletlab CSV files.
 *
 * Usage:
 *   report-plots --kind phi          --input phi_delta_0.8.csv [--input phi_delta_0.96.csv ...] --out phi.svg
 *   report-plots --kind lambda-curve --input theory_curve.csv [--input runs.csv] --out lambda.svg
 *   report-plots --kind census       --input runs.csv --out census.svg
 *   report-plots --kind rate         --input rate.csv --out rate.svg
 *
 * Optional overrides: --title, --xlabel, --ylabel, --xlim lo,hi, --ylim lo,hi.
 *
 * Exit codes: 0 figure written, 1 usage error, 2 unreadable input or a
 * missing column (the diagnostic names it).
 */

import { writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { FIGURE_KINDS, FigureKind, PlotSpec, render } from "./figures.js";

const USAGE =
  "usage: report-plots --kind {phi|lambda-curve|census|rate} --input CSV [--input CSV ...] --out SVG " +
  "[--title T] [--xlabel X] [--ylabel Y] [--xlim lo,hi] [--ylim lo,hi]";

class UsageError extends Error {}

function parseRange(raw: string, flag: string): [number, number] {
  const parts = raw.split(",").map(Number);
  const [lo, hi] = parts;
  if (parts.length !== 2 || lo === undefined || hi === undefined
      || !Number.isFinite(lo) || !Number.isFinite(hi) || !(hi > lo)) {
    throw new UsageError(`${flag} wants 'lo,hi' with hi > lo, got '${raw}'`);
  }
  return [lo, hi];
}

export function specFromArgv(argv: string[]): PlotSpec {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        input: { type: "string", multiple: true },
        out: { type: "string" },
        title: { type: "string" },
        xlabel: { type: "string" },
        ylabel: { type: "string" },
        xlim: { type: "string" },
        ylim: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: false,
    });
  } catch (err) {
    throw new UsageError(err instanceof Error ? err.message : String(err));
  }
  const v = parsed.values;
  if (v.help) throw new UsageError(USAGE);
  if (v.kind === undefined) throw new UsageError("--kind is required");
  if (!(FIGURE_KINDS as readonly string[]).includes(v.kind)) {
    throw new UsageError(`unknown kind '${v.kind}', expected one of ${FIGURE_KINDS.join(", ")}`);
  }
  const kind = v.kind as FigureKind;
  const inputs = v.input ?? [];
  if (inputs.length === 0) throw new UsageError("at least one --input is required");
  if ((kind === "census" || kind === "rate") && inputs.length !== 1) {
    throw new UsageError(`${kind} takes exactly one --input`);
  }
  if (kind === "lambda-curve" && inputs.length > 2) {
    throw new UsageError("lambda-curve takes the curve CSV and at most one overlay CSV");
  }
  if (v.out === undefined) throw new UsageError("--out is required");
  const spec: PlotSpec = { kind, inputs, output: v.out };
  if (v.title !== undefined) spec.title = v.title;
  if (v.xlabel !== undefined) spec.xlabel = v.xlabel;
  if (v.ylabel !== undefined) spec.ylabel = v.ylabel;
  if (v.xlim !== undefined) spec.xlim = parseRange(v.xlim, "--xlim");
  if (v.ylim !== undefined) spec.ylim = parseRange(v.ylim, "--ylim");
  return spec;
}

export function runCli(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = specFromArgv(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`report-plots: ${err.message}`);
      return 1;
    }
    throw err;
  }
  try {
    writeFileSync(spec.output, render(spec));
  } catch (err) {
    console.error(`report-plots: ${err instanceof Error ? err.message : String(err)}`);
    return 2;
  }
  console.log(`wrote ${spec.output}`);
  return 0;
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(runCli(process.argv.slice(2)));
}
