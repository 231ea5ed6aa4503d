/**
 * Minimal reader for dropletlab CSV artifacts.
 *
 * The files are plain comma-separated numeric tables, optionally preceded
 * by `# key = value` metadata lines (theory curves carry their thresholds
 * there). Columns are resolved strictly: a referenced column that is not
 * present is a hard error naming the column and the file.
 */

import { readFileSync } from "node:fs";

export interface Table {
  path: string;
  meta: Record<string, string>;
  columns: string[];
  rows: number[][];
}

export class MissingColumnError extends Error {
  readonly column: string;
  readonly path: string;

  constructor(column: string, path: string) {
    super(`missing column '${column}' in ${path}`);
    this.name = "MissingColumnError";
    this.column = column;
    this.path = path;
  }
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const meta: Record<string, string> = {};
  const body: string[] = [];
  for (const line of text.split("\n")) {
    if (line.startsWith("#")) {
      const stripped = line.replace(/^#\s*/, "");
      const eq = stripped.indexOf(" = ");
      if (eq >= 0) meta[stripped.slice(0, eq)] = stripped.slice(eq + 3);
    } else if (line.trim() !== "") {
      body.push(line);
    }
  }
  const header = body[0];
  if (header === undefined) throw new Error(`empty table: ${path}`);
  const columns = header.split(",");
  const rows = body.slice(1).map((line) => line.split(",").map(Number));
  return { path, meta, columns, rows };
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) throw new MissingColumnError(name, table.path);
  }
}

export function column(table: Table, name: string): number[] {
  const i = table.columns.indexOf(name);
  if (i < 0) throw new MissingColumnError(name, table.path);
  return table.rows.map((row) => row[i] ?? NaN);
}

export function metaNumber(table: Table, key: string): number {
  const raw = table.meta[key];
  if (raw === undefined) {
    throw new Error(`missing '# ${key} = ...' header in ${table.path}`);
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new Error(`non-numeric '# ${key}' header in ${table.path}`);
  }
  return value;
}
