export { column, metaNumber, MissingColumnError, readTable, requireColumns } from "./csv.js";
export type { Table } from "./csv.js";
export { FIGURE_KINDS, render } from "./figures.js";
export type { FigureKind, PlotSpec } from "./figures.js";
export { runCli, specFromArgv } from "./main.js";
