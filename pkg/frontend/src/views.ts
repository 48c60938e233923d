import type { DifferencePayload, SummaryPayload } from "./types.js";
import { toMatrix } from "./types.js";

export interface ScatterPoint {
  index: number;
  x: number;
  y: number;
  group: number;
}

/** Core scatter coordinates joined with group labels. */
export function scatterPoints(summary: SummaryPayload): ScatterPoint[] {
  const pts = toMatrix(summary.scatter);
  return pts.map((row, i) => ({
    index: i,
    x: row[0],
    y: row.length > 1 ? row[1] : 0,
    group: summary.labels[i],
  }));
}

/** Indices of points inside an axis-aligned selection box. */
export function pointsInBox(
  points: ScatterPoint[],
  x0: number,
  y0: number,
  x1: number,
  y1: number,
): number[] {
  const [xl, xh] = x0 <= x1 ? [x0, x1] : [x1, x0];
  const [yl, yh] = y0 <= y1 ? [y0, y1] : [y1, y0];
  return points
    .filter((p) => p.x >= xl && p.x <= xh && p.y >= yl && p.y <= yh)
    .map((p) => p.index);
}

export interface BarPanel {
  modeName: string;
  component: number;
  values: number[];
}

/**
 * One bar chart per (non-comparing mode, component): 2(N-1) panels for
 * an order-N tensor at the default two-component summary.
 */
export function barPanels(summary: SummaryPayload): BarPanel[] {
  const panels: BarPanel[] = [];
  summary.mode_bars.forEach((bars, k) => {
    const modeName = summary.mode_names[k + 1] ?? `mode ${k + 2}`;
    bars.forEach((values, r) => {
      panels.push({ modeName, component: r + 1, values });
    });
  });
  return panels;
}

/** True when every entry of the difference payload is exactly zero. */
export function isAllZero(diff: DifferencePayload): boolean {
  return diff.values.every((v) => v === 0);
}

export interface DifferenceCell {
  row: number;
  col: number;
  value: number;
}

/** Difference payload as renderable cells (series when 1-D). */
export function differenceCells(diff: DifferencePayload): DifferenceCell[] {
  if (diff.shape.length <= 1) {
    return diff.values.map((value, col) => ({ row: 0, col, value }));
  }
  const cols = diff.shape[diff.shape.length - 1];
  return diff.values.map((value, i) => ({
    row: Math.floor(i / cols),
    col: i % cols,
    value,
  }));
}
