import { describe, expect, it } from "vitest";

import type { DifferencePayload, SummaryPayload } from "../src/types.js";
import { toMatrix } from "../src/types.js";
import {
  barPanels,
  differenceCells,
  isAllZero,
  pointsInBox,
  scatterPoints,
} from "../src/views.js";

function fakeSummary(): SummaryPayload {
  return {
    session_id: "s1",
    revision: 1,
    weights: {
      w_tg: [0, 0],
      w_bg: [1, 1],
      w_bw: [1, 1],
      core_shape: [2, 3],
      tied_modes: true,
      gamma_tg: null,
      gamma_bg: null,
    },
    scatter: { values: [0, 0, 1, 1, 2, 0, 3, 1], shape: [4, 2] },
    labels: [0, 0, 1, 1],
    group_names: ["Group 1", "Group 2"],
    mode_names: ["instance", "variable", "time"],
    mode_bars: [
      [
        [0.5, 0.5],
        [0.1, -0.9],
      ],
      [
        [1, 0, 0],
        [0, 1, 0],
      ],
    ],
    projections: [
      { values: [1, 0, 0, 1], shape: [2, 2] },
      { values: [1, 0, 0, 0, 1, 0], shape: [3, 2] },
    ],
    objective_per_mode: [1, 1],
    converged_per_mode: [true, true],
    cp_rel_error: 0.1,
    cp_degenerate: false,
    selections: { A: [], B: [] },
  };
}

describe("flat array payloads", () => {
  it("reshape row-major", () => {
    expect(toMatrix({ values: [1, 2, 3, 4, 5, 6], shape: [2, 3] })).toEqual([
      [1, 2, 3],
      [4, 5, 6],
    ]);
  });
});

describe("scatter view", () => {
  it("joins coordinates with group labels", () => {
    const pts = scatterPoints(fakeSummary());
    expect(pts).toHaveLength(4);
    expect(pts[2]).toEqual({ index: 2, x: 2, y: 0, group: 1 });
  });

  it("box selection returns indices regardless of drag direction", () => {
    const pts = scatterPoints(fakeSummary());
    expect(pointsInBox(pts, -0.5, -0.5, 1.5, 1.5)).toEqual([0, 1]);
    expect(pointsInBox(pts, 1.5, 1.5, -0.5, -0.5)).toEqual([0, 1]);
    expect(pointsInBox(pts, 10, 10, 11, 11)).toEqual([]);
  });
});

describe("component bar charts", () => {
  it("renders exactly 2(N-1) panels for an order-3 session", () => {
    const panels = barPanels(fakeSummary());
    expect(panels).toHaveLength(4);
    expect(panels.map((p) => p.modeName)).toEqual([
      "variable",
      "variable",
      "time",
      "time",
    ]);
    expect(panels[3]).toEqual({
      modeName: "time",
      component: 2,
      values: [0, 1, 0],
    });
  });
});

describe("difference view", () => {
  const zero: DifferencePayload = {
    session_id: "s1",
    revision: 1,
    variable: null,
    values: [0, 0, 0, 0],
    shape: [2, 2],
  };

  it("detects the identical-selection all-zero payload", () => {
    expect(isAllZero(zero)).toBe(true);
    expect(isAllZero({ ...zero, values: [0, 0, 1e-12, 0] })).toBe(false);
  });

  it("lays out 2-D payloads as row/column cells", () => {
    const cells = differenceCells({
      ...zero,
      values: [1, 2, 3, 4],
      shape: [2, 2],
    });
    expect(cells).toEqual([
      { row: 0, col: 0, value: 1 },
      { row: 0, col: 1, value: 2 },
      { row: 1, col: 0, value: 3 },
      { row: 1, col: 1, value: 4 },
    ]);
  });

  it("lays out 1-D payloads as a single series", () => {
    const cells = differenceCells({
      ...zero,
      variable: 1,
      values: [5, 6],
      shape: [2],
    });
    expect(cells.map((c) => c.row)).toEqual([0, 0]);
    expect(cells.map((c) => c.value)).toEqual([5, 6]);
  });
});
