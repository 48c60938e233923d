import { describe, expect, it } from "vitest";

import { RevisionGate, applyDrag, clamp01 } from "../src/state.js";
import type { SummaryPayload } from "../src/types.js";

const weights = {
  w_tg: [0.1, 0.2, 0.3],
  w_bg: [1.0, 1.0, 1.0],
  w_bw: [0.0, 0.5, 1.0],
};

describe("slider clamping", () => {
  it("clamps into [0, 1]", () => {
    expect(clamp01(-0.5)).toBe(0);
    expect(clamp01(1.5)).toBe(1);
    expect(clamp01(0.25)).toBe(0.25);
  });

  it("maps slider extremes to exactly 0 and 1", () => {
    const low = applyDrag(weights, "w_tg", 0, -1e-9);
    const high = applyDrag(weights, "w_tg", 0, 1 + 1e-9);
    expect(low.w_tg[0]).toBe(0.0);
    expect(high.w_tg[0]).toBe(1.0);
  });
});

describe("linked group drags", () => {
  it("checked groups receive the identical dragged value", () => {
    const next = applyDrag(weights, "w_tg", 1, 0.7, [2]);
    expect(next.w_tg).toEqual([0.1, 0.7, 0.7]);
  });

  it("leaves other weight kinds and the input untouched", () => {
    const next = applyDrag(weights, "w_bw", 0, 0.9);
    expect(next.w_bw).toEqual([0.9, 0.5, 1.0]);
    expect(next.w_tg).toEqual(weights.w_tg);
    expect(weights.w_bw).toEqual([0.0, 0.5, 1.0]);
  });
});

function summaryAt(revision: number): SummaryPayload {
  return { revision } as unknown as SummaryPayload;
}

describe("revision gate", () => {
  it("never renders a revision older than the latest acknowledged", () => {
    const gate = new RevisionGate();
    expect(gate.accept(summaryAt(3))).toBe(true);
    expect(gate.accept(summaryAt(2))).toBe(false); // stale response discarded
    expect(gate.revision).toBe(3);
    expect(gate.summary?.revision).toBe(3);
  });

  it("accepts equal revisions (refreshes of the same state)", () => {
    const gate = new RevisionGate();
    gate.accept(summaryAt(5));
    expect(gate.accept(summaryAt(5))).toBe(true);
  });
});
