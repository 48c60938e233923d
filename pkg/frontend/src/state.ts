import type { SummaryPayload, WeightKind } from "./types.js";

/** Clamp a slider position to the valid weight range. */
export function clamp01(x: number): number {
  return x <= 0 ? 0 : x >= 1 ? 1 : x;
}

/**
 * Apply a slider drag: the dragged group and every linked (checked)
 * group receive the same clamped value for the dragged weight kind.
 * Returns a new weight vector; the input is not mutated.
 */
export function applyDrag(
  weights: Record<WeightKind, number[]>,
  kind: WeightKind,
  group: number,
  value: number,
  linkedGroups: number[] = [],
): Record<WeightKind, number[]> {
  const v = clamp01(value);
  const next = {
    w_tg: weights.w_tg.slice(),
    w_bg: weights.w_bg.slice(),
    w_bw: weights.w_bw.slice(),
  };
  for (const g of new Set([group, ...linkedGroups])) {
    next[kind][g] = v;
  }
  return next;
}

/**
 * Keeps the rendered summary at the server's latest acknowledged
 * revision: out-of-order responses (an older solve finishing after a
 * newer one) are discarded.
 */
export class RevisionGate {
  private latest = 0;
  private current: SummaryPayload | null = null;

  /** Returns true when the payload became the rendered state. */
  accept(summary: SummaryPayload): boolean {
    if (summary.revision < this.latest) return false;
    this.latest = summary.revision;
    this.current = summary;
    return true;
  }

  get revision(): number {
    return this.latest;
  }

  get summary(): SummaryPayload | null {
    return this.current;
  }
}
