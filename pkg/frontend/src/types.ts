/** Payload shapes returned by the session service (JSON over HTTP). */

export interface FlatArray {
  values: number[];
  shape: number[];
}

export interface WeightPayload {
  w_tg: number[];
  w_bg: number[];
  w_bw: number[];
  core_shape: number[];
  tied_modes: boolean;
  gamma_tg: number | number[] | null;
  gamma_bg: number | number[] | null;
}

export interface SummaryPayload {
  session_id: string;
  revision: number;
  weights: WeightPayload;
  scatter: FlatArray;
  labels: number[];
  group_names: string[];
  mode_names: string[];
  /** mode_bars[k][r] = component-r bar vector for core mode k + 2 */
  mode_bars: number[][][];
  projections: FlatArray[];
  objective_per_mode: number[];
  converged_per_mode: boolean[];
  cp_rel_error: number;
  cp_degenerate: boolean;
  selections: { A: number[]; B: number[] };
  coalesced?: boolean;
}

export interface SelectionPayload {
  session_id: string;
  revision: number;
  selections: { A: number[]; B: number[] };
}

export interface DifferencePayload {
  session_id: string;
  revision: number;
  variable: number | null;
  values: number[];
  shape: number[];
}

export type WeightKind = "w_tg" | "w_bg" | "w_bw";

/** Reshape a flat payload array into rows (row-major). */
export function toMatrix(arr: FlatArray): number[][] {
  const [rows, cols] = arr.shape;
  const out: number[][] = [];
  for (let i = 0; i < rows; i++) {
    out.push(arr.values.slice(i * cols, (i + 1) * cols));
  }
  return out;
}
