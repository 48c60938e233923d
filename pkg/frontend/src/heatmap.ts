/** Loading-heatmap band filtering.
 *
 * The range slider selects a band [lo, hi]; a row (original dimension)
 * is hidden when every one of its loadings falls inside the band, so a
 * symmetric band [-eps, eps] hides exactly the rows whose max |loading|
 * is <= eps and leaves only the dimensions that matter.
 */

export interface BandFilterResult {
  visible: number[];
  hidden: number[];
  label: string;
}

export function filterRows(
  matrix: number[][],
  lo: number,
  hi: number,
): BandFilterResult {
  const visible: number[] = [];
  const hidden: number[] = [];
  matrix.forEach((row, i) => {
    const allInside = row.every((x) => x >= lo && x <= hi);
    (allInside ? hidden : visible).push(i);
  });
  return {
    visible,
    hidden,
    label: `${visible.length} of ${matrix.length} rows shown`,
  };
}

/** Divergent color for one loading given the matrix's max magnitude. */
export function divergentColor(value: number, maxAbs: number): string {
  const t = maxAbs > 0 ? Math.max(-1, Math.min(1, value / maxAbs)) : 0;
  // blue (negative) .. white .. red (positive)
  const other = Math.round(255 * (1 - Math.abs(t)));
  return t >= 0
    ? `rgb(255, ${other}, ${other})`
    : `rgb(${other}, ${other}, 255)`;
}
