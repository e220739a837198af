import { scaleSequential } from "d3-scale";
import { interpolateRdBu, interpolateViridis, schemeTableau10 } from "d3-scale-chromatic";

/**
 * Symmetric diverging scale for signed error fields, centered at exactly 0.
 * The limit is shared across all panels of a figure so colors compare.
 */
export function divergingColorScale(limit: number) {
  const m = limit > 0 ? limit : 1;
  return scaleSequential(interpolateRdBu).domain([m, -m]); // red positive, blue negative
}

/** Shared symmetric limit: max |v| over every panel's values. */
export function sharedAbsLimit(valueSets: number[][]): number {
  let m = 0;
  for (const values of valueSets) {
    for (const v of values) {
      const a = Math.abs(v);
      if (a > m) m = a;
    }
  }
  return m;
}

export function sequentialColorScale(min: number, max: number) {
  return scaleSequential(interpolateViridis).domain([min, max]);
}

export function seriesColor(i: number): string {
  return schemeTableau10[i % schemeTableau10.length];
}
