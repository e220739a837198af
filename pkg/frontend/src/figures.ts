import { scaleLinear, scaleLog } from "d3-scale";

import { numberColumn, parseCsv, stringColumn } from "./csv.js";
import { divergingColorScale, sequentialColorScale, seriesColor, sharedAbsLimit } from "./colors.js";
import { DEFAULT_MARGIN, SvgDoc, drawLegend, drawXAxis, drawYAxis } from "./svg.js";
import { EmptyInput } from "./errors.js";

export type FigureKind =
  | "solution_scatter"
  | "sweep_curves"
  | "convergence_loglog"
  | "split_comparison"
  | "sign_field"
  | "dN_curve";

export interface NamedCsv {
  name: string;
  text: string;
}

const W = 720;
const H = 480;

function positiveExtent(valueSets: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const vs of valueSets) {
    for (const v of vs) {
      if (v > 0) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
    }
  }
  if (!isFinite(lo)) {
    // all values vanish: give the log axis a harmless decade
    return [1e-16, 1e-15];
  }
  return [lo, hi === lo ? lo * 10 : hi];
}

/** Plot one series: line when it has >= 2 points, markers always. */
function series(
  doc: SvgDoc,
  pts: Array<[number, number]>,
  color: string
): void {
  if (pts.length >= 2) {
    doc.polyline(pts, color, 'stroke-width="1.6"');
  }
  for (const [x, y] of pts) {
    doc.circle(x, y, 2.4, color);
  }
}

/** Error curves against stencil size, log error axis. */
export function sweepCurves(input: NamedCsv): string {
  const table = parseCsv(input.text, input.name);
  const n = numberColumn(table, "n", input.name);
  const columns = ["e_poiss_max", "e_poiss_avg", "e_lap_max", "e_lap_avg"];
  const values = columns.map((c) => numberColumn(table, c, input.name));

  const doc = new SvgDoc(W, H);
  const m = DEFAULT_MARGIN;
  const x = scaleLinear().domain([Math.min(...n), Math.max(...n)]).range([m.left, W - m.right]);
  const [lo, hi] = positiveExtent(values);
  const y = scaleLog().domain([lo, hi]).range([H - m.bottom, m.top]);

  columns.forEach((c, i) => {
    const pts = n.map((nv, j) => [x(nv), y(Math.max(values[i][j], lo))] as [number, number]);
    series(doc, pts, seriesColor(i));
  });
  drawXAxis(doc, x, H - m.bottom, "stencil size n");
  drawYAxis(doc, y, m.left, "error");
  drawLegend(doc, columns.map((c, i) => ({ label: c, color: seriesColor(i) })), W - 180, m.top + 8);
  doc.text(W / 2, 20, "Approximation errors vs stencil size", 'text-anchor="middle" font-size="14"');
  return doc.render();
}

/** One log-log refinement line per stencil size. */
export function convergenceLoglog(input: NamedCsv): string {
  const table = parseCsv(input.text, input.name);
  const h = numberColumn(table, "h", input.name);
  const n = numberColumn(table, "n", input.name);
  const err = numberColumn(table, "e_poiss_max", input.name);

  const groups = new Map<number, Array<[number, number]>>();
  n.forEach((nv, i) => {
    if (!groups.has(nv)) groups.set(nv, []);
    groups.get(nv)!.push([h[i], err[i]]);
  });

  const doc = new SvgDoc(W, H);
  const m = DEFAULT_MARGIN;
  const [hlo, hhi] = positiveExtent([h]);
  const x = scaleLog().domain([hlo, hhi]).range([m.left, W - m.right]);
  const [elo, ehi] = positiveExtent([err]);
  const y = scaleLog().domain([elo, ehi]).range([H - m.bottom, m.top]);

  const legend: Array<{ label: string; color: string }> = [];
  let i = 0;
  for (const [nv, pts] of [...groups.entries()].sort((a, b) => a[0] - b[0])) {
    const color = seriesColor(i);
    const sorted = pts.sort((a, b) => a[0] - b[0]);
    series(doc, sorted.map(([hv, ev]) => [x(hv), y(Math.max(ev, elo))] as [number, number]), color);
    legend.push({ label: `n = ${nv}`, color });
    i += 1;
  }
  drawXAxis(doc, x, H - m.bottom, "spacing h");
  drawYAxis(doc, y, m.left, "max error");
  drawLegend(doc, legend, W - 140, m.top + 8);
  doc.text(W / 2, 20, "Refinement at fixed stencil sizes", 'text-anchor="middle" font-size="14"');
  return doc.render();
}

/** Baseline sweep next to the region-pinned sweeps. */
export function splitComparison(input: NamedCsv): string {
  const table = parseCsv(input.text, input.name);
  const n = numberColumn(table, "n", input.name);
  const mode = stringColumn(table, "mode", input.name);
  const err = numberColumn(table, "e_poiss_max", input.name);

  const groups = new Map<string, Array<[number, number]>>();
  mode.forEach((mv, i) => {
    if (!groups.has(mv)) groups.set(mv, []);
    groups.get(mv)!.push([n[i], err[i]]);
  });

  const doc = new SvgDoc(W, H);
  const m = DEFAULT_MARGIN;
  const x = scaleLinear().domain([Math.min(...n), Math.max(...n)]).range([m.left, W - m.right]);
  const [elo, ehi] = positiveExtent([err]);
  const y = scaleLog().domain([elo, ehi]).range([H - m.bottom, m.top]);

  const legend: Array<{ label: string; color: string }> = [];
  let i = 0;
  for (const [mv, pts] of groups) {
    const color = seriesColor(i);
    series(doc, pts.sort((a, b) => a[0] - b[0]).map(([nv, ev]) => [x(nv), y(Math.max(ev, elo))] as [number, number]), color);
    legend.push({ label: mv, color });
    i += 1;
  }
  drawXAxis(doc, x, H - m.bottom, "swept stencil size n");
  drawYAxis(doc, y, m.left, "max error");
  drawLegend(doc, legend, W - 170, m.top + 8);
  doc.text(W / 2, 20, "Region-pinned stencil sweep", 'text-anchor="middle" font-size="14"');
  return doc.render();
}

/** Sign-balance indicator curves with the zero reference line. */
export function dnCurve(input: NamedCsv): string {
  const table = parseCsv(input.text, input.name);
  const n = numberColumn(table, "n", input.name);
  const dnp = numberColumn(table, "dN_poiss", input.name);
  const dnl = numberColumn(table, "dN_lap", input.name);

  const doc = new SvgDoc(W, H);
  const m = DEFAULT_MARGIN;
  const x = scaleLinear().domain([Math.min(...n), Math.max(...n)]).range([m.left, W - m.right]);
  const y = scaleLinear().domain([-1.05, 1.05]).range([H - m.bottom, m.top]);

  // reference line dN = 0, orange per convention
  doc.line(m.left, y(0), W - m.right, y(0), "orange", 'stroke-width="2" class="zero-line"');

  series(doc, n.map((nv, i) => [x(nv), y(dnp[i])] as [number, number]), seriesColor(0));
  series(doc, n.map((nv, i) => [x(nv), y(dnl[i])] as [number, number]), seriesColor(1));
  drawXAxis(doc, x, H - m.bottom, "stencil size n");
  drawYAxis(doc, y, m.left, "sign balance dN");
  drawLegend(
    doc,
    [
      { label: "dN_poiss", color: seriesColor(0) },
      { label: "dN_lap", color: seriesColor(1) },
    ],
    W - 140,
    m.top + 8
  );
  doc.text(W / 2, 20, "Sign balance vs stencil size", 'text-anchor="middle" font-size="14"');
  return doc.render();
}

/** Multi-panel signed-error scatter; all panels share one symmetric color scale. */
export function signField(inputs: NamedCsv[]): string {
  if (inputs.length === 0) {
    throw new EmptyInput();
  }
  const panels = inputs.map((inp) => {
    const table = parseCsv(inp.text, inp.name);
    return {
      name: inp.name,
      x: numberColumn(table, "x", inp.name),
      y: numberColumn(table, "y", inp.name),
      e: numberColumn(table, "e_poiss", inp.name),
    };
  });

  const limit = sharedAbsLimit(panels.map((p) => p.e));
  const color = divergingColorScale(limit);

  const panelSize = 300;
  const pad = 16;
  const width = panels.length * (panelSize + pad) + pad;
  const height = panelSize + 2 * pad + 28;
  const doc = new SvgDoc(width, height);

  panels.forEach((p, i) => {
    const x0 = pad + i * (panelSize + pad);
    const xlo = Math.min(...p.x);
    const xhi = Math.max(...p.x);
    const ylo = Math.min(...p.y);
    const yhi = Math.max(...p.y);
    const span = Math.max(xhi - xlo, yhi - ylo) || 1;
    const sx = scaleLinear().domain([xlo, xlo + span]).range([x0, x0 + panelSize]);
    const sy = scaleLinear().domain([ylo, ylo + span]).range([pad + panelSize, pad]);
    doc.openGroup(`data-panel="${p.name}" data-color-limit="${limit}"`);
    for (let j = 0; j < p.x.length; j++) {
      doc.circle(sx(p.x[j]), sy(p.y[j]), 2.0, color(p.e[j]));
    }
    doc.closeGroup();
    doc.text(x0 + panelSize / 2, pad + panelSize + 20, p.name, 'text-anchor="middle" font-size="12"');
  });
  return doc.render();
}

/** Node scatter colored by the analytic solution sin(pi x) sin(pi y). */
export function solutionScatter(input: NamedCsv): string {
  const table = parseCsv(input.text, input.name);
  const x = numberColumn(table, "x", input.name);
  const y = numberColumn(table, "y", input.name);
  const boundary = numberColumn(table, "boundary", input.name);

  const u = x.map((xv, i) => Math.sin(Math.PI * xv) * Math.sin(Math.PI * y[i]));
  const color = sequentialColorScale(Math.min(...u), Math.max(...u));

  const size = 520;
  const pad = 24;
  const doc = new SvgDoc(size, size + 24);
  const xlo = Math.min(...x);
  const span = Math.max(Math.max(...x) - xlo, Math.max(...y) - Math.min(...y)) || 1;
  const ylo = Math.min(...y);
  const sx = scaleLinear().domain([xlo, xlo + span]).range([pad, size - pad]);
  const sy = scaleLinear().domain([ylo, ylo + span]).range([size - pad, pad]);

  x.forEach((xv, i) => {
    const extra = boundary[i] === 1 ? 'stroke="black" stroke-width="0.6"' : "";
    doc.circle(sx(xv), sy(y[i]), 2.4, color(u[i]), extra);
  });
  doc.text(size / 2, size + 14, "analytic solution on the node set", 'text-anchor="middle" font-size="12"');
  return doc.render();
}

export function renderFigure(kind: FigureKind, inputs: NamedCsv[]): string {
  if (inputs.length === 0) {
    throw new EmptyInput();
  }
  switch (kind) {
    case "sweep_curves":
      return sweepCurves(inputs[0]);
    case "convergence_loglog":
      return convergenceLoglog(inputs[0]);
    case "split_comparison":
      return splitComparison(inputs[0]);
    case "dN_curve":
      return dnCurve(inputs[0]);
    case "sign_field":
      return signField(inputs);
    case "solution_scatter":
      return solutionScatter(inputs[0]);
  }
}
