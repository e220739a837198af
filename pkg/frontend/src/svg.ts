import { ScaleContinuousNumeric } from "d3-scale";

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 36, right: 24, bottom: 46, left: 64 };

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export class SvgDoc {
  private parts: string[] = [];

  constructor(public readonly width: number, public readonly height: number) {}

  push(fragment: string): void {
    this.parts.push(fragment);
  }

  openGroup(attrs = ""): void {
    this.parts.push(`<g ${attrs}>`);
  }

  closeGroup(): void {
    this.parts.push("</g>");
  }

  circle(cx: number, cy: number, r: number, fill: string, extra = ""): void {
    this.parts.push(
      `<circle cx="${cx.toFixed(2)}" cy="${cy.toFixed(2)}" r="${r}" fill="${fill}" ${extra}/>`
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, extra = ""): void {
    this.parts.push(
      `<line x1="${x1.toFixed(2)}" y1="${y1.toFixed(2)}" x2="${x2.toFixed(2)}" ` +
        `y2="${y2.toFixed(2)}" stroke="${stroke}" ${extra}/>`
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, extra = ""): void {
    const pts = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    this.parts.push(`<polyline points="${pts}" fill="none" stroke="${stroke}" ${extra}/>`);
  }

  text(x: number, y: number, content: string, extra = ""): void {
    this.parts.push(
      `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" font-family="sans-serif" ${extra}>` +
        `${esc(content)}</text>`
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function formatTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    return v.toExponential(0);
  }
  return `${Number(v.toPrecision(4))}`;
}

/** Bottom axis with ticks from the scale; works for linear and log scales. */
export function drawXAxis(
  doc: SvgDoc,
  scale: ScaleContinuousNumeric<number, number>,
  y: number,
  label: string,
  tickCount = 6
): void {
  const [x0, x1] = scale.range();
  doc.line(x0, y, x1, y, "black");
  for (const t of scale.ticks(tickCount)) {
    const x = scale(t);
    doc.line(x, y, x, y + 5, "black");
    doc.text(x, y + 18, formatTick(t), 'text-anchor="middle" font-size="11"');
  }
  doc.text((x0 + x1) / 2, y + 36, label, 'text-anchor="middle" font-size="13"');
}

export function drawYAxis(
  doc: SvgDoc,
  scale: ScaleContinuousNumeric<number, number>,
  x: number,
  label: string,
  tickCount = 6
): void {
  const [y0, y1] = scale.range();
  doc.line(x, y0, x, y1, "black");
  for (const t of scale.ticks(tickCount)) {
    const y = scale(t);
    doc.line(x - 5, y, x, y, "black");
    doc.text(x - 8, y + 4, formatTick(t), 'text-anchor="end" font-size="11"');
  }
  const cy = (y0 + y1) / 2;
  doc.text(16, cy, label, `text-anchor="middle" font-size="13" transform="rotate(-90 16 ${cy.toFixed(2)})"`);
}

export function drawLegend(
  doc: SvgDoc,
  entries: Array<{ label: string; color: string }>,
  x: number,
  y: number
): void {
  entries.forEach((e, i) => {
    const yy = y + i * 16;
    doc.line(x, yy - 4, x + 18, yy - 4, e.color, 'stroke-width="2"');
    doc.text(x + 24, yy, e.label, 'font-size="11"');
  });
}
