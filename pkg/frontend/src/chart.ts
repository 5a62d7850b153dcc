import type { Series } from "./series.js";

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
}

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

const MARGIN = { top: 42, right: 170, bottom: 48, left: 64 };

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  const r = Math.round(v * 1000) / 1000;
  return Object.is(r, -0) ? "0" : String(r);
}

/** Round tick positions covering [lo, hi] at a 1/2/5 step. */
export function ticks(lo: number, hi: number, target = 5): number[] {
  if (lo === hi) {
    return [lo];
  }
  const raw = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw)!;
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    out.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return out;
}

/**
 * A static SVG line chart: one polyline per series, circle markers on every
 * data point so single-point series stay visible, and a legend entry per
 * series (class "legend-entry", one per series, in series order).
 */
export function renderLineChart(series: Series[], opts: ChartOptions): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const allX = series.flatMap((s) => s.points.map((p) => p.x));
  const allY = series.flatMap((s) => s.points.map((p) => p.y));
  let [xLo, xHi] = [Math.min(...allX), Math.max(...allX)];
  let [yLo, yHi] = [Math.min(...allY), Math.max(...allY)];
  if (xLo === xHi) {
    [xLo, xHi] = [xLo - 1, xHi + 1];
  }
  if (yLo === yHi) {
    [yLo, yHi] = [yLo - 1, yHi + 1];
  }
  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="24" text-anchor="middle" ` +
      `font-size="16">${escapeXml(opts.title)}</text>`,
  );

  for (const t of ticks(xLo, xHi)) {
    const x = fmt(sx(t));
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" ` +
        `stroke="#ddd"/>`,
      `<text x="${x}" y="${MARGIN.top + plotH + 18}" text-anchor="middle">` +
        `${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi)) {
    const y = fmt(sy(t));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" ` +
        `stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 8}" y="${y}" text-anchor="end" ` +
        `dominant-baseline="middle">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" text-anchor="middle">` +
      `${escapeXml(opts.xLabel)}</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">` +
      `${escapeXml(opts.yLabel)}</text>`,
  );

  series.forEach((s, i) => {
    const colour = PALETTE[i % PALETTE.length]!;
    if (s.points.length > 1) {
      const pts = s.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.y))}`).join(" ");
      parts.push(
        `<polyline points="${pts}" fill="none" stroke="${colour}" stroke-width="1.6"/>`,
      );
    }
    for (const p of s.points) {
      parts.push(
        `<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.y))}" r="2.5" fill="${colour}"/>`,
      );
    }
  });

  series.forEach((s, i) => {
    const colour = PALETTE[i % PALETTE.length]!;
    const y = MARGIN.top + 6 + i * 18;
    const x = width - MARGIN.right + 14;
    parts.push(
      `<g class="legend-entry">` +
        `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${colour}" ` +
        `stroke-width="2"/>` +
        `<text x="${x + 28}" y="${y + 4}">${escapeXml(s.name)}</text>` +
        `</g>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
