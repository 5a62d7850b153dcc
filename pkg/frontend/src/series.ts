import type { BudgetRow, ConvergenceRow } from "./schema.js";

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  name: string;
  points: Point[];
}

export interface SeriesSummary {
  name: string;
  points: number;
  mean: number;
}

export interface Manifest {
  kind: "budget_curve" | "convergence_curve";
  title: string;
  xLabel: string;
  yLabel: string;
  series: SeriesSummary[];
  /** Series with the highest mean y value (ties broken by name). */
  dominant: string;
}

function grouped(names: string[], xs: number[], ys: number[]): Series[] {
  const by = new Map<string, Point[]>();
  names.forEach((name, i) => {
    const pts = by.get(name) ?? [];
    pts.push({ x: xs[i]!, y: ys[i]! });
    by.set(name, pts);
  });
  return [...by.entries()]
    .map(([name, points]) => ({
      name,
      points: [...points].sort((a, b) => a.x - b.x),
    }))
    .sort((a, b) => (a.name < b.name ? -1 : a.name > b.name ? 1 : 0));
}

export function budgetSeries(rows: BudgetRow[]): Series[] {
  return grouped(
    rows.map((r) => r.method),
    rows.map((r) => r.budget),
    rows.map((r) => r.expectedBlueFraction),
  );
}

export function convergenceSeries(rows: ConvergenceRow[]): Series[] {
  return grouped(
    rows.map((r) => `strategy-${r.strategy}`),
    rows.map((r) => r.n),
    rows.map((r) => r.meanRounds),
  );
}

export function summarize(series: Series[]): SeriesSummary[] {
  return series.map((s) => ({
    name: s.name,
    points: s.points.length,
    mean: s.points.reduce((acc, p) => acc + p.y, 0) / s.points.length,
  }));
}

export function dominantSeries(summaries: SeriesSummary[]): string {
  let best = summaries[0]!;
  for (const s of summaries.slice(1)) {
    if (s.mean > best.mean || (s.mean === best.mean && s.name < best.name)) {
      best = s;
    }
  }
  return best.name;
}
