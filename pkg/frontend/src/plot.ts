import { renderLineChart } from "./chart.js";
import { parseBudgetCsv, parseConvergenceCsv } from "./schema.js";
import {
  budgetSeries,
  convergenceSeries,
  dominantSeries,
  summarize,
  type Manifest,
} from "./series.js";

export interface PlotResult {
  svg: string;
  manifest: Manifest;
}

export const KINDS = ["budget_curve", "convergence_curve"] as const;
export type Kind = (typeof KINDS)[number];

export function plotBudgetCurve(csvText: string, title = "Expected blue share by budget"): PlotResult {
  const series = budgetSeries(parseBudgetCsv(csvText));
  const xLabel = "budget";
  const yLabel = "expected blue fraction";
  const summaries = summarize(series);
  return {
    svg: renderLineChart(series, { title, xLabel, yLabel }),
    manifest: {
      kind: "budget_curve",
      title,
      xLabel,
      yLabel,
      series: summaries,
      dominant: dominantSeries(summaries),
    },
  };
}

export function plotConvergenceCurve(csvText: string, title = "Convergence time by graph size"): PlotResult {
  const series = convergenceSeries(parseConvergenceCsv(csvText));
  const xLabel = "graph size n";
  const yLabel = "mean rounds to convergence";
  const summaries = summarize(series);
  return {
    svg: renderLineChart(series, { title, xLabel, yLabel }),
    manifest: {
      kind: "convergence_curve",
      title,
      xLabel,
      yLabel,
      series: summaries,
      dominant: dominantSeries(summaries),
    },
  };
}

export function plot(kind: Kind, csvText: string, title?: string): PlotResult {
  return kind === "budget_curve"
    ? plotBudgetCurve(csvText, title)
    : plotConvergenceCurve(csvText, title);
}
