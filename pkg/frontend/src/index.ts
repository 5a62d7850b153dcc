export { renderLineChart, ticks, type ChartOptions } from "./chart.js";
export { KINDS, plot, plotBudgetCurve, plotConvergenceCurve, type Kind, type PlotResult } from "./plot.js";
export {
  BUDGET_HEADER,
  CONVERGENCE_HEADER,
  SchemaError,
  parseBudgetCsv,
  parseConvergenceCsv,
  type BudgetRow,
  type ConvergenceRow,
} from "./schema.js";
export {
  budgetSeries,
  convergenceSeries,
  dominantSeries,
  summarize,
  type Manifest,
  type Point,
  type Series,
  type SeriesSummary,
} from "./series.js";
