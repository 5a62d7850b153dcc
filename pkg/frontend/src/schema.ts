import Papa from "papaparse";

/** Raised for anything wrong with the input CSV (header, types, emptiness). */
export class SchemaError extends Error {}

export const BUDGET_HEADER = [
  "method",
  "budget",
  "expected_blue",
  "expected_blue_fraction",
  "evaluator",
  "rounds",
  "seed",
] as const;

export const CONVERGENCE_HEADER = [
  "strategy",
  "n",
  "graphs",
  "mean_rounds",
  "stderr_rounds",
  "cap_hits",
  "seed",
] as const;

export interface BudgetRow {
  method: string;
  budget: number;
  expectedBlue: number;
  expectedBlueFraction: number;
  evaluator: string;
  rounds: number;
  seed: number;
}

export interface ConvergenceRow {
  strategy: number;
  n: number;
  graphs: number;
  meanRounds: number;
  stderrRounds: number;
  capHits: number;
  seed: number;
}

function parseCells(text: string, expected: readonly string[]): string[][] {
  if (text.trim() === "") {
    throw new SchemaError("empty CSV: no header row");
  }
  const parsed = Papa.parse<string[]>(text, { delimiter: ",", skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]!;
    throw new SchemaError(`malformed CSV: ${e.message} (row ${e.row ?? "?"})`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const header = rows[0]!;
  if (header.length !== expected.length || expected.some((h, i) => header[i] !== h)) {
    throw new SchemaError(
      `header mismatch: expected "${expected.join(",")}", got "${header.join(",")}"`,
    );
  }
  if (rows.length === 1) {
    throw new SchemaError("empty CSV: header but no data rows");
  }
  for (const [i, row] of rows.slice(1).entries()) {
    if (row.length !== expected.length) {
      throw new SchemaError(
        `row ${i + 2}: expected ${expected.length} fields, got ${row.length}`,
      );
    }
  }
  return rows.slice(1);
}

function numeric(value: string, line: number, column: string, integer: boolean): number {
  const v = Number(value);
  if (value.trim() === "" || !Number.isFinite(v)) {
    throw new SchemaError(`row ${line}: ${column} is not a finite number: "${value}"`);
  }
  if (integer && !Number.isInteger(v)) {
    throw new SchemaError(`row ${line}: ${column} is not an integer: "${value}"`);
  }
  return v;
}

export function parseBudgetCsv(text: string): BudgetRow[] {
  return parseCells(text, BUDGET_HEADER).map((row, i) => {
    const line = i + 2;
    const method = row[0]!;
    if (method === "") {
      throw new SchemaError(`row ${line}: method is empty`);
    }
    const fraction = numeric(row[3]!, line, "expected_blue_fraction", false);
    if (fraction < 0 || fraction > 1) {
      throw new SchemaError(
        `row ${line}: expected_blue_fraction out of [0, 1]: ${fraction}`,
      );
    }
    return {
      method,
      budget: numeric(row[1]!, line, "budget", true),
      expectedBlue: numeric(row[2]!, line, "expected_blue", false),
      expectedBlueFraction: fraction,
      evaluator: row[4]!,
      rounds: numeric(row[5]!, line, "rounds", true),
      seed: numeric(row[6]!, line, "seed", true),
    };
  });
}

export function parseConvergenceCsv(text: string): ConvergenceRow[] {
  return parseCells(text, CONVERGENCE_HEADER).map((row, i) => {
    const line = i + 2;
    const n = numeric(row[1]!, line, "n", true);
    if (n <= 0) {
      throw new SchemaError(`row ${line}: n must be positive: ${n}`);
    }
    return {
      strategy: numeric(row[0]!, line, "strategy", true),
      n,
      graphs: numeric(row[2]!, line, "graphs", true),
      meanRounds: numeric(row[3]!, line, "mean_rounds", false),
      stderrRounds: numeric(row[4]!, line, "stderr_rounds", false),
      capHits: numeric(row[5]!, line, "cap_hits", true),
      seed: numeric(row[6]!, line, "seed", true),
    };
  });
}
