import { readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { SchemaError, parseBudgetCsv, parseConvergenceCsv } from "../src/schema.js";

const DATA = join(fileURLToPath(new URL(".", import.meta.url)), "data");

const BUDGET_HEAD =
  "method,budget,expected_blue,expected_blue_fraction,evaluator,rounds,seed";
const CONV_HEAD = "strategy,n,graphs,mean_rounds,stderr_rounds,cap_hits,seed";

describe("budget CSV", () => {
  it("parses the experiment fixture", () => {
    const rows = parseBudgetCsv(readFileSync(join(DATA, "budget_curve.csv"), "utf8"));
    expect(rows.length).toBe(441);
    expect(rows[0]).toEqual({
      method: "none",
      budget: 0,
      expectedBlue: 0,
      expectedBlueFraction: 0,
      evaluator: "marginal",
      rounds: 20,
      seed: 1,
    });
  });

  it("rejects a wrong header", () => {
    const text = "method,budget,value\ngreedy,1,2.0\n";
    expect(() => parseBudgetCsv(text)).toThrow(SchemaError);
    expect(() => parseBudgetCsv(text)).toThrow(/header mismatch/);
  });

  it("rejects the convergence header", () => {
    const text = `${CONV_HEAD}\n1,20,24,5.0,0.1,0,7\n`;
    expect(() => parseBudgetCsv(text)).toThrow(/header mismatch/);
  });

  it("rejects an empty file and a header-only file", () => {
    expect(() => parseBudgetCsv("")).toThrow(/empty CSV/);
    expect(() => parseBudgetCsv(`${BUDGET_HEAD}\n`)).toThrow(/empty CSV/);
  });

  it("rejects non-numeric and fractional integer fields", () => {
    expect(() =>
      parseBudgetCsv(`${BUDGET_HEAD}\ngreedy,one,2.0,0.5,marginal,20,1\n`),
    ).toThrow(/budget is not/);
    expect(() =>
      parseBudgetCsv(`${BUDGET_HEAD}\ngreedy,1.5,2.0,0.5,marginal,20,1\n`),
    ).toThrow(/budget is not an integer/);
  });

  it("rejects a fraction outside [0, 1]", () => {
    expect(() =>
      parseBudgetCsv(`${BUDGET_HEAD}\ngreedy,1,2.0,1.5,marginal,20,1\n`),
    ).toThrow(/out of \[0, 1\]/);
  });

  it("rejects rows with missing fields", () => {
    expect(() => parseBudgetCsv(`${BUDGET_HEAD}\ngreedy,1,2.0\n`)).toThrow(
      /expected 7 fields/,
    );
  });
});

describe("convergence CSV", () => {
  it("parses the experiment fixture", () => {
    const rows = parseConvergenceCsv(
      readFileSync(join(DATA, "convergence_curve.csv"), "utf8"),
    );
    expect(rows.length).toBe(12);
    expect(rows[0]).toMatchObject({ strategy: 1, n: 20, graphs: 24, seed: 7 });
  });

  it("rejects the budget header", () => {
    expect(() => parseConvergenceCsv(`${BUDGET_HEAD}\na,1,2,0.5,m,20,1\n`)).toThrow(
      /header mismatch/,
    );
  });

  it("rejects a non-positive size", () => {
    expect(() =>
      parseConvergenceCsv(`${CONV_HEAD}\n1,0,24,5.0,0.1,0,7\n`),
    ).toThrow(/n must be positive/);
  });
});
