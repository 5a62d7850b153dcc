#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { KINDS, plot, type Kind } from "./plot.js";
import { SchemaError } from "./schema.js";

const USAGE =
  "usage: gvm-plot --in results.csv --out figure.svg " +
  "--kind budget_curve|convergence_curve [--title TEXT]\n" +
  "Writes the SVG to --out and a JSON manifest to <out>.manifest.json.";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        kind: { type: "string" },
        title: { type: "string" },
      },
    });
  } catch (e) {
    process.stderr.write(`${(e as Error).message}\n${USAGE}\n`);
    return 1;
  }
  const { in: input, out, kind, title } = args.values;
  if (!input || !out || !kind) {
    process.stderr.write(`--in, --out and --kind are required\n${USAGE}\n`);
    return 1;
  }
  if (!(KINDS as readonly string[]).includes(kind)) {
    process.stderr.write(`unknown kind "${kind}" (expected ${KINDS.join(" or ")})\n`);
    return 1;
  }

  let text: string;
  try {
    text = readFileSync(input, "utf8");
  } catch (e) {
    process.stderr.write(`cannot read ${input}: ${(e as Error).message}\n`);
    return 2;
  }

  let result;
  try {
    result = plot(kind as Kind, text, title);
  } catch (e) {
    if (e instanceof SchemaError) {
      process.stderr.write(`invalid input CSV: ${e.message}\n`);
      return 1;
    }
    throw e;
  }

  const manifestPath = `${out}.manifest.json`;
  try {
    writeFileSync(out, result.svg);
    writeFileSync(manifestPath, JSON.stringify(result.manifest, null, 2) + "\n");
  } catch (e) {
    process.stderr.write(`cannot write output: ${(e as Error).message}\n`);
    return 2;
  }
  process.stdout.write(`wrote ${out} and ${manifestPath}\n`);
  return 0;
}

process.exit(main(process.argv.slice(2)));
