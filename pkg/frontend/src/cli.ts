#!/usr/bin/env node
/**
 * figures <kind> --in <csv...> --out <svg>
 *
 * Renders one SVG figure from rbffdlab CSV artifacts. Exits nonzero on
 * schema problems (missing columns, empty inputs) or bad usage.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { fileURLToPath } from "node:url";

import { FigureKind, NamedCsv, renderFigure } from "./figures.js";
import { EmptyInput, MissingColumn } from "./errors.js";

const KINDS: FigureKind[] = [
  "solution_scatter",
  "sweep_curves",
  "convergence_loglog",
  "split_comparison",
  "sign_field",
  "dN_curve",
];

function usage(): string {
  return (
    `usage: figures <kind> --in <csv> [<csv> ...] --out <svg>\n` +
    `  kinds: ${KINDS.join(", ")}\n` +
    `  sign_field accepts several --in files (one panel each, shared colors)`
  );
}

export function main(argv: string[]): number {
  const [kindArg, ...rest] = argv;
  if (!kindArg || kindArg === "--help" || kindArg === "-h") {
    console.log(usage());
    return kindArg ? 0 : 2;
  }
  if (!KINDS.includes(kindArg as FigureKind)) {
    console.error(`unknown figure kind "${kindArg}"\n${usage()}`);
    return 2;
  }

  const inputs: string[] = [];
  let out: string | undefined;
  for (let i = 0; i < rest.length; i++) {
    if (rest[i] === "--in") {
      while (i + 1 < rest.length && !rest[i + 1].startsWith("--")) {
        inputs.push(rest[++i]);
      }
    } else if (rest[i] === "--out") {
      out = rest[++i];
    } else {
      console.error(`unexpected argument "${rest[i]}"\n${usage()}`);
      return 2;
    }
  }
  if (inputs.length === 0 || !out) {
    console.error(usage());
    return 2;
  }

  try {
    const named: NamedCsv[] = inputs.map((p) => ({
      name: basename(p),
      text: readFileSync(p, "utf-8"),
    }));
    writeFileSync(out, renderFigure(kindArg as FigureKind, named));
  } catch (err) {
    if (err instanceof MissingColumn || err instanceof EmptyInput) {
      console.error(`${err.name}: ${err.message}`);
      return 1;
    }
    console.error(String(err));
    return 1;
  }
  console.log(`wrote ${out}`);
  return 0;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
