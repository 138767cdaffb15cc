#!/usr/bin/env node
import { SchemaError } from "./csv";
import { KINDS, Kind, OutputError, PlotSpec, plot } from "./plot";

const USAGE = `usage: plot --kind KIND --in FILE [FILE ...] --out IMAGE [--guide-slope S]

Renders solver output files to an SVG image.

kinds:
  error_vs_dt          sweep summary CSVs; one error-vs-dt curve per file,
                       optional dt^S reference line via --guide-slope
  extrema_vs_time      run CSVs; solution max (solid) and min (dashed)
                       curves per file
  field_cross_section  field dumps; values along the line x2 = 0
  field_contour        one field dump plus its mesh file; pseudocolor view
`;

function fail(message: string): never {
  throw new SchemaError(message);
}

function parseArgs(argv: string[]): PlotSpec | "help" {
  let kind: string | undefined;
  const inputs: string[] = [];
  let out: string | undefined;
  let guideSlope: number | undefined;
  let i = 0;
  const value = (flag: string) => {
    i++;
    if (i >= argv.length) {
      fail(`${flag} needs a value`);
    }
    return argv[i];
  };
  while (i < argv.length) {
    const arg = argv[i];
    if (arg === "--help" || arg === "-h") {
      return "help";
    } else if (arg === "--kind") {
      kind = value(arg);
    } else if (arg === "--out") {
      out = value(arg);
    } else if (arg === "--guide-slope") {
      const raw = value(arg);
      guideSlope = Number(raw);
      if (!Number.isFinite(guideSlope)) {
        fail(`--guide-slope needs a number, got "${raw}"`);
      }
    } else if (arg === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        i++;
        inputs.push(argv[i]);
      }
      if (inputs.length === 0) {
        fail("--in needs at least one file");
      }
    } else {
      fail(`unknown argument "${arg}"`);
    }
    i++;
  }
  if (!kind) {
    fail("--kind is required");
  }
  if (!(KINDS as readonly string[]).includes(kind)) {
    fail(`unknown kind "${kind}" (expected one of: ${KINDS.join(", ")})`);
  }
  if (inputs.length === 0) {
    fail("--in is required");
  }
  if (!out) {
    fail("--out is required");
  }
  return { kind: kind as Kind, inputs, out, guideSlope };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    if (spec === "help") {
      process.stdout.write(USAGE);
      return 0;
    }
    plot(spec);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      console.error("run with --help for usage");
      return 2;
    }
    if (err instanceof OutputError) {
      console.error(`error: ${err.message}`);
      return 4;
    }
    throw err;
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
