// Acceptance: the plot pipeline renders the solver's sweep and run outputs
// to nonempty SVG images and leaves its inputs untouched and re-readable.
import { spawnSync } from "child_process";
import * as crypto from "crypto";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, describe, expect, it } from "vitest";

import { readRunCsv, readSweepCsv } from "../src/csv";

const CLI = path.join(__dirname, "..", "dist", "cli.js");
const FIXTURES = path.join(__dirname, "fixtures");
const tmpDir = fs.mkdtempSync(path.join(os.tmpdir(), "plots-accept-"));

const SWEEPS = ["sweep_a2.csv", "sweep_a5_7pt.csv"]
  .map((name) => path.join(FIXTURES, name));
const RUN = path.join(FIXTURES, "run_cylinder_dc.csv");

afterAll(() => {
  fs.rmSync(tmpDir, { recursive: true, force: true });
});

function sha256(file: string): string {
  return crypto.createHash("sha256").update(fs.readFileSync(file))
    .digest("hex");
}

function plot(...args: string[]): number | null {
  return spawnSync(process.execPath, [CLI, ...args],
    { encoding: "utf8" }).status;
}

function renderedSvg(file: string): string {
  expect(fs.existsSync(file)).toBe(true);
  expect(fs.statSync(file).size).toBeGreaterThan(0);
  const svg = fs.readFileSync(file, "utf8");
  expect(svg.startsWith("<svg")).toBe(true);
  return svg;
}

describe("A10 plot pipeline", () => {
  const hashesBefore = new Map(
    [...SWEEPS, RUN].map((f) => [f, sha256(f)]));

  it("renders the convergence figure from the sweep summaries", () => {
    const out = path.join(tmpDir, "error_vs_dt.svg");
    expect(plot("--kind", "error_vs_dt", "--in", ...SWEEPS, "--out", out,
      "--guide-slope", "-0.5")).toBe(0);
    const svg = renderedSvg(out);
    // One curve per input plus the dt^-1/2 reference line.
    expect(svg.match(/<polyline/g)).toHaveLength(SWEEPS.length);
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain("dt^-0.5");
    expect(svg).toContain("sweep_a2");
    expect(svg).toContain("sweep_a5_7pt");
    console.log("A10-i PASS error_vs_dt figure rendered " +
      `(${fs.statSync(out).size} bytes, ${SWEEPS.length} curves + guide)`);
  });

  it("renders the extrema figure spanning the whole cylinder run", () => {
    const out = path.join(tmpDir, "extrema.svg");
    expect(plot("--kind", "extrema_vs_time", "--in", RUN, "--out", out))
      .toBe(0);
    const svg = renderedSvg(out);
    expect(svg.match(/<polyline/g)).toHaveLength(2); // max and min curves
    const rows = readRunCsv(RUN);
    expect(rows[0].t).toBeCloseTo(0.01, 12);
    expect(rows[rows.length - 1].t).toBeCloseTo(1.0, 12);
    console.log("A10-ii PASS extrema figure rendered over " +
      `t in [${rows[0].t}, ${rows[rows.length - 1].t}]`);
  });

  it("leaves every input byte-identical", () => {
    for (const [file, before] of hashesBefore) {
      expect(sha256(file), path.basename(file)).toBe(before);
    }
    console.log(`A10-iii PASS ${hashesBefore.size} input files unchanged`);
  });

  it("round-trips the input schemas after plotting", () => {
    for (const sweep of SWEEPS) {
      const rows = readSweepCsv(sweep);
      expect(rows.length).toBeGreaterThan(0);
      for (const row of rows) {
        expect(Number.isFinite(row.dt)).toBe(true);
        expect(row.unstable_flag === 0 || row.unstable_flag === 1).toBe(true);
      }
    }
    const run = readRunCsv(RUN);
    expect(run).toHaveLength(100);
    expect(run.every((r) => Number.isFinite(r.l2norm))).toBe(true);
    console.log("A10-iv PASS inputs re-read and schema-validated");
  });
});
