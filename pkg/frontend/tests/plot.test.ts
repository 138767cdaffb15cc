import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, describe, expect, it } from "vitest";

import { SchemaError } from "../src/csv";
import { OutputError, buildScene, plot } from "../src/plot";

const FIXTURES = path.join(__dirname, "fixtures");
const tmpDir = fs.mkdtempSync(path.join(os.tmpdir(), "plots-spec-"));

afterAll(() => {
  fs.rmSync(tmpDir, { recursive: true, force: true });
});

describe("plot", () => {
  it("writes an svg for a valid spec", () => {
    const out = path.join(tmpDir, "fig.svg");
    plot({
      kind: "error_vs_dt",
      inputs: [path.join(FIXTURES, "sweep_a2.csv")],
      out,
      guideSlope: -0.5,
    });
    expect(fs.readFileSync(out, "utf8").startsWith("<svg")).toBe(true);
  });

  it("rejects non-svg output paths before reading anything", () => {
    expect(() => plot({
      kind: "error_vs_dt",
      inputs: ["does_not_even_exist.csv"],
      out: path.join(tmpDir, "fig.png"),
    })).toThrow(SchemaError);
  });

  it("rejects an empty input list", () => {
    expect(() => buildScene({ kind: "error_vs_dt", inputs: [],
      out: "x.svg" })).toThrow("at least one input");
  });

  it("rejects a guide slope on the wrong kind", () => {
    expect(() => buildScene({
      kind: "extrema_vs_time",
      inputs: [path.join(FIXTURES, "run_cylinder_dc.csv")],
      out: "x.svg",
      guideSlope: -0.5,
    })).toThrow("only applies to kind error_vs_dt");
  });

  it("wraps write failures in OutputError", () => {
    expect(() => plot({
      kind: "error_vs_dt",
      inputs: [path.join(FIXTURES, "sweep_a2.csv")],
      out: path.join(FIXTURES, "sweep_a2.csv", "fig.svg"),
    })).toThrow(OutputError);
  });

  it("rejects an unknown kind at runtime", () => {
    expect(() => buildScene({
      kind: "pie" as never,
      inputs: [path.join(FIXTURES, "sweep_a2.csv")],
      out: "x.svg",
    })).toThrow('unknown kind "pie"');
  });
});
