import * as fs from "fs";
import * as path from "path";

import { SchemaError, readFieldDump, readMesh, readRunCsv, readSweepCsv }
  from "./csv";
import { errorVsDt, extremaVsTime, fieldContour, fieldCrossSection }
  from "./plots";
import { Scene, sceneToSvg } from "./scene";

export const KINDS = [
  "error_vs_dt", "extrema_vs_time", "field_cross_section", "field_contour",
] as const;
export type Kind = typeof KINDS[number];

/** One figure: which inputs, what kind of plot, where the image goes. */
export interface PlotSpec {
  kind: Kind;
  /** Solver output files; what each must contain depends on the kind. */
  inputs: string[];
  /** Output image path; the extension picks the format (.svg only). */
  out: string;
  /** Reference-slope overlay (a dashed dt^S line), error_vs_dt only. */
  guideSlope?: number;
}

/** The output image could not be written (as opposed to a bad spec). */
export class OutputError extends Error {}

function stem(file: string): string {
  return path.basename(file).replace(/\.[^.]*$/, "");
}

/** Build the figure for a spec without writing it. Throws SchemaError. */
export function buildScene(spec: PlotSpec): Scene {
  if (spec.inputs.length === 0) {
    throw new SchemaError("at least one input file is required");
  }
  if (spec.guideSlope !== undefined && spec.kind !== "error_vs_dt") {
    throw new SchemaError("--guide-slope only applies to kind error_vs_dt");
  }
  for (const file of spec.inputs) {
    if (!fs.existsSync(file)) {
      throw new SchemaError(`input file not found: ${file}`);
    }
  }
  switch (spec.kind) {
    case "error_vs_dt":
      return errorVsDt(
        spec.inputs.map((f) => ({ label: stem(f), rows: readSweepCsv(f) })),
        spec.guideSlope);
    case "extrema_vs_time":
      return extremaVsTime(
        spec.inputs.map((f) => ({ label: stem(f), rows: readRunCsv(f) })));
    case "field_cross_section":
      return fieldCrossSection(
        spec.inputs.map((f) => ({ label: stem(f), dump: readFieldDump(f) })));
    case "field_contour": {
      if (spec.inputs.length !== 2) {
        throw new SchemaError("field_contour needs exactly two inputs: a " +
          "field dump and its mesh file");
      }
      const isDump = spec.inputs.map(
        (f) => fs.readFileSync(f, "utf8").startsWith("# space="));
      if (isDump[0] === isDump[1]) {
        throw new SchemaError("field_contour needs one field dump (header " +
          "\"# space=...\") and one mesh file");
      }
      const dumpPath = spec.inputs[isDump[0] ? 0 : 1];
      const meshPath = spec.inputs[isDump[0] ? 1 : 0];
      return fieldContour(readFieldDump(dumpPath), readMesh(meshPath),
        dumpPath);
    }
    default: {
      const bad: never = spec.kind;
      throw new SchemaError(
        `unknown kind "${bad}" (expected one of: ${KINDS.join(", ")})`);
    }
  }
}

/**
 * Render a figure to the image file named by `spec.out`. Invalid requests
 * and input schema problems throw SchemaError; failures to write throw
 * OutputError. Inputs are only ever read.
 */
export function plot(spec: PlotSpec): void {
  const ext = path.extname(spec.out).toLowerCase();
  if (ext !== ".svg") {
    throw new SchemaError(`cannot write "${ext || spec.out}" images: only ` +
      ".svg output is supported (no raster backend)");
  }
  const scene = buildScene(spec);
  try {
    const dir = path.dirname(spec.out);
    if (dir && dir !== ".") {
      fs.mkdirSync(dir, { recursive: true });
    }
    fs.writeFileSync(spec.out, sceneToSvg(scene));
  } catch (err) {
    throw new OutputError(
      `cannot write ${spec.out}: ${(err as Error).message}`);
  }
}
