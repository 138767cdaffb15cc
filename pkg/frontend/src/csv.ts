import { readFileSync } from "fs";
import { parse } from "papaparse";

/** Raised when an input file does not match its documented schema. */
export class SchemaError extends Error {}

export interface SweepRow {
  dt: number;
  l2_error: number;
  max_l2norm: number;
  min: number;
  max: number;
  unstable_flag: number;
}

export interface RunRow {
  step: number;
  t: number;
  l2norm: number;
  dissipation_inc: number;
  triple_sq: number;
  min: number;
  max: number;
  dc_iters: number;
  stab_energy: number;
}

export interface FieldDump {
  space: string;
  ndof: number;
  step: number;
  t: number;
  x: number[];
  y: number[];
  value: number[];
}

export interface Mesh {
  vertices: [number, number][];
  triangles: [number, number, number][];
}

const SWEEP_COLUMNS = ["dt", "l2_error", "max_l2norm", "min", "max",
  "unstable_flag"] as const;
const RUN_COLUMNS = ["step", "t", "l2norm", "dissipation_inc", "triple_sq",
  "min", "max", "dc_iters", "stab_energy"] as const;

/** Parse one numeric cell; the solver writes nan/inf for failed runs. */
function parseNumber(raw: string, where: string): number {
  const text = raw.trim();
  if (/^nan$/i.test(text)) return NaN;
  if (/^-?inf(inity)?$/i.test(text)) return text.startsWith("-") ? -Infinity : Infinity;
  const value = Number(text);
  if (text === "" || Number.isNaN(value)) {
    throw new SchemaError(`${where}: not a number: "${raw}"`);
  }
  return value;
}

function parseCsvRows(path: string, columns: readonly string[]):
    Record<string, number>[] {
  const text = readFileSync(path, "utf8");
  const parsed = parse<Record<string, string>>(text, {
    header: true,
    comments: "#",
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of columns) {
    if (!fields.includes(column)) {
      throw new SchemaError(`${path}: missing column "${column}"`);
    }
  }
  for (const field of fields) {
    if (!columns.includes(field)) {
      throw new SchemaError(`${path}: unknown column "${field}"`);
    }
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return parsed.data.map((raw, i) => {
    const row: Record<string, number> = {};
    for (const column of columns) {
      row[column] = parseNumber(raw[column] ?? "",
        `${path}: row ${i + 1}, column "${column}"`);
    }
    return row;
  });
}

/** Read a sweep summary CSV (one row per time step size). */
export function readSweepCsv(path: string): SweepRow[] {
  return parseCsvRows(path, SWEEP_COLUMNS) as unknown as SweepRow[];
}

/** Read a per-step run CSV (the trailing comment footer is skipped). */
export function readRunCsv(path: string): RunRow[] {
  return parseCsvRows(path, RUN_COLUMNS) as unknown as RunRow[];
}

/**
 * Read a field dump: a header line naming the space and size, then one
 * "x y value" line per degree of freedom.
 */
export function readFieldDump(path: string): FieldDump {
  const lines = readFileSync(path, "utf8").split("\n");
  const header = /^# space=(\S+) ndof=(\d+) step=(\d+) t=(\S+)$/.exec(
    lines[0] ?? "");
  if (!header) {
    throw new SchemaError(
      `${path}: expected a "# space=... ndof=... step=... t=..." header, ` +
      `got "${(lines[0] ?? "").slice(0, 60)}"`);
  }
  const dump: FieldDump = {
    space: header[1],
    ndof: Number(header[2]),
    step: Number(header[3]),
    t: parseNumber(header[4], `${path}: header field t`),
    x: [],
    y: [],
    value: [],
  };
  for (let i = 1; i < lines.length; i++) {
    if (lines[i].trim() === "") continue;
    const parts = lines[i].trim().split(/\s+/);
    if (parts.length !== 3) {
      throw new SchemaError(
        `${path}: line ${i + 1}: expected "x y value", got ${parts.length} fields`);
    }
    dump.x.push(parseNumber(parts[0], `${path}: line ${i + 1} x`));
    dump.y.push(parseNumber(parts[1], `${path}: line ${i + 1} y`));
    dump.value.push(parseNumber(parts[2], `${path}: line ${i + 1} value`));
  }
  if (dump.x.length !== dump.ndof) {
    throw new SchemaError(
      `${path}: header says ndof=${dump.ndof} but found ${dump.x.length} rows`);
  }
  return dump;
}

/** Read a mesh dump: "NV NT", NV vertex lines, NT triangle index lines. */
export function readMesh(path: string): Mesh {
  const lines = readFileSync(path, "utf8").split("\n")
    .filter((line) => line.trim() !== "");
  const counts = (lines[0] ?? "").trim().split(/\s+/);
  if (counts.length !== 2 || !/^\d+$/.test(counts[0]) || !/^\d+$/.test(counts[1])) {
    throw new SchemaError(
      `${path}: expected a "NV NT" count header, got "${(lines[0] ?? "").slice(0, 60)}"`);
  }
  const nv = Number(counts[0]);
  const nt = Number(counts[1]);
  if (lines.length !== 1 + nv + nt) {
    throw new SchemaError(
      `${path}: expected ${1 + nv + nt} lines for ${nv} vertices and ` +
      `${nt} triangles, found ${lines.length}`);
  }
  const mesh: Mesh = { vertices: [], triangles: [] };
  for (let i = 0; i < nv; i++) {
    const parts = lines[1 + i].trim().split(/\s+/);
    if (parts.length !== 2) {
      throw new SchemaError(`${path}: line ${i + 2}: expected "x y"`);
    }
    mesh.vertices.push([
      parseNumber(parts[0], `${path}: line ${i + 2} x`),
      parseNumber(parts[1], `${path}: line ${i + 2} y`),
    ]);
  }
  for (let i = 0; i < nt; i++) {
    const parts = lines[1 + nv + i].trim().split(/\s+/);
    if (parts.length !== 3 || parts.some((p) => !/^\d+$/.test(p))) {
      throw new SchemaError(
        `${path}: line ${nv + i + 2}: expected three vertex indices`);
    }
    const tri = parts.map(Number) as [number, number, number];
    for (const v of tri) {
      if (v >= nv) {
        throw new SchemaError(
          `${path}: line ${nv + i + 2}: vertex index ${v} out of range ` +
          `(mesh has ${nv} vertices)`);
      }
    }
    mesh.triangles.push(tri);
  }
  return mesh;
}
