import { FieldDump, Mesh, SchemaError, SweepRow, RunRow } from "./csv";
import { Scale, formatTick, linearScale, logScale, padded } from "./scales";
import { Scene, SceneNode } from "./scene";

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export interface LabeledSweep {
  label: string;
  rows: SweepRow[];
}

export interface LabeledRun {
  label: string;
  rows: RunRow[];
}

export interface LabeledDump {
  label: string;
  dump: FieldDump;
}

interface FrameOptions {
  width: number;
  height: number;
  xDomain: [number, number];
  yDomain: [number, number];
  xLog?: boolean;
  yLog?: boolean;
  xLabel: string;
  yLabel: string;
  title?: string;
  rightGutter?: number;
}

interface Frame {
  scene: Scene;
  x: Scale;
  y: Scale;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

const MARGIN = { left: 66, right: 20, bottom: 48 };

/** Axis box, grid, ticks, and labels shared by every plot kind. */
function makeFrame(opts: FrameOptions): Frame {
  const top = opts.title ? 34 : 16;
  const left = MARGIN.left;
  const right = opts.width - (opts.rightGutter ?? MARGIN.right);
  const bottom = opts.height - MARGIN.bottom;
  const x = (opts.xLog ? logScale : linearScale)(opts.xDomain, [left, right]);
  const y = (opts.yLog ? logScale : linearScale)(opts.yDomain, [bottom, top]);
  const nodes: SceneNode[] = [];
  for (const tick of x.ticks) {
    const px = x.map(tick.value);
    nodes.push({ kind: "line", x1: px, y1: top, x2: px, y2: bottom,
      stroke: "#e4e4e4", width: 1 });
    nodes.push({ kind: "line", x1: px, y1: bottom, x2: px, y2: bottom + 5,
      stroke: "#444", width: 1 });
    nodes.push({ kind: "text", x: px, y: bottom + 18, text: tick.label,
      size: 11, anchor: "middle" });
  }
  for (const tick of y.ticks) {
    const py = y.map(tick.value);
    nodes.push({ kind: "line", x1: left, y1: py, x2: right, y2: py,
      stroke: "#e4e4e4", width: 1 });
    nodes.push({ kind: "line", x1: left - 5, y1: py, x2: left, y2: py,
      stroke: "#444", width: 1 });
    nodes.push({ kind: "text", x: left - 8, y: py + 4, text: tick.label,
      size: 11, anchor: "end" });
  }
  nodes.push({ kind: "rect", x: left, y: top, w: right - left,
    h: bottom - top, fill: "none", stroke: "#444" });
  nodes.push({ kind: "text", x: (left + right) / 2, y: opts.height - 12,
    text: opts.xLabel, size: 12, anchor: "middle" });
  nodes.push({ kind: "text", x: 16, y: (top + bottom) / 2, text: opts.yLabel,
    size: 12, anchor: "middle", rotate: -90 });
  if (opts.title) {
    nodes.push({ kind: "text", x: (left + right) / 2, y: 20, text: opts.title,
      size: 13, anchor: "middle" });
  }
  return {
    scene: { width: opts.width, height: opts.height, nodes },
    x, y, left, right, top, bottom,
  };
}

interface LegendEntry {
  label: string;
  stroke: string;
  dash?: string;
}

function drawLegend(frame: Frame, entries: LegendEntry[]): void {
  const lineHeight = 16;
  const maxChars = Math.max(...entries.map((e) => e.label.length));
  const width = 30 + maxChars * 6.4 + 8;
  const height = entries.length * lineHeight + 8;
  const x0 = frame.right - width - 8;
  const y0 = frame.top + 8;
  frame.scene.nodes.push({ kind: "rect", x: x0, y: y0, w: width, h: height,
    fill: "white", stroke: "#bbb" });
  entries.forEach((entry, i) => {
    const cy = y0 + 4 + lineHeight * i + lineHeight / 2;
    frame.scene.nodes.push({ kind: "line", x1: x0 + 6, y1: cy, x2: x0 + 26,
      y2: cy, stroke: entry.stroke, width: 2, dash: entry.dash });
    frame.scene.nodes.push({ kind: "text", x: x0 + 30, y: cy + 4,
      text: entry.label, size: 11, anchor: "start" });
  });
}

/** Log-log L2 error against time step, one curve per sweep summary. */
export function errorVsDt(inputs: LabeledSweep[], guideSlope?: number): Scene {
  const curves = inputs.map((input) => ({
    label: input.label,
    points: input.rows
      .filter((row) => Number.isFinite(row.l2_error) && row.l2_error > 0
        && row.dt > 0)
      .sort((a, b) => a.dt - b.dt)
      .map((row) => [row.dt, row.l2_error] as [number, number]),
  }));
  for (const curve of curves) {
    if (curve.points.length === 0) {
      throw new SchemaError(
        `${curve.label}: no finite positive errors to plot`);
    }
  }
  const xs = curves.flatMap((c) => c.points.map((p) => p[0]));
  const ys = curves.flatMap((c) => c.points.map((p) => p[1]));
  const frame = makeFrame({
    width: 640, height: 440,
    xDomain: padded(Math.min(...xs), Math.max(...xs), 0.06, true),
    yDomain: padded(Math.min(...ys), Math.max(...ys), 0.08, true),
    xLog: true, yLog: true,
    xLabel: "dt", yLabel: "L2 error",
  });
  const legend: LegendEntry[] = [];
  curves.forEach((curve, i) => {
    const stroke = PALETTE[i % PALETTE.length];
    const pixels = curve.points.map(
      ([dt, err]) => [frame.x.map(dt), frame.y.map(err)] as [number, number]);
    if (pixels.length > 1) {
      frame.scene.nodes.push({ kind: "polyline", points: pixels, stroke,
        width: 1.6 });
    }
    for (const [px, py] of pixels) {
      frame.scene.nodes.push({ kind: "circle", cx: px, cy: py, r: 3,
        fill: stroke });
    }
    legend.push({ label: curve.label, stroke });
  });
  if (guideSlope !== undefined) {
    // Anchor the reference slope at the geometric center of the first curve
    // and clip it to the frame in log space.
    const anchor = curves[0].points;
    const gx = Math.exp(anchor.reduce((s, p) => s + Math.log(p[0]), 0)
      / anchor.length);
    const gy = Math.exp(anchor.reduce((s, p) => s + Math.log(p[1]), 0)
      / anchor.length);
    const yAt = (x: number) => gy * (x / gx) ** guideSlope;
    const [x0, x1] = frame.x.domain;
    const [y0, y1] = frame.y.domain;
    let a = x0;
    let b = x1;
    if (guideSlope !== 0) {
      const xFor = (y: number) => gx * (y / gy) ** (1 / guideSlope);
      const bounds = [xFor(y0), xFor(y1)].sort((p, q) => p - q);
      a = Math.max(a, bounds[0]);
      b = Math.min(b, bounds[1]);
    }
    if (a < b) {
      frame.scene.nodes.push({ kind: "line",
        x1: frame.x.map(a), y1: frame.y.map(yAt(a)),
        x2: frame.x.map(b), y2: frame.y.map(yAt(b)),
        stroke: "#555", width: 1.4, dash: "6 4" });
      legend.push({ label: `dt^${guideSlope}`, stroke: "#555", dash: "6 4" });
    }
  }
  drawLegend(frame, legend);
  return frame.scene;
}

/** Solution extrema over time, a max and a min curve per run CSV. */
export function extremaVsTime(inputs: LabeledRun[]): Scene {
  const ts = inputs.flatMap((input) => input.rows.map((row) => row.t));
  const values = inputs.flatMap((input) =>
    input.rows.flatMap((row) => [row.min, row.max]));
  const finite = values.filter(Number.isFinite);
  if (finite.length === 0) {
    throw new SchemaError("no finite extrema to plot");
  }
  const frame = makeFrame({
    width: 640, height: 440,
    xDomain: [0, Math.max(...ts)],
    yDomain: padded(Math.min(...finite), Math.max(...finite), 0.08),
    xLabel: "t", yLabel: "solution extrema",
  });
  const legend: LegendEntry[] = [];
  inputs.forEach((input, i) => {
    const stroke = PALETTE[i % PALETTE.length];
    for (const part of ["max", "min"] as const) {
      const points = input.rows
        .filter((row) => Number.isFinite(row[part]))
        .map((row) =>
          [frame.x.map(row.t), frame.y.map(row[part])] as [number, number]);
      const dash = part === "min" ? "5 3" : undefined;
      frame.scene.nodes.push({ kind: "polyline", points, stroke, width: 1.6,
        dash });
      legend.push({ label: `${input.label} ${part}`, stroke, dash });
    }
  });
  drawLegend(frame, legend);
  return frame.scene;
}

/** Field values along the line x2 = 0, one curve per dump. */
export function fieldCrossSection(inputs: LabeledDump[]): Scene {
  const curves = inputs.map((input) => {
    const points: [number, number][] = [];
    for (let i = 0; i < input.dump.ndof; i++) {
      if (Math.abs(input.dump.y[i]) <= 1e-9) {
        points.push([input.dump.x[i], input.dump.value[i]]);
      }
    }
    points.sort((a, b) => a[0] - b[0]);
    if (points.length < 2) {
      throw new SchemaError(
        `${input.label}: needs at least two degrees of freedom on the line ` +
        `x2 = 0, found ${points.length}`);
    }
    return { label: input.label, points };
  });
  const xs = curves.flatMap((c) => c.points.map((p) => p[0]));
  const ys = curves.flatMap((c) => c.points.map((p) => p[1]));
  const frame = makeFrame({
    width: 640, height: 440,
    xDomain: padded(Math.min(...xs), Math.max(...xs), 0.02),
    yDomain: padded(Math.min(...ys), Math.max(...ys), 0.08),
    xLabel: "x1", yLabel: "value on x2 = 0",
    title: `t = ${formatTick(inputs[0].dump.t)}`,
  });
  const legend: LegendEntry[] = [];
  curves.forEach((curve, i) => {
    const stroke = PALETTE[i % PALETTE.length];
    frame.scene.nodes.push({ kind: "polyline",
      points: curve.points.map(
        ([x, v]) => [frame.x.map(x), frame.y.map(v)] as [number, number]),
      stroke, width: 1.6 });
    legend.push({ label: curve.label, stroke });
  });
  if (curves.length > 1) {
    drawLegend(frame, legend);
  }
  return frame.scene;
}

const VIRIDIS = [
  [0x44, 0x01, 0x54], [0x3b, 0x52, 0x8b], [0x21, 0x91, 0x8c],
  [0x5e, 0xc9, 0x62], [0xfd, 0xe7, 0x25],
];

function viridis(t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (VIRIDIS.length - 1);
  const i = Math.min(VIRIDIS.length - 2, Math.floor(pos));
  const f = pos - i;
  const channel = (c: number) =>
    Math.round(VIRIDIS[i][c] + f * (VIRIDIS[i + 1][c] - VIRIDIS[i][c]));
  return `rgb(${channel(0)},${channel(1)},${channel(2)})`;
}

interface Patch {
  corners: [number, number][];
  value: number;
}

/**
 * Flat-shaded triangles for the contour view. Quadratic fields are split
 * into the four midpoint subtriangles so the edge values show; the
 * bubble-enriched space renders its vertex part (bubble coefficients are
 * not point values).
 */
function contourPatches(dump: FieldDump, mesh: Mesh, path: string): Patch[] {
  const nv = mesh.vertices.length;
  const nt = mesh.triangles.length;
  const mean = (dofs: number[]) =>
    dofs.reduce((s, d) => s + dump.value[d], 0) / dofs.length;
  if (dump.space === "p1" || dump.space === "p1bubble") {
    const want = dump.space === "p1" ? nv : nv + nt;
    if (dump.ndof !== want) {
      throw new SchemaError(
        `${path}: space ${dump.space} on this mesh needs ndof=${want}, ` +
        `the dump has ${dump.ndof}`);
    }
    return mesh.triangles.map((tri) => ({
      corners: tri.map((v) => mesh.vertices[v]),
      value: mean(tri),
    }));
  }
  if (dump.space !== "p2") {
    throw new SchemaError(
      `${path}: unknown space "${dump.space}" (expected p1, p2, or p1bubble)`);
  }
  // Edge midpoint dofs are numbered nv + rank of the edge key min*nv + max
  // in sorted order, matching the solver's dump layout.
  const keys = new Set<number>();
  for (const [a, b, c] of mesh.triangles) {
    for (const [p, q] of [[a, b], [b, c], [c, a]]) {
      keys.add(Math.min(p, q) * nv + Math.max(p, q));
    }
  }
  const edgeDof = new Map<number, number>();
  [...keys].sort((a, b) => a - b).forEach((key, rank) => {
    edgeDof.set(key, nv + rank);
  });
  if (dump.ndof !== nv + keys.size) {
    throw new SchemaError(
      `${path}: space p2 on this mesh needs ndof=${nv + keys.size}, ` +
      `the dump has ${dump.ndof}`);
  }
  const patches: Patch[] = [];
  for (const [a, b, c] of mesh.triangles) {
    const va = mesh.vertices[a];
    const vb = mesh.vertices[b];
    const vc = mesh.vertices[c];
    const mid = (p: [number, number], q: [number, number]): [number, number] =>
      [(p[0] + q[0]) / 2, (p[1] + q[1]) / 2];
    const dof = (p: number, q: number) =>
      edgeDof.get(Math.min(p, q) * nv + Math.max(p, q))!;
    const mab = mid(va, vb);
    const mbc = mid(vb, vc);
    const mca = mid(vc, va);
    const dab = dof(a, b);
    const dbc = dof(b, c);
    const dca = dof(c, a);
    patches.push(
      { corners: [va, mab, mca], value: mean([a, dab, dca]) },
      { corners: [mab, vb, mbc], value: mean([dab, b, dbc]) },
      { corners: [mca, mbc, vc], value: mean([dca, dbc, c]) },
      { corners: [mab, mbc, mca], value: mean([dab, dbc, dca]) },
    );
  }
  return patches;
}

/** Pseudocolor view of a dumped field on its mesh, with a color bar. */
export function fieldContour(dump: FieldDump, mesh: Mesh, path = "field dump"):
    Scene {
  const patches = contourPatches(dump, mesh, path);
  const values = patches.map((p) => p.value);
  const vmin = Math.min(...values);
  const vmax = Math.max(...values);
  const span = vmax - vmin || 1;
  const xs = mesh.vertices.map((v) => v[0]);
  const ys = mesh.vertices.map((v) => v[1]);
  const xDomain: [number, number] = [Math.min(...xs), Math.max(...xs)];
  const yDomain: [number, number] = [Math.min(...ys), Math.max(...ys)];
  // Equal data aspect: derive the pixel box from the mesh bounding box.
  const aspect = (xDomain[1] - xDomain[0]) / (yDomain[1] - yDomain[0] || 1);
  const boxH = 440;
  const boxW = Math.min(760, Math.max(160, boxH * aspect));
  const gutter = 84;
  const frame = makeFrame({
    width: MARGIN.left + boxW + gutter,
    height: 34 + boxH + MARGIN.bottom,
    rightGutter: gutter,
    xDomain, yDomain,
    xLabel: "x1", yLabel: "x2",
    title: `${dump.space} field at t = ${formatTick(dump.t)}`,
  });
  for (const patch of patches) {
    const fill = viridis((patch.value - vmin) / span);
    frame.scene.nodes.push({ kind: "polygon",
      points: patch.corners.map(
        ([x, y]) => [frame.x.map(x), frame.y.map(y)] as [number, number]),
      fill, stroke: fill, strokeWidth: 0.5 });
  }
  // Redraw the box on top of the patches, then the color bar at the right.
  frame.scene.nodes.push({ kind: "rect", x: frame.left, y: frame.top,
    w: frame.right - frame.left, h: frame.bottom - frame.top, fill: "none",
    stroke: "#444" });
  const barX = frame.right + 10;
  const barW = 14;
  const steps = 48;
  const barH = frame.bottom - frame.top;
  for (let i = 0; i < steps; i++) {
    const y0 = frame.bottom - (barH * (i + 1)) / steps;
    frame.scene.nodes.push({ kind: "rect", x: barX, y: y0, w: barW,
      h: barH / steps + 0.5, fill: viridis((i + 0.5) / steps) });
  }
  frame.scene.nodes.push({ kind: "rect", x: barX, y: frame.top, w: barW,
    h: barH, fill: "none", stroke: "#444" });
  for (const [frac, value] of [[0, vmin], [0.5, (vmin + vmax) / 2],
      [1, vmax]] as const) {
    frame.scene.nodes.push({ kind: "text", x: barX + barW + 4,
      y: frame.bottom - barH * frac + 4, text: formatTick(value), size: 10,
      anchor: "start" });
  }
  return frame.scene;
}
