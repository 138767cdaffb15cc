export { SchemaError, readFieldDump, readMesh, readRunCsv, readSweepCsv }
  from "./csv";
export type { FieldDump, Mesh, RunRow, SweepRow } from "./csv";
export { errorVsDt, extremaVsTime, fieldContour, fieldCrossSection, PALETTE }
  from "./plots";
export type { LabeledDump, LabeledRun, LabeledSweep } from "./plots";
export { KINDS, OutputError, buildScene, plot } from "./plot";
export type { Kind, PlotSpec } from "./plot";
export { sceneToSvg } from "./scene";
export type { Scene, SceneNode } from "./scene";
export { linearScale, logScale, formatTick, padded } from "./scales";
