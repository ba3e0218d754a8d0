/** Shared wire-format types (see the core README's format reference). */

/** 0-based triplet: [row, col, value]. Duplicates sum. */
export type Triplet = [number, number, number];

export interface SparseMatrixJson {
  rows: number;
  cols: number;
  triplets: Triplet[];
}

/** Dense rows, a triplet object, or omitted (all-zero block). */
export type MatrixInput = number[][] | SparseMatrixJson | undefined;

export interface ProblemData {
  /** Quadratic cost: full symmetric matrix or its upper triangle. */
  Q: MatrixInput;
  /** Linear cost (length n; defines n). */
  g: number[];
  A?: MatrixInput;
  b?: number[];
  L?: MatrixInput;
  l?: number[];
  R?: MatrixInput;
  r?: number[];
  name?: string;
}

/** Solver settings exposed across the boundary (CLI flag set). */
export interface SettingsOverrides {
  maxIter?: number;
  epsRes?: number;
  epsEq?: number;
  epsIneq?: number;
  epsComp?: number;
  kappa0?: number;
  kappaMin?: number;
  rho0?: number;
}

export type SolveStatusString =
  | "solved"
  | "max_iterations"
  | "line_search_failure"
  | "relaxation_floor"
  | "numerical_error";

export interface Violations {
  eq: number;
  ineq: number;
  comp: number;
}

export interface StageRecord {
  rho: number;
  kappa: number;
  residual: number;
  newton_steps: number;
  delta_max: number;
}

/** Result record: mirrors the result file one to one. */
export interface SolveRecord {
  schema: string;
  status: SolveStatusString;
  z: number[];
  s: number[];
  t: number[];
  w: number[];
  lam_w: number[];
  lam_sigma: number[];
  objective: number;
  violations: Violations;
  iterations: number;
  trace: StageRecord[];
  settings: Record<string, number>;
  wall_time_sec: number;
}

export interface OracleRecord {
  schema: string;
  status: "solved" | "infeasible";
  z?: number[];
  s?: number[];
  t?: number[];
  w?: number[];
  objective?: number;
  violations?: Violations;
  /** Branch choice per pair: 0 fixes the left side, 1 the right side. */
  assignment?: number[];
  optimal_assignments?: number[][];
}
