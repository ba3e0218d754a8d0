export {
  CliError,
  DimensionMismatch,
  LcqpError,
  NonFiniteEntry,
  NonSymmetricQ,
  OracleTooLarge,
  SchemaError,
  WrongInertia,
  ZeroPivotError,
  mapCliError,
} from "./errors.js";
export { ProblemHandle } from "./problem.js";
export { cliCommand, oracle, solve, solveProblemFile, solverVersion } from "./solver.js";
export type {
  MatrixInput,
  OracleRecord,
  ProblemData,
  SettingsOverrides,
  SolveRecord,
  SolveStatusString,
  SparseMatrixJson,
  StageRecord,
  Triplet,
  Violations,
} from "./types.js";

/** Bindings version; the solver's own version comes from solverVersion(). */
export const VERSION = "0.1.0";
