/**
 * Solve and oracle calls, delegated to the solver CLI.
 *
 * The bindings hold no numerical logic: problems are serialized to the
 * wire format, the CLI does the work, and the result file is returned
 * verbatim (so binding results are identical to command-line results).
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { CliError, mapCliError } from "./errors.js";
import type { ProblemHandle } from "./problem.js";
import type {
  OracleRecord,
  SettingsOverrides,
  SolveRecord,
} from "./types.js";

/** CLI executable; override with the LCQP_CLI environment variable. */
export function cliCommand(): string {
  return process.env.LCQP_CLI ?? "lcqp";
}

function runCli(args: string[]): { code: number; stdout: string; stderr: string } {
  const proc = spawnSync(cliCommand(), args, { encoding: "utf8" });
  if (proc.error) {
    throw new CliError(`cannot run ${cliCommand()}: ${proc.error.message}`);
  }
  return { code: proc.status ?? 2, stdout: proc.stdout, stderr: proc.stderr };
}

const FLAGS: Record<keyof SettingsOverrides, string> = {
  maxIter: "--max-iter",
  epsRes: "--eps-res",
  epsEq: "--eps-eq",
  epsIneq: "--eps-ineq",
  epsComp: "--eps-comp",
  kappa0: "--kappa0",
  kappaMin: "--kappa-min",
  rho0: "--rho0",
};

function settingsArgs(overrides?: SettingsOverrides): string[] {
  const args: string[] = [];
  for (const [key, flag] of Object.entries(FLAGS) as
      [keyof SettingsOverrides, string][]) {
    const val = overrides?.[key];
    if (val !== undefined) args.push(flag, String(val));
  }
  return args;
}

function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "lcqp-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

/** Solve a problem file that already exists on disk. */
export function solveProblemFile(
  path: string,
  overrides?: SettingsOverrides,
): SolveRecord {
  return withTempDir((dir) => {
    const out = join(dir, "result.json");
    const { code, stderr } = runCli([
      "solve", path, "--output", out, ...settingsArgs(overrides),
    ]);
    if (code === 2) throw mapCliError(stderr);
    return JSON.parse(readFileSync(out, "utf8")) as SolveRecord;
  });
}

/**
 * Solve the problem owned by a handle.
 *
 * Non-solved terminations are reported in the record's `status`, exactly
 * as the CLI does; only usage-level failures throw.
 */
export function solve(
  handle: ProblemHandle,
  overrides?: SettingsOverrides,
  initialGuess?: number[],
): SolveRecord {
  return withTempDir((dir) => {
    const pf = join(dir, "problem.json");
    writeFileSync(pf, handle.serialize(initialGuess));
    return solveProblemFile(pf, overrides);
  });
}

/** Brute-force global solve (enumerates all complementarity branches). */
export function oracle(handle: ProblemHandle, maxPairs = 14): OracleRecord {
  return withTempDir((dir) => {
    const pf = join(dir, "problem.json");
    const out = join(dir, "oracle.json");
    writeFileSync(pf, handle.serialize());
    const { code, stdout, stderr } = runCli([
      "oracle", pf, "--output", out, "--max-pairs", String(maxPairs),
    ]);
    if (code === 2) throw mapCliError(stderr);
    if (code === 1) return JSON.parse(stdout) as OracleRecord; // infeasible
    return JSON.parse(readFileSync(out, "utf8")) as OracleRecord;
  });
}

/** Version string of the underlying solver. */
export function solverVersion(): string {
  const { code, stdout, stderr } = runCli(["--version"]);
  if (code !== 0) throw mapCliError(stderr);
  return stdout.trim();
}
