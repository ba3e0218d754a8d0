/**
 * Binding results must equal direct CLI results field by field.
 *
 * Both paths run the same executable on the same serialized problem, so
 * the comparison is bitwise in practice; the asserted tolerance is the
 * contractual 1e-12.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { ProblemHandle, cliCommand, oracle, solve } from "../src/index.js";
import type { SolveRecord } from "../src/index.js";
import { corpusHandles, randomProblem } from "./helpers.js";

function cliSolve(handle: ProblemHandle): SolveRecord {
  const dir = mkdtempSync(join(tmpdir(), "lcqp-cli-"));
  try {
    const pf = join(dir, "p.json");
    const rf = join(dir, "r.json");
    writeFileSync(pf, handle.serialize());
    const proc = spawnSync(cliCommand(), ["solve", pf, "--output", rf], {
      encoding: "utf8",
    });
    expect(proc.status === 0 || proc.status === 1).toBe(true);
    return JSON.parse(readFileSync(rf, "utf8")) as SolveRecord;
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function expectClose(a: number[], b: number[], what: string) {
  expect(a.length, what).toBe(b.length);
  for (let i = 0; i < a.length; i++) {
    expect(Math.abs(a[i] - b[i]), `${what}[${i}]`).toBeLessThanOrEqual(1e-12);
  }
}

describe("binding/CLI parity", () => {
  const handles = corpusHandles(20);

  it("matches the CLI field by field on a 20-problem corpus", () => {
    for (const handle of handles) {
      const viaBinding = solve(handle);
      const viaCli = cliSolve(handle);
      expect(viaBinding.status).toBe(viaCli.status);
      expect(viaBinding.iterations).toBe(viaCli.iterations);
      expectClose(viaBinding.z, viaCli.z, "z");
      expectClose(viaBinding.s, viaCli.s, "s");
      expectClose(viaBinding.t, viaCli.t, "t");
      expectClose(viaBinding.w, viaCli.w, "w");
      expectClose(viaBinding.lam_w, viaCli.lam_w, "lam_w");
      expectClose(viaBinding.lam_sigma, viaCli.lam_sigma, "lam_sigma");
      expect(Math.abs(viaBinding.objective - viaCli.objective)).toBeLessThanOrEqual(1e-12);
      for (const key of ["eq", "ineq", "comp"] as const) {
        expect(
          Math.abs(viaBinding.violations[key] - viaCli.violations[key]),
        ).toBeLessThanOrEqual(1e-12);
      }
      expect(viaBinding.trace.length).toBe(viaCli.trace.length);
      expect(viaBinding.settings).toEqual(viaCli.settings);
    }
  }, 300_000);

  it("tiny QP solves to z = 1", () => {
    const handle = new ProblemHandle({ Q: [[1]], g: [-1] });
    const record = solve(handle);
    expect(record.status).toBe("solved");
    expect(record.z[0]).toBeCloseTo(1.0, 9);
  }, 60_000);

  it("complementarity toy attains the oracle objective", () => {
    const handle = new ProblemHandle({
      Q: [
        [1, 0],
        [0, 1],
      ],
      g: [-2, -2],
      L: [[1, 0]],
      l: [0],
      R: [[0, 1]],
      r: [0],
    });
    const record = solve(handle);
    expect(record.status).toBe("solved");
    expect(Math.abs(record.objective - -2.0)).toBeLessThanOrEqual(1e-6);
    const reference = oracle(handle);
    expect(reference.status).toBe("solved");
    expect(reference.objective).toBeCloseTo(-2.0, 9);
    expect(reference.optimal_assignments).toHaveLength(2);
  }, 60_000);

  it("settings overrides are applied and echoed", () => {
    const handle = new ProblemHandle({ Q: [[1]], g: [-1] });
    const record = solve(handle, { epsRes: 1e-7, rho0: 5, kappaMin: 1e-10 });
    expect(record.settings.eps_res).toBe(1e-7);
    expect(record.settings.rho0).toBe(5);
    expect(record.settings.kappa_min).toBe(1e-10);
  }, 60_000);

  it("handles are independent: solving one never mutates another", () => {
    const h1 = new ProblemHandle(randomProblem(7_001));
    const h2 = new ProblemHandle(randomProblem(7_002));
    const before = h1.serialize();
    const r2a = solve(h2);
    const r1 = solve(h1);
    const r2b = solve(h2);
    expect(h1.serialize()).toBe(before);
    expectClose(r2a.z, r2b.z, "repeat-z");
    expect(r1.iterations).toBeGreaterThan(0);
    h1.dispose();
    expect(h1.disposed).toBe(true);
    expect(() => solve(h1)).toThrow();
    // disposing one handle leaves the other usable
    const r2c = solve(h2);
    expectClose(r2b.z, r2c.z, "post-dispose-z");
  }, 120_000);

  it("initial guess travels through the wire format", () => {
    const handle = new ProblemHandle({ Q: [[1]], g: [-1] });
    const record = solve(handle, undefined, [0.75]);
    expect(record.status).toBe("solved");
    expect(record.z[0]).toBeCloseTo(1.0, 9);
  }, 60_000);
});
