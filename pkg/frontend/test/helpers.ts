/** Deterministic PRNG and problem corpus for the binding tests. */

import { ProblemHandle } from "../src/problem.js";
import type { ProblemData } from "../src/types.js";

/** mulberry32: small deterministic PRNG, plenty for test corpora. */
export function rng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function gaussian(next: () => number): number {
  // Box-Muller with the half-open guard
  const u = Math.max(next(), 1e-12);
  const v = next();
  return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
}

function dense(rows: number, cols: number, next: () => number): number[][] {
  return Array.from({ length: rows }, () =>
    Array.from({ length: cols }, () => gaussian(next)),
  );
}

/** Random strictly convex LCQP with a complementarity-feasible point. */
export function randomProblem(seed: number): ProblemData {
  const next = rng(seed);
  const n = 2 + Math.floor(next() * 4); // 2..5
  const m = Math.floor(next() * 3); // 0..2
  const p = 1 + Math.floor(next() * Math.min(2, n - 2)); // 1..min(2, n-1)

  const B = dense(n, n, next);
  const Q: number[][] = Array.from({ length: n }, (_, i) =>
    Array.from({ length: n }, (_, j) => {
      let acc = i === j ? 1.0 : 0.0;
      for (let k = 0; k < n; k++) acc += B[i][k] * B[j][k];
      return acc;
    }),
  );
  const g = Array.from({ length: n }, () => 2 * gaussian(next));
  const zf = Array.from({ length: n }, () => gaussian(next));

  const mat = (rows: number) => dense(rows, n, next);
  const apply = (M: number[][], x: number[]) =>
    M.map((row) => row.reduce((acc, v, j) => acc + v * x[j], 0));

  const A = m ? mat(m) : undefined;
  const b = m && A ? apply(A, zf).map((v) => -v + 0.2 + next()) : undefined;
  const L = mat(p);
  const R = mat(p);
  const sTarget = Array.from({ length: p }, () => (next() < 0.5 ? 0.3 + next() : 0));
  const tTarget = sTarget.map((s) => (s > 0 ? 0 : 0.3 + next()));
  const l = apply(L, zf).map((v, i) => sTarget[i] - v);
  const r = apply(R, zf).map((v, i) => tTarget[i] - v);

  return { Q, g, A, b, L, l, R, r, name: `corpus-${seed}` };
}

export function corpusHandles(count: number): ProblemHandle[] {
  return Array.from({ length: count }, (_, i) => new ProblemHandle(randomProblem(1000 + i)));
}
