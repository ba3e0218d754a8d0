/**
 * Problem construction and validation.
 *
 * The handle owns a validated problem document in the solver's wire
 * format.  Validation mirrors the core exactly (dimension consistency,
 * finiteness, symmetry of Q within 1e-12 relative, upper-triangle
 * canonicalization) so invalid data fails here, natively, with the same
 * message the core would produce.
 */

import { DimensionMismatch, NonFiniteEntry, NonSymmetricQ } from "./errors.js";
import type {
  MatrixInput,
  ProblemData,
  SparseMatrixJson,
  Triplet,
} from "./types.js";

const SYM_TOL = 1e-12;

interface Entry {
  i: number;
  j: number;
  v: number;
}

function toEntries(M: MatrixInput, rows: number, cols: number, what: string): Entry[] {
  if (M === undefined) return [];
  const out = new Map<string, Entry>();
  const add = (i: number, j: number, v: number) => {
    if (!Number.isFinite(v)) {
      throw new NonFiniteEntry(`${what} contains non-finite entries`);
    }
    if (v === 0) return;
    const key = `${i},${j}`;
    const prev = out.get(key);
    if (prev) prev.v += v;
    else out.set(key, { i, j, v });
  };
  if (Array.isArray(M)) {
    if (M.length !== rows || (rows > 0 && M.some((r) => r.length !== cols))) {
      const got = `(${M.length}, ${M[0]?.length ?? 0})`;
      throw new DimensionMismatch(`${what} has shape ${got}, expected (${rows}, ${cols})`);
    }
    M.forEach((row, i) => row.forEach((v, j) => add(i, j, v)));
  } else {
    if (M.rows !== rows || M.cols !== cols) {
      throw new DimensionMismatch(
        `${what} has shape (${M.rows}, ${M.cols}), expected (${rows}, ${cols})`,
      );
    }
    for (const [i, j, v] of M.triplets) {
      if (!Number.isInteger(i) || !Number.isInteger(j) || i < 0 || j < 0
          || i >= rows || j >= cols) {
        throw new DimensionMismatch(`${what} triplet index (${i}, ${j}) out of range`);
      }
      add(i, j, v);
    }
  }
  return [...out.values()];
}

function matrixRows(M: MatrixInput): number | undefined {
  if (M === undefined) return undefined;
  return Array.isArray(M) ? M.length : M.rows;
}

function checkVector(v: number[] | undefined, length: number, what: string): number[] {
  const arr = v ?? new Array<number>(length).fill(0);
  if (arr.length !== length) {
    throw new DimensionMismatch(`${what} has length ${arr.length}, expected ${length}`);
  }
  for (const x of arr) {
    if (!Number.isFinite(x)) {
      throw new NonFiniteEntry(`${what} contains non-finite entries`);
    }
  }
  return [...arr];
}

/** Symmetrize-and-take-upper, mirroring the core's canonicalization. */
function canonicalUpper(entries: Entry[], n: number): Entry[] {
  const strictlyLower = entries.filter((e) => e.i > e.j);
  if (strictlyLower.length === 0) {
    return entries; // already an upper triangle of an implied symmetric Q
  }
  const map = new Map<string, number>();
  let maxAbs = 0;
  for (const { i, j, v } of entries) {
    map.set(`${i},${j}`, (map.get(`${i},${j}`) ?? 0) + v);
    maxAbs = Math.max(maxAbs, Math.abs(v));
  }
  let gap = 0;
  for (const [key, v] of map) {
    const [i, j] = key.split(",").map(Number);
    const vt = map.get(`${j},${i}`) ?? 0;
    gap = Math.max(gap, Math.abs(v - vt));
  }
  const scale = Math.max(1, maxAbs);
  if (gap > SYM_TOL * scale) {
    throw new NonSymmetricQ(
      `max asymmetry ${gap.toExponential(3)} exceeds 1e-12 * ${scale.toExponential(3)}`,
    );
  }
  const upper: Entry[] = [];
  for (const [key, v] of map) {
    const [i, j] = key.split(",").map(Number);
    if (i < j) upper.push({ i, j, v: (v + (map.get(`${j},${i}`) ?? 0)) / 2 });
    else if (i === j) upper.push({ i, j, v });
  }
  void n;
  return upper;
}

function toJsonMatrix(entries: Entry[], rows: number, cols: number): SparseMatrixJson {
  const sorted = [...entries].sort((a, b) => a.j - b.j || a.i - b.i);
  const triplets = sorted.map(({ i, j, v }): Triplet => [i, j, v]);
  return { rows, cols, triplets };
}

/** Opaque handle owning one validated problem. */
export class ProblemHandle {
  readonly n: number;
  readonly m: number;
  readonly p: number;
  private doc: Record<string, unknown> | null;

  constructor(data: ProblemData) {
    const g = [...data.g];
    const n = g.length;
    const m = matrixRows(data.A) ?? data.b?.length ?? 0;
    const p = matrixRows(data.L) ?? data.l?.length ?? 0;
    const pR = matrixRows(data.R) ?? data.r?.length ?? 0;
    if (p !== pR) {
      throw new DimensionMismatch(`L/l declare ${p} pairs but R/r declare ${pR}`);
    }
    checkVector(g, n, "g");
    const q = canonicalUpper(toEntries(data.Q, n, n, "Q"), n);

    this.n = n;
    this.m = m;
    this.p = p;
    this.doc = {
      schema: "lcqp-problem/1",
      dims: { n, m, p },
      Q: toJsonMatrix(q, n, n),
      g,
      A: toJsonMatrix(toEntries(data.A, m, n, "A"), m, n),
      b: checkVector(data.b, m, "b"),
      L: toJsonMatrix(toEntries(data.L, p, n, "L"), p, n),
      l: checkVector(data.l, p, "l"),
      R: toJsonMatrix(toEntries(data.R, p, n, "R"), p, n),
      r: checkVector(data.r, p, "r"),
      ...(data.name ? { name: data.name } : {}),
    };
  }

  /** Problem file text (the solver's wire format). */
  serialize(initialGuess?: number[]): string {
    if (this.doc === null) throw new Error("handle was disposed");
    const doc = initialGuess
      ? { ...this.doc, initial_guess: checkVector(initialGuess, this.n, "z0") }
      : this.doc;
    return JSON.stringify(doc, null, 1);
  }

  /** Release the handle; further use throws. */
  dispose(): void {
    this.doc = null;
  }

  get disposed(): boolean {
    return this.doc === null;
  }
}
