/**
 * Error taxonomy mirroring the solver core, one class per core variant.
 *
 * Construction-time validation raises the first three directly; errors
 * crossing the CLI boundary arrive as `lcqp: <ClassName>: <message>` on
 * stderr and are re-hydrated by {@link mapCliError}.
 */

export class LcqpError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

export class DimensionMismatch extends LcqpError {}
export class NonSymmetricQ extends LcqpError {}
export class NonFiniteEntry extends LcqpError {}
export class SchemaError extends LcqpError {}
export class ZeroPivotError extends LcqpError {}
export class WrongInertia extends LcqpError {}
export class OracleTooLarge extends LcqpError {}

/** Raised when the CLI itself cannot run or reports a usage/I/O failure. */
export class CliError extends LcqpError {}

const BY_NAME: Record<string, new (message: string) => LcqpError> = {
  DimensionMismatch,
  NonSymmetricQ,
  NonFiniteEntry,
  SchemaError,
  ZeroPivotError,
  WrongInertia,
  OracleTooLarge,
};

/** Turn a CLI stderr line back into the matching error class. */
export function mapCliError(stderr: string): LcqpError {
  const text = stderr.trim();
  const match = text.match(/^lcqp:\s*(\w+):\s*([\s\S]*)$/);
  if (match && match[1] in BY_NAME) {
    return new BY_NAME[match[1]](match[2]);
  }
  return new CliError(text.replace(/^lcqp:\s*/, "") || "solver CLI failed");
}
