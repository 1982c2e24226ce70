/** Named errors mirroring the Python pipeline's error hierarchy.
 *
 * The CLI prints failures as "Name: message" on stderr with exit code 1;
 * `errorFromCli` maps that line back to the matching class so callers can
 * catch by type on either side of the language boundary.
 */

export class TokpressError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

export class InvalidCount extends TokpressError {}
export class ResolutionNotDivisible extends TokpressError {}
export class TokensPerImageMismatch extends TokpressError {}
export class OddThumbFrames extends TokpressError {}
export class ThumbFramesExceedTotal extends TokpressError {}
export class BudgetTooSmall extends TokpressError {}
export class LayoutTooSmall extends TokpressError {}
export class InvalidPooling extends TokpressError {}
export class InvalidSelection extends TokpressError {}
export class TooManyFrames extends TokpressError {}
export class NotSquareGrid extends TokpressError {}
export class NotDivisible extends TokpressError {}
export class DimMismatch extends TokpressError {}
export class WrongResolution extends TokpressError {}
export class ShapeMismatch extends TokpressError {}
export class FramesRequired extends TokpressError {}
export class IoError extends TokpressError {}
export class FormatError extends TokpressError {}
export class BadMagic extends TokpressError {}
export class UnsupportedVersion extends TokpressError {}

/** Raised when the CLI rejects the invocation itself (exit code 2). */
export class UsageError extends TokpressError {}

type ErrorCtor = new (message: string) => TokpressError;

export const errorByName: Readonly<Record<string, ErrorCtor>> = {
  InvalidCount,
  ResolutionNotDivisible,
  TokensPerImageMismatch,
  OddThumbFrames,
  ThumbFramesExceedTotal,
  BudgetTooSmall,
  LayoutTooSmall,
  InvalidPooling,
  InvalidSelection,
  TooManyFrames,
  NotSquareGrid,
  NotDivisible,
  DimMismatch,
  WrongResolution,
  ShapeMismatch,
  FramesRequired,
  IoError,
  FormatError,
  BadMagic,
  UnsupportedVersion,
};

/** Map a CLI stderr dump ("Name: message") to a typed error. */
export function errorFromCli(stderr: string): TokpressError {
  const line = stderr.trim().split("\n")[0] ?? "";
  const match = /^([A-Za-z]+): (.*)$/s.exec(line);
  if (match && match[1] in errorByName) {
    return new errorByName[match[1]](match[2]);
  }
  return new TokpressError(line || "pipeline failed without a message");
}
