export {
  BadMagic,
  BudgetTooSmall,
  DimMismatch,
  errorByName,
  errorFromCli,
  FormatError,
  FramesRequired,
  InvalidCount,
  InvalidPooling,
  InvalidSelection,
  IoError,
  LayoutTooSmall,
  NotDivisible,
  NotSquareGrid,
  OddThumbFrames,
  ResolutionNotDivisible,
  ShapeMismatch,
  ThumbFramesExceedTotal,
  TokensPerImageMismatch,
  TokpressError,
  TooManyFrames,
  UnsupportedVersion,
  UsageError,
  WrongResolution,
} from "./errors.js";
export {
  canonicalJson,
  loadPack,
  MAGIC,
  packFromBytes,
  packToBytes,
  savePack,
  VERSION,
} from "./packio.js";
export type {
  BoundPack,
  Ordering,
  PackHeader,
  StrategyRecord,
  TokenView,
} from "./packio.js";
export { cliArgs, compress, runCli } from "./compress.js";
export type { CompressOptions, StrategyName } from "./compress.js";
