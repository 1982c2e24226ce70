/** Typed wrapper around the tokpress CLI.
 *
 * The pipeline itself stays in the Python package; this module builds the
 * argv, runs it, maps "Name: message" failures to the error classes, and
 * hands back the written pack as zero-copy buffer views.
 */

import { spawnSync } from "node:child_process";

import { errorFromCli, IoError, TokpressError, UsageError } from "./errors.js";
import { loadPack } from "./packio.js";
import type { BoundPack, Ordering } from "./packio.js";

export type StrategyName = "concat" | "pool" | "grid" | "grids" | "sample" | "ts";

export interface CompressOptions {
  /** Directory of PNG/PPM frames, or a .tstk feature file. */
  input: string;
  /** Destination .tstk path. */
  out: string;
  strategy: StrategyName;
  frames?: number;
  thumbFrames?: number;
  thumbnails?: number;
  budget?: number;
  resolution?: number;
  patch?: number;
  dim?: number;
  poolMode?: "avg" | "max";
  poolKind?: "seq1d" | "spatial2d";
  kernel?: number;
  stride?: number;
  ordering?: Ordering;
  label?: string;
  threads?: number;
  manifest?: boolean;
  /** key=value defaults file, same precedence as the CLI. */
  configFile?: string;
  /** Interpreter used to run the pipeline (default "python3"). */
  python?: string;
}

export function cliArgs(options: CompressOptions): string[] {
  const args = ["compress", "--input", options.input,
    "--strategy", options.strategy, "--out", options.out];
  const flag = (name: string, value: number | string | undefined) => {
    if (value !== undefined) args.push(name, String(value));
  };
  flag("--frames", options.frames);
  flag("--thumb-frames", options.thumbFrames);
  flag("--thumbnails", options.thumbnails);
  flag("--budget", options.budget);
  flag("--resolution", options.resolution);
  flag("--patch", options.patch);
  flag("--dim", options.dim);
  flag("--pool-mode", options.poolMode);
  flag("--pool-kind", options.poolKind);
  flag("--kernel", options.kernel);
  flag("--stride", options.stride);
  flag("--ordering", options.ordering);
  flag("--label", options.label);
  flag("--threads", options.threads);
  flag("--config", options.configFile);
  if (options.manifest) args.push("--manifest");
  return args;
}

export function runCli(args: string[], python = "python3"): {
  status: number; stdout: string; stderr: string;
} {
  const proc = spawnSync(python, ["-m", "tokpress.cli", ...args],
    { encoding: "utf-8" });
  if (proc.error) {
    throw new IoError(`cannot run ${python}: ${proc.error.message}`);
  }
  return { status: proc.status ?? -1, stdout: proc.stdout, stderr: proc.stderr };
}

/** Run the pipeline and return the resulting pack. Throws the named
 * pipeline error on exit 1 and UsageError on exit 2. */
export function compress(options: CompressOptions): BoundPack {
  const proc = runCli(cliArgs(options), options.python);
  if (proc.status === 1) throw errorFromCli(proc.stderr);
  if (proc.status === 2) throw new UsageError(proc.stderr.trim());
  if (proc.status !== 0) {
    throw new TokpressError(
      `pipeline exited with ${proc.status}: ${proc.stderr.trim()}`);
  }
  return loadPack(options.out);
}
