import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import type { BoundPack, PackHeader } from "../src/packio.js";

/** Deterministic 32-bit RNG so every test input is seed-reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function tempDir(label: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), `tokpress-${label}-`));
}

/** Binary P6 PPM: the simplest frame format the CLI ingests. */
export function writePpm(file: string, width: number, height: number,
                         rand: () => number): void {
  const header = Buffer.from(`P6\n${width} ${height}\n255\n`, "ascii");
  const pixels = Buffer.alloc(width * height * 3);
  for (let i = 0; i < pixels.length; i++) {
    pixels[i] = Math.floor(rand() * 256);
  }
  fs.writeFileSync(file, Buffer.concat([header, pixels]));
}

export function makeFrameDir(n: number, width: number, height: number,
                             seed: number): string {
  const dir = tempDir("frames");
  const rand = mulberry32(seed);
  for (let i = 0; i < n; i++) {
    writePpm(path.join(dir, `frame_${String(i).padStart(4, "0")}.ppm`),
      width, height, rand);
  }
  return dir;
}

export function runPython(code: string): { status: number; stdout: string; stderr: string } {
  const proc = spawnSync("python3", ["-c", code], { encoding: "utf-8" });
  return { status: proc.status ?? -1, stdout: proc.stdout, stderr: proc.stderr };
}

/** A consistent random pack built TS-side, for codec-only tests. */
export function buildPack(seed: number): BoundPack {
  const rand = mulberry32(seed);
  const int = (lo: number, hi: number) => lo + Math.floor(rand() * (hi - lo + 1));
  const dim = int(1, 8);
  const nThumbnails = int(0, 3);
  const v = 4;
  const sampledCount = int(1, 40);
  const thumbCounts = Array.from({ length: nThumbnails }, () => v);
  const thumbnailCount = thumbCounts.reduce((a, b) => a + b, 0);
  const provenance = rand() < 0.5;
  const ordering = rand() < 0.5 ? "sampling_first" as const : "thumbnail_first" as const;

  const tensor = (count: number) => {
    const values = new Float32Array(count * dim);
    for (let i = 0; i < values.length; i++) values[i] = Math.fround(rand());
    let prov: Uint32Array | null = null;
    if (provenance) {
      prov = new Uint32Array(count * 3);
      for (let i = 0; i < prov.length; i++) prov[i] = int(0, 98);
    }
    return { count, dim, values, provenance: prov };
  };

  const header: PackHeader = {
    strategy: { kind: "ts", n_thumb: 2, n_thumbnails: nThumbnails,
                budget: sampledCount + thumbnailCount },
    ordering,
    n_frames: int(1, 30),
    n_thumb_frames: 2,
    n_thumbnails: nThumbnails,
    tokens_per_image: v,
    dim,
    sampled_count: sampledCount,
    thumbnail_count: thumbnailCount,
    total_count: sampledCount + thumbnailCount,
    provenance_included: provenance,
    source_label: ["", "clip-042", "video/a.mp4"][int(0, 2)],
    encoder_resolution: 28,
    patch_size: 14,
    thumb_layout: [2, 1],
    thumb_counts: thumbCounts,
  };
  return {
    header,
    sampled: tensor(sampledCount),
    thumbnails: thumbCounts.map((c) => tensor(c)),
  };
}
