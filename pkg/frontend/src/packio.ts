/** Byte-exact codec for .tstk token packs.
 *
 * Layout: "TSTK" | version u32 LE | header_length u32 LE | canonical JSON
 * header (space-padded so the payload starts 4-byte aligned) | token values
 * as little-endian float32 in pack order | optional provenance block (three
 * u32 per token).
 *
 * The canonical form matches the Python writer bit for bit: keys sorted
 * recursively, no whitespace, non-ASCII characters escaped as \uXXXX, and a
 * crc32 field computed over the serialization of the other fields. On read
 * the stored text must re-serialize to itself (plus 0-3 trailing spaces),
 * which together with the checksum rejects any single corrupted header byte.
 */

import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { crc32 } from "node:zlib";

import {
  BadMagic,
  FormatError,
  IoError,
  UnsupportedVersion,
} from "./errors.js";

export const MAGIC = "TSTK";
export const VERSION = 1;

const HEADER_KEYS = [
  "strategy", "ordering", "n_frames", "n_thumb_frames", "n_thumbnails",
  "tokens_per_image", "dim", "sampled_count", "thumbnail_count",
  "total_count", "provenance_included", "source_label",
  "encoder_resolution", "patch_size", "thumb_layout", "thumb_counts",
  "crc32",
] as const;

export type Ordering = "sampling_first" | "thumbnail_first";

export type StrategyRecord =
  | { kind: "concat" }
  | { kind: "grid" }
  | { kind: "pool"; mode: "avg" | "max"; pool: "seq1d" | "spatial2d";
      kernel: number; stride: number }
  | { kind: "grids"; frames_per_grid: number }
  | { kind: "sample"; target: number }
  | { kind: "ts"; n_thumb: number; n_thumbnails: number; budget: number };

export interface PackHeader {
  strategy: StrategyRecord;
  ordering: Ordering;
  n_frames: number;
  n_thumb_frames: number;
  n_thumbnails: number;
  tokens_per_image: number;
  dim: number;
  sampled_count: number;
  thumbnail_count: number;
  total_count: number;
  provenance_included: boolean;
  source_label: string;
  encoder_resolution: number;
  patch_size: number;
  thumb_layout: [number, number];
  thumb_counts: number[];
  /** Present after a read; recomputed on every write. */
  crc32?: number;
}

/** One tensor as flat buffer views. Views are read-only by contract:
 * they may alias the file buffer, so treat them as immutable. */
export interface TokenView {
  count: number;
  dim: number;
  /** count*dim float32 values, row-major. */
  values: Float32Array;
  /** count*3 u32 (frame, patch row, patch col), or null. */
  provenance: Uint32Array | null;
}

export interface BoundPack {
  header: PackHeader;
  sampled: TokenView;
  thumbnails: TokenView[];
}

// --- canonical JSON ------------------------------------------------------

function escapeAscii(json: string): string {
  // eslint-disable-next-line no-control-regex
  return json.replace(/[-￿]/g,
    (ch) => "\\u" + ch.charCodeAt(0).toString(16).padStart(4, "0"));
}

/** Serialize exactly like Python's json.dumps(sort_keys=True,
 * separators=(",", ":"), ensure_ascii=True) for JSON-representable data. */
export function canonicalJson(value: unknown): string {
  if (value === null) return "null";
  if (typeof value === "boolean") return value ? "true" : "false";
  if (typeof value === "number") {
    if (!Number.isFinite(value)) throw new FormatError("non-finite number in header");
    return String(value);
  }
  if (typeof value === "string") return escapeAscii(JSON.stringify(value));
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  if (typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .filter(([, v]) => v !== undefined)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => escapeAscii(JSON.stringify(k)) + ":" + canonicalJson(v));
    return "{" + entries.join(",") + "}";
  }
  throw new FormatError(`cannot serialize ${typeof value} in header`);
}

function headerWithCrc(header: Record<string, unknown>): Record<string, unknown> {
  const rest = { ...header };
  delete rest.crc32;
  return { ...rest, crc32: crc32(Buffer.from(canonicalJson(rest), "utf-8")) };
}

// --- writing --------------------------------------------------------------

function requireInt(value: number, what: string): number {
  if (!Number.isSafeInteger(value) || value < 0) {
    throw new FormatError(`${what} must be a non-negative integer`);
  }
  return value;
}

function tensorsInOrder(pack: BoundPack): TokenView[] {
  return pack.header.ordering === "sampling_first"
    ? [pack.sampled, ...pack.thumbnails]
    : [...pack.thumbnails, pack.sampled];
}

function leBytes(view: Float32Array | Uint32Array): Buffer {
  if (os.endianness() === "LE") {
    return Buffer.from(view.buffer, view.byteOffset, view.byteLength);
  }
  const out = Buffer.alloc(view.byteLength);
  const dv = new DataView(out.buffer, out.byteOffset, out.byteLength);
  if (view instanceof Float32Array) {
    view.forEach((v, i) => dv.setFloat32(i * 4, v, true));
  } else {
    view.forEach((v, i) => dv.setUint32(i * 4, v, true));
  }
  return out;
}

export function packToBytes(pack: BoundPack): Buffer {
  const h = pack.header;
  const dim = requireInt(h.dim, "dim");
  const tensors = tensorsInOrder(pack);
  for (const t of tensors) {
    if (t.values.length !== t.count * dim) {
      throw new FormatError(
        `tensor has ${t.values.length} values, expected ${t.count * dim}`);
    }
    if (h.provenance_included) {
      if (!t.provenance || t.provenance.length !== t.count * 3) {
        throw new FormatError("provenance_included but a tensor lacks it");
      }
    }
  }
  if (pack.sampled.count !== h.sampled_count ||
      pack.thumbnails.length !== h.n_thumbnails ||
      pack.thumbnails.some((t, i) => t.count !== h.thumb_counts[i]) ||
      h.sampled_count + h.thumbnail_count !== h.total_count) {
    throw new FormatError("header counts disagree with tensor views");
  }

  const bare: Record<string, unknown> = {
    strategy: h.strategy,
    ordering: h.ordering,
    n_frames: h.n_frames,
    n_thumb_frames: h.n_thumb_frames,
    n_thumbnails: h.n_thumbnails,
    tokens_per_image: h.tokens_per_image,
    encoder_resolution: h.encoder_resolution,
    patch_size: h.patch_size,
    thumb_layout: h.thumb_layout,
    dim: h.dim,
    sampled_count: h.sampled_count,
    thumbnail_count: h.thumbnail_count,
    thumb_counts: h.thumb_counts,
    total_count: h.total_count,
    provenance_included: h.provenance_included,
    source_label: h.source_label,
  };
  const canonical = Buffer.from(canonicalJson(headerWithCrc(bare)), "utf-8");
  const pad = (4 - ((canonical.length + 12) % 4)) % 4;

  const fixed = Buffer.alloc(12);
  fixed.write(MAGIC, 0, "ascii");
  fixed.writeUInt32LE(VERSION, 4);
  fixed.writeUInt32LE(canonical.length + pad, 8);

  const parts: Buffer[] = [fixed, canonical, Buffer.alloc(pad, 0x20)];
  for (const t of tensors) parts.push(leBytes(t.values));
  if (h.provenance_included) {
    for (const t of tensors) parts.push(leBytes(t.provenance as Uint32Array));
  }
  return Buffer.concat(parts);
}

// --- reading --------------------------------------------------------------

function check(cond: boolean, message: string): asserts cond {
  if (!cond) throw new FormatError(message);
}

function getCount(header: Record<string, unknown>, key: string, minimum = 0): number {
  check(key in header, `header missing '${key}'`);
  const value = header[key];
  check(typeof value === "number" && Number.isSafeInteger(value),
    `header '${key}' must be an integer`);
  check(value >= minimum, `header '${key}' must be >= ${minimum}`);
  return value;
}

function parseStrategy(data: unknown): StrategyRecord {
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new FormatError("strategy record must be an object");
  }
  const rec = data as Record<string, unknown>;
  const want = (key: string): number => {
    const v = rec[key];
    if (typeof v !== "number" || !Number.isSafeInteger(v)) {
      throw new FormatError(`strategy field '${key}' must be an integer`);
    }
    return v;
  };
  switch (rec.kind) {
    case "concat":
    case "grid":
      return { kind: rec.kind };
    case "pool": {
      const mode = rec.mode;
      const pool = rec.pool;
      if ((mode !== "avg" && mode !== "max") ||
          (pool !== "seq1d" && pool !== "spatial2d")) {
        throw new FormatError("bad pool strategy record");
      }
      return { kind: "pool", mode, pool, kernel: want("kernel"), stride: want("stride") };
    }
    case "grids":
      return { kind: "grids", frames_per_grid: want("frames_per_grid") };
    case "sample":
      return { kind: "sample", target: want("target") };
    case "ts":
      return { kind: "ts", n_thumb: want("n_thumb"),
               n_thumbnails: want("n_thumbnails"), budget: want("budget") };
    default:
      throw new FormatError(`unknown strategy kind ${JSON.stringify(rec.kind)}`);
  }
}

function f32View(buf: Buffer, start: number, length: number): Float32Array {
  // zero-copy when the absolute offset is 4-byte aligned, else one copy
  const absolute = buf.byteOffset + start;
  if (absolute % 4 === 0 && os.endianness() === "LE") {
    return new Float32Array(buf.buffer, absolute, length);
  }
  const copy = Buffer.alloc(length * 4);
  buf.copy(copy, 0, start, start + length * 4);
  if (os.endianness() === "BE") copy.swap32();
  return new Float32Array(copy.buffer, copy.byteOffset, length);
}

function u32View(buf: Buffer, start: number, length: number): Uint32Array {
  const absolute = buf.byteOffset + start;
  if (absolute % 4 === 0 && os.endianness() === "LE") {
    return new Uint32Array(buf.buffer, absolute, length);
  }
  const copy = Buffer.alloc(length * 4);
  buf.copy(copy, 0, start, start + length * 4);
  if (os.endianness() === "BE") copy.swap32();
  return new Uint32Array(copy.buffer, copy.byteOffset, length);
}

export function packFromBytes(blob: Buffer): BoundPack {
  check(blob.length >= 12, `file too short (${blob.length} bytes)`);
  if (blob.toString("ascii", 0, 4) !== MAGIC) {
    throw new BadMagic(`bad magic ${JSON.stringify(blob.toString("latin1", 0, 4))}`);
  }
  const version = blob.readUInt32LE(4);
  if (version !== VERSION) {
    throw new UnsupportedVersion(`container version ${version}, expected ${VERSION}`);
  }
  const headerLen = blob.readUInt32LE(8);
  check(12 + headerLen <= blob.length, "header length exceeds file size");
  const rawHeader = blob.subarray(12, 12 + headerLen);

  let parsed: unknown;
  try {
    parsed = JSON.parse(new TextDecoder("utf-8", { fatal: true }).decode(rawHeader));
  } catch (err) {
    throw new FormatError(`header is not valid JSON: ${err}`);
  }
  check(typeof parsed === "object" && parsed !== null && !Array.isArray(parsed),
    "header must be a JSON object");
  const header = parsed as Record<string, unknown>;
  check(HEADER_KEYS.every((k) => k in header), "header is missing schema keys");

  const canonical = Buffer.from(canonicalJson(header), "utf-8");
  const pad = headerLen - canonical.length;
  check(pad >= 0 && pad <= 3, "header padding out of range");
  check(rawHeader.equals(Buffer.concat([canonical, Buffer.alloc(pad, 0x20)])),
    "header is not canonical");
  check((12 + headerLen) % 4 === 0, "payload is not aligned");

  const storedCrc = header.crc32;
  check(typeof storedCrc === "number" && Number.isSafeInteger(storedCrc),
    "crc32 must be an integer");
  const rest = { ...header };
  delete rest.crc32;
  check(crc32(Buffer.from(canonicalJson(rest), "utf-8")) === storedCrc,
    "header checksum mismatch");

  const dim = getCount(header, "dim", 1);
  const sampledCount = getCount(header, "sampled_count");
  const thumbnailCount = getCount(header, "thumbnail_count");
  const totalCount = getCount(header, "total_count");
  const nThumbnails = getCount(header, "n_thumbnails");
  check(sampledCount + thumbnailCount === totalCount,
    "total_count != sampled_count + thumbnail_count");
  const thumbCounts = header.thumb_counts;
  check(Array.isArray(thumbCounts) &&
    thumbCounts.every((c) => typeof c === "number" && Number.isSafeInteger(c) && c >= 0),
    "thumb_counts must be a list of non-negative integers");
  check(thumbCounts.length === nThumbnails, "thumb_counts length != n_thumbnails");
  check(thumbCounts.reduce((a: number, b: number) => a + b, 0) === thumbnailCount,
    "thumb_counts sum != thumbnail_count");
  const provIncluded = header.provenance_included;
  check(typeof provIncluded === "boolean", "provenance_included must be a boolean");
  check(typeof header.source_label === "string", "source_label must be a string");

  const valuesBytes = totalCount * dim * 4;
  const provBytes = provIncluded ? totalCount * 12 : 0;
  const payloadStart = 12 + headerLen;
  check(blob.length - payloadStart === valuesBytes + provBytes,
    `payload is ${blob.length - payloadStart} bytes, header implies ` +
    `${valuesBytes + provBytes}`);

  const ordering = header.ordering;
  if (ordering !== "sampling_first" && ordering !== "thumbnail_first") {
    throw new FormatError(`unknown ordering ${JSON.stringify(ordering)}`);
  }
  const strategy = parseStrategy(header.strategy);
  const layout = header.thumb_layout;
  check(Array.isArray(layout) && layout.length === 2 &&
    layout.every((x) => typeof x === "number" && Number.isSafeInteger(x) && x >= 1),
    "thumb_layout must be [cols, rows]");

  const countsInOrder = ordering === "sampling_first"
    ? [sampledCount, ...thumbCounts]
    : [...thumbCounts, sampledCount];
  const views: TokenView[] = [];
  let row = 0;
  for (const count of countsInOrder) {
    views.push({
      count,
      dim,
      values: f32View(blob, payloadStart + row * dim * 4, count * dim),
      provenance: provIncluded
        ? u32View(blob, payloadStart + valuesBytes + row * 12, count * 3)
        : null,
    });
    row += count;
  }
  const sampled = ordering === "sampling_first" ? views[0] : views[views.length - 1];
  const thumbnails = ordering === "sampling_first" ? views.slice(1) : views.slice(0, -1);

  const typedHeader: PackHeader = {
    strategy,
    ordering,
    n_frames: getCount(header, "n_frames"),
    n_thumb_frames: getCount(header, "n_thumb_frames"),
    n_thumbnails: nThumbnails,
    tokens_per_image: getCount(header, "tokens_per_image"),
    dim,
    sampled_count: sampledCount,
    thumbnail_count: thumbnailCount,
    total_count: totalCount,
    provenance_included: provIncluded,
    source_label: header.source_label as string,
    encoder_resolution: getCount(header, "encoder_resolution", 1),
    patch_size: getCount(header, "patch_size", 1),
    thumb_layout: [layout[0], layout[1]],
    thumb_counts: thumbCounts.slice(),
    crc32: storedCrc,
  };
  return { header: typedHeader, sampled, thumbnails };
}

// --- files ----------------------------------------------------------------

export function loadPack(source: string): BoundPack {
  let blob: Buffer;
  try {
    blob = fs.readFileSync(source);
  } catch (err) {
    throw new IoError(`cannot read ${source}: ${err}`);
  }
  return packFromBytes(blob);
}

/** Write atomically (temp sibling, fsync, rename); returns bytes written. */
export function savePack(pack: BoundPack, destination: string): number {
  const blob = packToBytes(pack);
  const tmp = path.join(path.dirname(destination),
    path.basename(destination) + ".tmp");
  try {
    const fd = fs.openSync(tmp, "w");
    try {
      fs.writeSync(fd, blob);
      fs.fsyncSync(fd);
    } finally {
      fs.closeSync(fd);
    }
    fs.renameSync(tmp, destination);
  } catch (err) {
    try {
      fs.rmSync(tmp, { force: true });
    } catch {
      // already gone
    }
    throw new IoError(`cannot write ${destination}: ${err}`);
  }
  return blob.length;
}
