import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import {
  BadMagic,
  FormatError,
  IoError,
  loadPack,
  packFromBytes,
  packToBytes,
  savePack,
  TokpressError,
  UnsupportedVersion,
} from "../src/index.js";
import { buildPack, mulberry32, runPython, tempDir } from "./helpers.js";

describe("pack codec", () => {
  it("round-trips random packs byte-identically", () => {
    for (let seed = 0; seed < 50; seed++) {
      const first = packToBytes(buildPack(seed));
      const second = packToBytes(packFromBytes(first));
      expect(second.equals(first), `seed ${seed}`).toBe(true);
    }
  });

  it("reads back the exact values and provenance that went in", () => {
    const pack = buildPack(7);
    const loaded = packFromBytes(packToBytes(pack));
    expect(loaded.header).toMatchObject({
      sampled_count: pack.header.sampled_count,
      thumbnail_count: pack.header.thumbnail_count,
      total_count: pack.header.total_count,
      dim: pack.header.dim,
      ordering: pack.header.ordering,
      source_label: pack.header.source_label,
    });
    expect(Array.from(loaded.sampled.values)).toEqual(Array.from(pack.sampled.values));
    loaded.thumbnails.forEach((t, i) => {
      expect(Array.from(t.values)).toEqual(Array.from(pack.thumbnails[i].values));
    });
    if (pack.header.provenance_included) {
      expect(Array.from(loaded.sampled.provenance!))
        .toEqual(Array.from(pack.sampled.provenance!));
    } else {
      expect(loaded.sampled.provenance).toBeNull();
    }
  });

  it("rejects a wrong magic with BadMagic", () => {
    const blob = packToBytes(buildPack(1));
    blob[0] = "X".charCodeAt(0);
    expect(() => packFromBytes(blob)).toThrow(BadMagic);
  });

  it("rejects an unknown version", () => {
    const blob = packToBytes(buildPack(1));
    blob.writeUInt32LE(2, 4);
    expect(() => packFromBytes(blob)).toThrow(UnsupportedVersion);
  });

  it("rejects truncation and trailing garbage", () => {
    const blob = packToBytes(buildPack(2));
    expect(() => packFromBytes(blob.subarray(0, blob.length - 1))).toThrow(FormatError);
    expect(() => packFromBytes(blob.subarray(0, 8))).toThrow(FormatError);
    expect(() => packFromBytes(Buffer.concat([blob, Buffer.from([0])])))
      .toThrow(FormatError);
  });

  it("rejects random single-byte header corruption with named errors", () => {
    const blob = packToBytes(buildPack(3));
    const headerEnd = 12 + blob.readUInt32LE(8);
    const rand = mulberry32(99);
    for (let trial = 0; trial < 300; trial++) {
      const pos = Math.floor(rand() * headerEnd);
      const flip = 1 + Math.floor(rand() * 255);
      const mutated = Buffer.from(blob);
      mutated[pos] = (mutated[pos] + flip) & 0xff;
      expect(() => packFromBytes(mutated), `byte ${pos}`).toThrow(TokpressError);
    }
  });

  it("reads payloads at unaligned buffer offsets via the copy path", () => {
    const pack = buildPack(4);
    const blob = packToBytes(pack);
    const shifted = Buffer.alloc(blob.length + 1);
    blob.copy(shifted, 1);
    const view = shifted.subarray(1);
    expect((view.byteOffset + 12 + view.readUInt32LE(8)) % 4).not.toBe(0);
    const loaded = packFromBytes(view);
    expect(Array.from(loaded.sampled.values)).toEqual(Array.from(pack.sampled.values));
  });

  it("save/load round-trips through the filesystem", () => {
    const dir = tempDir("io");
    const file = path.join(dir, "pack.tstk");
    const pack = buildPack(5);
    const written = savePack(pack, file);
    expect(fs.statSync(file).size).toBe(written);
    expect(fs.readdirSync(dir)).toEqual(["pack.tstk"]);
    const loaded = loadPack(file);
    expect(packToBytes(loaded).equals(packToBytes(pack))).toBe(true);
  });

  it("write failure leaves no partial file", () => {
    const missing = path.join(tempDir("gone"), "nope", "pack.tstk");
    expect(() => savePack(buildPack(6), missing)).toThrow(IoError);
    expect(fs.existsSync(path.dirname(missing))).toBe(false);
  });

  it("missing file raises IoError", () => {
    expect(() => loadPack("/does/not/exist.tstk")).toThrow(IoError);
  });

  it("packs written here parse in the reference reader", () => {
    const dir = tempDir("xlang");
    const file = path.join(dir, "ts-made.tstk");
    const pack = buildPack(8);
    savePack(pack, file);
    const probe = runPython(`
from tokpress import read_pack
pack = read_pack(${JSON.stringify(file)})
print(pack.sampled.num_tokens, pack.thumbnail_tokens, pack.total_tokens, pack.dim)
`);
    expect(probe.status, probe.stderr).toBe(0);
    expect(probe.stdout.trim()).toBe(
      `${pack.header.sampled_count} ${pack.header.thumbnail_count} ` +
      `${pack.header.total_count} ${pack.header.dim}`);
  });
});
