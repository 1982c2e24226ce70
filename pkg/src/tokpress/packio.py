"""Binary container for token packs: magic, version, JSON header, payload.

Layout: b"TSTK" | version u32 LE | header_length u32 LE | header JSON
(canonical form, space-padded so the payload starts 4-byte aligned) |
token values as little-endian float32 in pack order | optional provenance
block (three u32 per token, same order).

The header is stored in canonical JSON (sorted keys, no whitespace) and
carries a crc32 over its other fields. The reader re-serializes what it
parsed and demands byte equality with the stored text, then re-checks the
crc. Any single corrupted header byte therefore fails loudly: the JSON
breaks, the canonical echo differs, a length or alignment check trips, or
the checksum mismatches (crc32 catches every error burst shorter than 33
bits).
"""

from __future__ import annotations

import json
import os
import zlib
from pathlib import Path
from typing import Union

import numpy as np

from .errors import BadMagic, FormatError, IoError, UnsupportedVersion
from .model import (
    CompressionConfig,
    Ordering,
    ThumbnailLayout,
    TokenPack,
    TokenTensor,
    strategy_from_json,
    strategy_to_json,
)

MAGIC = b"TSTK"
VERSION = 1

_HEADER_KEYS = frozenset({
    "strategy", "ordering", "n_frames", "n_thumb_frames", "n_thumbnails",
    "tokens_per_image", "dim", "sampled_count", "thumbnail_count",
    "total_count", "provenance_included", "source_label",
    "encoder_resolution", "patch_size", "thumb_layout", "thumb_counts",
    "crc32",
})


def _header_dict(pack: TokenPack) -> dict:
    cfg = pack.config
    tensors = pack.tensors_in_order()
    return {
        "strategy": strategy_to_json(cfg.strategy),
        "ordering": pack.ordering.value,
        "n_frames": cfg.n_frames,
        "n_thumb_frames": cfg.n_thumb_frames,
        "n_thumbnails": cfg.n_thumbnails,
        "tokens_per_image": cfg.tokens_per_image,
        "encoder_resolution": cfg.encoder_resolution,
        "patch_size": cfg.patch_size,
        "thumb_layout": [cfg.thumb_layout.cols, cfg.thumb_layout.rows],
        "dim": pack.dim,
        "sampled_count": pack.sampled.num_tokens,
        "thumbnail_count": pack.thumbnail_tokens,
        "thumb_counts": [t.num_tokens for t in pack.thumbnails],
        "total_count": pack.total_tokens,
        "provenance_included": all(t.provenance is not None for t in tensors),
        "source_label": pack.source_label,
    }


def _canonical(header: dict) -> bytes:
    return json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _with_crc(header: dict) -> dict:
    out = dict(header)
    out["crc32"] = zlib.crc32(_canonical(header))
    return out


def header_bytes(pack: TokenPack) -> bytes:
    """Canonical header JSON, space-padded to 4-byte payload alignment."""
    raw = _canonical(_with_crc(_header_dict(pack)))
    pad = (-(len(raw) + 12)) % 4
    return raw + b" " * pad


def pack_to_bytes(pack: TokenPack) -> bytes:
    """Serialize a pack to the container byte layout."""
    header = header_bytes(pack)
    parts = [MAGIC,
             int(VERSION).to_bytes(4, "little"),
             len(header).to_bytes(4, "little"),
             header]
    tensors = pack.tensors_in_order()
    for t in tensors:
        parts.append(np.ascontiguousarray(t.values, dtype="<f4").tobytes())
    if all(t.provenance is not None for t in tensors):
        for t in tensors:
            parts.append(np.ascontiguousarray(t.provenance, dtype="<u4").tobytes())
    return b"".join(parts)


def write_pack(pack: TokenPack, destination: Union[str, Path]) -> int:
    """Write the pack to a file; returns bytes written. Never leaves a
    partial file: data goes to a temp sibling, renamed on success."""
    blob = pack_to_bytes(pack)
    dest = Path(destination)
    tmp = dest.with_name(dest.name + ".tmp")
    try:
        with open(tmp, "wb") as fh:
            fh.write(blob)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, dest)
    except OSError as exc:
        try:
            tmp.unlink(missing_ok=True)
        except OSError:
            pass
        raise IoError(f"cannot write {dest}: {exc}") from exc
    return len(blob)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise FormatError(message)


def _get_count(header: dict, key: str, minimum: int = 0) -> int:
    _require(key in header, f"header missing {key!r}")
    value = header[key]
    _require(isinstance(value, int) and not isinstance(value, bool),
             f"header {key!r} must be an integer")
    _require(value >= minimum, f"header {key!r} must be >= {minimum}")
    return value


def pack_from_bytes(blob: bytes) -> TokenPack:
    """Parse and strictly validate the container byte layout."""
    _require(len(blob) >= 12, f"file too short ({len(blob)} bytes)")
    if blob[:4] != MAGIC:
        raise BadMagic(f"bad magic {blob[:4]!r}")
    version = int.from_bytes(blob[4:8], "little")
    if version != VERSION:
        raise UnsupportedVersion(f"container version {version}, expected {VERSION}")
    header_len = int.from_bytes(blob[8:12], "little")
    _require(12 + header_len <= len(blob), "header length exceeds file size")
    raw_header = blob[12:12 + header_len]
    try:
        header = json.loads(raw_header.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"header is not valid JSON: {exc}") from exc
    _require(isinstance(header, dict), "header must be a JSON object")
    # Unknown keys are tolerated (newer writers may add fields); every
    # schema key must be present.
    _require(_HEADER_KEYS <= set(header), "header is missing schema keys")

    # Canonical echo: the stored text must be exactly the canonical
    # serialization plus 0-3 trailing spaces. This rejects every header
    # byte flip that changes the encoding without changing the parse
    # (whitespace tricks, number reformatting, altered padding).
    canonical = _canonical(header)
    pad = header_len - len(canonical)
    _require(0 <= pad <= 3, "header padding out of range")
    _require(raw_header == canonical + b" " * pad, "header is not canonical")
    _require((12 + header_len) % 4 == 0, "payload is not aligned")

    # Checksum: crc32 over the canonical header without the crc field.
    stored_crc = header["crc32"]
    _require(isinstance(stored_crc, int) and not isinstance(stored_crc, bool),
             "crc32 must be an integer")
    rest = {k: v for k, v in header.items() if k != "crc32"}
    _require(zlib.crc32(_canonical(rest)) == stored_crc,
             "header checksum mismatch")

    dim = _get_count(header, "dim", minimum=1)
    sampled_count = _get_count(header, "sampled_count")
    thumbnail_count = _get_count(header, "thumbnail_count")
    total_count = _get_count(header, "total_count")
    n_thumbnails = _get_count(header, "n_thumbnails")
    _require(sampled_count + thumbnail_count == total_count,
             "total_count != sampled_count + thumbnail_count")
    thumb_counts = header["thumb_counts"]
    _require(isinstance(thumb_counts, list) and
             all(isinstance(c, int) and not isinstance(c, bool) and c >= 0
                 for c in thumb_counts),
             "thumb_counts must be a list of non-negative integers")
    _require(len(thumb_counts) == n_thumbnails,
             "thumb_counts length != n_thumbnails")
    _require(sum(thumb_counts) == thumbnail_count,
             "thumb_counts sum != thumbnail_count")
    prov_included = header["provenance_included"]
    _require(isinstance(prov_included, bool),
             "provenance_included must be a boolean")
    _require(isinstance(header["source_label"], str),
             "source_label must be a string")

    values_bytes = total_count * dim * 4
    prov_bytes = total_count * 12 if prov_included else 0
    payload = blob[12 + header_len:]
    _require(len(payload) == values_bytes + prov_bytes,
             f"payload is {len(payload)} bytes, header implies "
             f"{values_bytes + prov_bytes}")

    values = np.frombuffer(payload[:values_bytes], dtype="<f4").reshape(total_count, dim)
    prov = None
    if prov_included:
        prov = np.frombuffer(payload[values_bytes:], dtype="<u4").reshape(total_count, 3)

    ordering_raw = header["ordering"]
    try:
        ordering = Ordering(ordering_raw)
    except ValueError as exc:
        raise FormatError(f"unknown ordering {ordering_raw!r}") from exc
    try:
        strategy = strategy_from_json(header["strategy"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad strategy record: {exc}") from exc
    layout_raw = header["thumb_layout"]
    _require(isinstance(layout_raw, list) and len(layout_raw) == 2 and
             all(isinstance(x, int) and not isinstance(x, bool) and x >= 1
                 for x in layout_raw),
             "thumb_layout must be [cols, rows]")

    config = CompressionConfig(
        n_frames=_get_count(header, "n_frames"),
        n_thumb_frames=_get_count(header, "n_thumb_frames"),
        n_thumbnails=n_thumbnails,
        token_budget=total_count if total_count else 1,
        encoder_resolution=_get_count(header, "encoder_resolution", minimum=1),
        patch_size=_get_count(header, "patch_size", minimum=1),
        tokens_per_image=_get_count(header, "tokens_per_image"),
        thumb_layout=ThumbnailLayout(cols=layout_raw[0], rows=layout_raw[1]),
        ordering=ordering,
        strategy=strategy,
    )

    counts_in_order = ([sampled_count] + thumb_counts
                       if ordering is Ordering.SAMPLING_FIRST
                       else thumb_counts + [sampled_count])
    tensors = []
    offset = 0
    for count in counts_in_order:
        sl = slice(offset, offset + count)
        tensors.append(TokenTensor(values=values[sl],
                                   provenance=None if prov is None else prov[sl]))
        offset += count
    if ordering is Ordering.SAMPLING_FIRST:
        sampled, thumbnails = tensors[0], tensors[1:]
    else:
        sampled, thumbnails = tensors[-1], tensors[:-1]
    return TokenPack(sampled=sampled, thumbnails=tuple(thumbnails),
                     ordering=ordering, config=config,
                     source_label=header["source_label"])


def read_pack(source: Union[str, Path]) -> TokenPack:
    """Read and validate a pack file."""
    try:
        blob = Path(source).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {source}: {exc}") from exc
    return pack_from_bytes(blob)


def manifest_json(pack: TokenPack) -> str:
    """The header as indented JSON for human inspection."""
    return json.dumps(_with_crc(_header_dict(pack)), sort_keys=True, indent=2) + "\n"


def write_manifest(pack: TokenPack, destination: Union[str, Path]) -> None:
    """Write the sibling manifest that mirrors the pack header."""
    try:
        Path(destination).write_text(manifest_json(pack), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {destination}: {exc}") from exc
