"""Vision tower abstraction: one image in, a fixed grid of tokens out.

Two backends share the interface. The stub computes each token from patch
content (channel means weighted by 1/(1+d)), so geometry bugs show up in
token values, not just counts. The feature-file backend streams
pre-extracted tensors through the same pipeline via the pack container.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ResolutionNotDivisible, ShapeMismatch, WrongResolution
from .model import Frame, TokenTensor


@dataclass(frozen=True)
class VisionTowerSpec:
    """Encoder geometry plus backend selector.

    kind is "stub" or "file"; "file" reads pre-extracted features from
    ``path``. tokens_per_image is (resolution / patch_size) squared.
    """

    resolution: int = 336
    patch_size: int = 14
    dim: int = 64
    kind: str = "stub"
    path: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.resolution < 1 or self.patch_size < 1:
            raise ValueError("resolution and patch_size must be positive")
        if self.resolution % self.patch_size != 0:
            raise ResolutionNotDivisible(
                f"resolution {self.resolution} not divisible by patch {self.patch_size}")
        if self.kind not in ("stub", "file"):
            raise ValueError(f"unknown tower kind {self.kind!r}")

    @property
    def grid_side(self) -> int:
        return self.resolution // self.patch_size

    @property
    def tokens_per_image(self) -> int:
        return self.grid_side ** 2


def encode(spec: VisionTowerSpec, frame: Frame) -> TokenTensor:
    """Encode one resolution-sized frame into tokens_per_image tokens.

    Token p (row-major over the patch grid), dim d:
    value = mean(patch p, channel d mod 3) / 255 * (1 / (1 + d)).
    Provenance triple: (frame.source_index, patch_row, patch_col).
    """
    if spec.kind != "stub":
        raise ValueError("encode requires a stub tower; use load_features for files")
    if frame.height != spec.resolution or frame.width != spec.resolution:
        raise WrongResolution(
            f"frame is {frame.height}x{frame.width}, tower wants "
            f"{spec.resolution}x{spec.resolution}")
    g = spec.grid_side
    p = spec.patch_size
    px = frame.pixels.reshape(g, p, g, p, 3)
    means = px.mean(axis=(1, 3), dtype=np.float64) / 255.0  # (g, g, 3)
    means = means.reshape(g * g, 3)
    d = np.arange(spec.dim)
    weights = 1.0 / (1.0 + d)
    values = (means[:, d % 3] * weights).astype(np.float32)
    rows, cols = np.divmod(np.arange(g * g, dtype=np.uint32), np.uint32(g))
    prov = np.column_stack([
        np.full(g * g, frame.source_index, dtype=np.uint32), rows, cols])
    return TokenTensor(values=values, provenance=prov)


def load_features(spec: VisionTowerSpec, frame_count: int) -> list[TokenTensor]:
    """Read ``frame_count`` per-frame tensors from the spec's feature file.

    The file is a pack whose sampled tensor holds frame_count x V rows of
    dim values, in frame order. Raises ShapeMismatch when the file's
    geometry disagrees with the spec or the requested frame count.
    """
    from .packio import read_pack

    if spec.kind != "file" or spec.path is None:
        raise ValueError("load_features requires a file tower with a path")
    pack = read_pack(spec.path)
    v = spec.tokens_per_image
    total = pack.total_tokens
    if pack.thumbnail_tokens != 0:
        raise ShapeMismatch("feature file must not contain thumbnail tokens")
    if total != frame_count * v:
        raise ShapeMismatch(
            f"file holds {total} tokens, expected {frame_count} x {v}")
    if pack.dim != spec.dim:
        raise ShapeMismatch(f"file dim {pack.dim} != spec dim {spec.dim}")
    vals = pack.sampled.values
    prov = pack.sampled.provenance
    out = []
    for i in range(frame_count):
        sl = slice(i * v, (i + 1) * v)
        out.append(TokenTensor(values=vals[sl],
                               provenance=None if prov is None else prov[sl]))
    return out


def write_features(tensors: list[TokenTensor], destination,
                   resolution: int = 336, patch_size: int = 14,
                   source_label: str = "") -> int:
    """Write per-frame tensors as a feature file readable by load_features."""
    from .model import CompressionConfig, Concat, TokenPack
    from .packio import write_pack
    from .strategies import concat_tokens

    if not tensors:
        raise ValueError("need at least one tensor")
    merged = concat_tokens(tensors)
    config = CompressionConfig(
        n_frames=len(tensors), n_thumb_frames=0, n_thumbnails=0,
        token_budget=merged.num_tokens, encoder_resolution=resolution,
        patch_size=patch_size, strategy=Concat())
    pack = TokenPack(sampled=merged, thumbnails=(), config=config,
                     source_label=source_label)
    return write_pack(pack, destination)
