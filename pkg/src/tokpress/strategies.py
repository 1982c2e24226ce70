"""Token-compression strategies.

Every transform here is deterministic and bit-reproducible: identical
frames and config produce identical token packs regardless of thread
count. Strategies that target a token budget (sample, grids, hybrid
thumbnail-and-sampling) hit it exactly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimMismatch,
    FramesRequired,
    InvalidCount,
    InvalidSelection,
    NotDivisible,
    NotSquareGrid,
)
from .grid import compose_thumbnail, default_layout, resize_bilinear
from .model import (
    CompressionConfig,
    Concat,
    Frame,
    Grid,
    Grids,
    Pool,
    Sample,
    ThumbnailAndSampling,
    ThumbnailLayout,
    TokenPack,
    TokenTensor,
    validate_config,
)
from .sampling import select_equidistant, uniform_indices
from .tower import VisionTowerSpec, encode


def _check_same_dim(per_frame: Sequence[TokenTensor]) -> int:
    dims = {t.dim for t in per_frame}
    if len(dims) != 1:
        raise DimMismatch(f"mixed token dims {sorted(dims)}")
    return dims.pop()


def concat_tokens(per_frame: Sequence[TokenTensor]) -> TokenTensor:
    """Frame-major concatenation; provenance kept if every input has it."""
    if not per_frame:
        raise InvalidCount("need at least one tensor")
    _check_same_dim(per_frame)
    values = np.concatenate([t.values for t in per_frame], axis=0)
    prov = None
    if all(t.provenance is not None for t in per_frame):
        prov = np.concatenate([t.provenance for t in per_frame], axis=0)
    return TokenTensor(values=values, provenance=prov)


def _reduce(window: np.ndarray, mode: str) -> np.ndarray:
    if mode == "max":
        return window.max(axis=0)
    return window.mean(axis=0, dtype=np.float64).astype(np.float32)


def _pool_seq1d(values: np.ndarray, mode: str, kernel: int, stride: int) -> np.ndarray:
    # Strided windows over the token sequence; the incomplete tail window
    # is reduced over its actual length.
    out = [_reduce(values[start:start + kernel], mode)
           for start in range(0, values.shape[0], stride)]
    return np.stack(out) if out else values[:0]


def _pool_spatial2d(values: np.ndarray, side: int, mode: str, kernel: int,
                    stride: int) -> np.ndarray:
    # Tokens are laid out on the square patch grid; incomplete windows
    # at the right/bottom edges are dropped.
    dim = values.shape[1]
    grid = values.reshape(side, side, dim)
    out = [_reduce(grid[r0:r0 + kernel, c0:c0 + kernel].reshape(-1, dim), mode)
           for r0 in range(0, side - kernel + 1, stride)
           for c0 in range(0, side - kernel + 1, stride)]
    return np.stack(out) if out else values[:0]


def pool_tokens(per_frame: Sequence[TokenTensor], mode: str = "avg",
                kind: str = "spatial2d", kernel: int = 2,
                stride: int = 2) -> TokenTensor:
    """Pool each frame's tokens independently, then concatenate frame-major.

    spatial2d reduces kernel x kernel blocks of the patch grid (frame token
    count must be a perfect square); seq1d reduces strided windows of the
    flat token sequence. Pooled tokens mix patches, so provenance is
    dropped.
    """
    if not per_frame:
        raise InvalidCount("need at least one tensor")
    _check_same_dim(per_frame)
    pooled = []
    for t in per_frame:
        if kind == "spatial2d":
            side = int(np.sqrt(t.num_tokens))
            if side * side != t.num_tokens:
                raise NotSquareGrid(
                    f"{t.num_tokens} tokens do not form a square patch grid")
            pooled.append(_pool_spatial2d(t.values, side, mode, kernel, stride))
        else:
            pooled.append(_pool_seq1d(t.values, mode, kernel, stride))
    return TokenTensor(values=np.concatenate(pooled, axis=0))


def sample_tokens(all_tokens: TokenTensor, target: int) -> TokenTensor:
    """Equidistant subsequence of the token rows, bit-exact copies."""
    idx = uniform_indices(all_tokens.num_tokens, target)
    prov = all_tokens.provenance
    return TokenTensor(values=all_tokens.values[idx],
                       provenance=None if prov is None else prov[idx])


def encode_frames(frames: Sequence[Frame], tower: VisionTowerSpec,
                  threads: int = 1) -> list[TokenTensor]:
    """Resize every frame to tower resolution and encode, in frame order."""
    def one(frame: Frame) -> TokenTensor:
        px = resize_bilinear(frame.pixels, tower.resolution, tower.resolution)
        return encode(tower, Frame(pixels=px, source_index=frame.source_index))

    if threads > 1 and len(frames) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, frames))
    return [one(f) for f in frames]


def build_grids(frames: Sequence[Frame], frames_per_grid: int,
                layout: ThumbnailLayout, tower: VisionTowerSpec,
                threads: int = 1) -> TokenTensor:
    """Compose consecutive groups of frames into grid images and encode.

    Composite i carries source_index i (grid ordinal). Token counts are
    (len(frames) / frames_per_grid) x tokens_per_image.
    """
    if frames_per_grid < 1:
        raise InvalidCount(f"frames_per_grid must be >= 1, got {frames_per_grid}")
    if len(frames) % frames_per_grid != 0:
        raise NotDivisible(
            f"{len(frames)} frames not divisible into groups of {frames_per_grid}")
    groups = [frames[i:i + frames_per_grid]
              for i in range(0, len(frames), frames_per_grid)]
    composites = [
        compose_thumbnail(group, layout, tower.resolution, source_index=i)
        for i, group in enumerate(groups)]
    encoded = encode_frames(composites, tower, threads=threads)
    return concat_tokens(encoded)


def thumbnail_and_sampling(frames: Sequence[Frame], config: CompressionConfig,
                           tower: VisionTowerSpec, threads: int = 1) -> TokenPack:
    """The hybrid strategy: thumbnail grids plus budget-filling samples.

    Thumbnail pathway: n_thumb_frames x n_thumbnails equidistant frames,
    split into consecutive groups, each composed into one grid image and
    encoded. Sampled pathway: every input frame encoded, the frame-major
    token sequence sampled down to the remaining budget. Composite frames
    carry source_index n_frames + grid ordinal, so thumbnail provenance
    never collides with input frame indices.
    """
    validate_config(config)
    if len(frames) != config.n_frames:
        raise InvalidCount(
            f"got {len(frames)} frames, config.n_frames is {config.n_frames}")
    v = config.tokens_per_image
    k = config.n_thumbnails
    sampled_target = config.token_budget - k * v

    thumbnails = []
    if k > 0:
        thumb_frames = select_equidistant(frames, config.n_thumb_frames * k)
        nt = config.n_thumb_frames
        composites = [
            compose_thumbnail(thumb_frames[j * nt:(j + 1) * nt],
                              config.thumb_layout, tower.resolution,
                              source_index=config.n_frames + j)
            for j in range(k)]
        thumbnails = encode_frames(composites, tower, threads=threads)

    per_frame = encode_frames(frames, tower, threads=threads)
    all_tokens = concat_tokens(per_frame)
    if sampled_target > all_tokens.num_tokens:
        raise InvalidSelection(
            f"budget wants {sampled_target} sampled tokens, only "
            f"{all_tokens.num_tokens} available")
    sampled = sample_tokens(all_tokens, sampled_target)
    return TokenPack(sampled=sampled, thumbnails=tuple(thumbnails),
                     ordering=config.ordering, config=config)


def run_strategy(config: CompressionConfig, tower: VisionTowerSpec,
                 frames: Optional[Sequence[Frame]] = None,
                 features: Optional[Sequence[TokenTensor]] = None,
                 threads: int = 1, source_label: str = "") -> TokenPack:
    """Dispatch config.strategy over frames or pre-extracted features.

    Pixel-level strategies (grid, grids, ts) need frames; token-level ones
    (concat, pool, sample) accept either. Returns a pack whose config
    snapshot reflects what actually ran (n_thumbnails = 0 for single-tensor
    strategies).
    """
    strategy = config.strategy
    needs_frames = isinstance(strategy, (Grid, Grids, ThumbnailAndSampling))
    if needs_frames and frames is None:
        raise FramesRequired(
            f"strategy {type(strategy).__name__} needs pixel frames")
    if frames is None and features is None:
        raise InvalidCount("provide frames or features")

    if isinstance(strategy, ThumbnailAndSampling):
        cfg = replace(config, n_thumb_frames=strategy.n_thumb,
                      n_thumbnails=strategy.n_thumbnails,
                      token_budget=strategy.budget)
        pack = thumbnail_and_sampling(frames, cfg, tower, threads=threads)
        return replace(pack, source_label=source_label)

    if features is None:
        features = encode_frames(frames, tower, threads=threads)

    if isinstance(strategy, Concat):
        merged = concat_tokens(features)
    elif isinstance(strategy, Pool):
        merged = pool_tokens(features, mode=strategy.mode, kind=strategy.kind,
                             kernel=strategy.kernel, stride=strategy.stride)
    elif isinstance(strategy, Sample):
        merged = sample_tokens(concat_tokens(features), strategy.target)
    elif isinstance(strategy, Grid):
        gframes = select_equidistant(frames, config.n_thumb_frames)
        merged = build_grids(gframes, config.n_thumb_frames,
                             config.thumb_layout, tower, threads=threads)
    elif isinstance(strategy, Grids):
        merged = build_grids(frames, strategy.frames_per_grid,
                             default_layout(strategy.frames_per_grid),
                             tower, threads=threads)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    cfg = replace(config, n_thumbnails=0)
    return TokenPack(sampled=merged, thumbnails=(), ordering=config.ordering,
                     config=cfg, source_label=source_label)
