"""Core value types shared by every module.

Holds the full parameter vocabulary of the compression pipeline: input frame
count N, thumbnail frame count N_T, thumbnail image count k, token budget M,
tokens per encoded image V, encoder geometry, grid layout, token ordering and
the strategy selector. All types are immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

from .errors import (
    BudgetTooSmall,
    InvalidCount,
    InvalidPooling,
    InvalidSelection,
    LayoutTooSmall,
    OddThumbFrames,
    ResolutionNotDivisible,
    ThumbFramesExceedTotal,
    TokensPerImageMismatch,
)


def _freeze(arr: np.ndarray) -> np.ndarray:
    """Return a C-contiguous, read-only view/copy of ``arr``."""
    out = np.ascontiguousarray(arr)
    if out is arr and arr.flags.writeable:
        out = arr.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class Frame:
    """One RGB raster: ``pixels`` is (height, width, 3) uint8, row-major.

    ``source_index`` records the frame's ordinal position in the originating
    sequence so token provenance can point back at it.
    """

    pixels: np.ndarray
    source_index: int = 0

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8:
            raise ValueError(f"frame pixels must be uint8, got {px.dtype}")
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"frame pixels must be (h, w, 3), got {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("frame width and height must be positive")
        object.__setattr__(self, "pixels", _freeze(px))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True, eq=False)
class TokenTensor:
    """A (num_tokens, dim) float32 matrix with optional per-token provenance.

    ``provenance`` is a (num_tokens, 3) uint32 array of
    (frame_index, patch_row, patch_col) triples, or None when tokens no
    longer map to single patches.
    """

    values: np.ndarray
    provenance: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        vals = np.asarray(self.values)
        if vals.dtype != np.float32:
            vals = vals.astype(np.float32)
        if vals.ndim != 2:
            raise ValueError(f"token values must be 2-D, got shape {vals.shape}")
        object.__setattr__(self, "values", _freeze(vals))
        if self.provenance is not None:
            prov = np.asarray(self.provenance)
            if prov.dtype != np.uint32:
                prov = prov.astype(np.uint32)
            if prov.shape != (vals.shape[0], 3):
                raise ValueError(
                    f"provenance must be ({vals.shape[0]}, 3), got {prov.shape}"
                )
            object.__setattr__(self, "provenance", _freeze(prov))

    @property
    def num_tokens(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


class Ordering(str, Enum):
    """Position of sampled tokens relative to thumbnail tokens in a pack."""

    SAMPLING_FIRST = "sampling_first"
    THUMBNAIL_FIRST = "thumbnail_first"


@dataclass(frozen=True)
class ThumbnailLayout:
    """Grid geometry of a composed thumbnail image (cols x rows cells)."""

    cols: int
    rows: int

    @property
    def cells(self) -> int:
        return self.cols * self.rows

    @classmethod
    def for_frames(cls, n_thumb: int) -> "ThumbnailLayout":
        """Default two-column layout: n_thumb/2 rows (n_thumb must be even)."""
        if n_thumb < 2 or n_thumb % 2 != 0:
            raise OddThumbFrames(f"thumbnail frame count must be even and >= 2, got {n_thumb}")
        return cls(cols=2, rows=n_thumb // 2)


# -- strategy selectors -------------------------------------------------------

@dataclass(frozen=True)
class Concat:
    """Concatenate all per-frame tokens; no compression."""


@dataclass(frozen=True)
class Pool:
    """Window-pool per-frame tokens: avg/max over seq1d windows or the 2-D patch grid."""

    mode: str = "avg"       # "avg" | "max"
    kind: str = "spatial2d"  # "seq1d" | "spatial2d"
    kernel: int = 2
    stride: int = 2


@dataclass(frozen=True)
class Grid:
    """One grid-view image composed from the thumbnail frames; nothing else."""


@dataclass(frozen=True)
class Grids:
    """Partition frames into consecutive groups and compose one grid per group."""

    frames_per_grid: int


@dataclass(frozen=True)
class Sample:
    """Uniformly sample the frame-major token sequence down to ``target`` tokens."""

    target: int


@dataclass(frozen=True)
class ThumbnailAndSampling:
    """Hybrid: k thumbnail grids plus budget-filling sampled tokens."""

    n_thumb: int
    n_thumbnails: int
    budget: int


StrategySpec = Union[Concat, Pool, Grid, Grids, Sample, ThumbnailAndSampling]

_STRATEGY_NAMES = {
    Concat: "concat",
    Pool: "pool",
    Grid: "grid",
    Grids: "grids",
    Sample: "sample",
    ThumbnailAndSampling: "ts",
}


def strategy_name(strategy: StrategySpec) -> str:
    return _STRATEGY_NAMES[type(strategy)]


def strategy_to_json(strategy: StrategySpec) -> dict:
    """Compact JSON-ready description of a strategy selector."""
    out: dict = {"kind": strategy_name(strategy)}
    if isinstance(strategy, Pool):
        out.update(mode=strategy.mode, pool=strategy.kind,
                   kernel=strategy.kernel, stride=strategy.stride)
    elif isinstance(strategy, Grids):
        out.update(frames_per_grid=strategy.frames_per_grid)
    elif isinstance(strategy, Sample):
        out.update(target=strategy.target)
    elif isinstance(strategy, ThumbnailAndSampling):
        out.update(n_thumb=strategy.n_thumb, n_thumbnails=strategy.n_thumbnails,
                   budget=strategy.budget)
    return out


def strategy_from_json(data: dict) -> StrategySpec:
    kind = data.get("kind")
    if kind == "concat":
        return Concat()
    if kind == "pool":
        return Pool(mode=data["mode"], kind=data["pool"],
                    kernel=int(data["kernel"]), stride=int(data["stride"]))
    if kind == "grid":
        return Grid()
    if kind == "grids":
        return Grids(frames_per_grid=int(data["frames_per_grid"]))
    if kind == "sample":
        return Sample(target=int(data["target"]))
    if kind == "ts":
        return ThumbnailAndSampling(n_thumb=int(data["n_thumb"]),
                                    n_thumbnails=int(data["n_thumbnails"]),
                                    budget=int(data["budget"]))
    raise ValueError(f"unknown strategy kind {kind!r}")


@dataclass(frozen=True)
class CompressionConfig:
    """Every pipeline parameter in one record.

    Defaults follow the reference setting: 50 input frames, a single
    6-frame thumbnail, 3456-token budget at 336px / patch 14 (576 tokens
    per encoded image). Construction never raises for out-of-range values;
    :func:`validate_config` reports the first violated invariant by name.
    """

    n_frames: int = 50
    n_thumb_frames: int = 6
    n_thumbnails: int = 1
    token_budget: int = 3456
    encoder_resolution: int = 336
    patch_size: int = 14
    tokens_per_image: Optional[int] = None
    thumb_layout: Optional[ThumbnailLayout] = None
    ordering: Ordering = Ordering.SAMPLING_FIRST
    strategy: Optional[StrategySpec] = None

    def __post_init__(self) -> None:
        if self.tokens_per_image is None:
            v = 0
            if self.patch_size > 0 and self.encoder_resolution > 0:
                v = (self.encoder_resolution // self.patch_size) ** 2
            object.__setattr__(self, "tokens_per_image", v)
        if self.thumb_layout is None:
            rows = max(1, (self.n_thumb_frames + 1) // 2)
            object.__setattr__(self, "thumb_layout", ThumbnailLayout(cols=2, rows=rows))
        if self.strategy is None:
            object.__setattr__(self, "strategy", ThumbnailAndSampling(
                n_thumb=self.n_thumb_frames,
                n_thumbnails=self.n_thumbnails,
                budget=self.token_budget,
            ))
        if isinstance(self.ordering, str) and not isinstance(self.ordering, Ordering):
            object.__setattr__(self, "ordering", Ordering(self.ordering))


def validate_config(config: CompressionConfig) -> CompressionConfig:
    """Check every config invariant; return the config or raise the first
    violated invariant as a named error."""
    c = config
    if c.n_frames < 1:
        raise InvalidCount(f"n_frames must be >= 1, got {c.n_frames}")
    if c.token_budget < 1:
        raise InvalidCount(f"token_budget must be >= 1, got {c.token_budget}")
    if c.encoder_resolution < 1 or c.patch_size < 1:
        raise InvalidCount("encoder_resolution and patch_size must be >= 1")
    if c.n_thumb_frames < 0 or c.n_thumbnails < 0:
        raise InvalidCount("n_thumb_frames and n_thumbnails must be >= 0")
    if c.encoder_resolution % c.patch_size != 0:
        raise ResolutionNotDivisible(
            f"resolution {c.encoder_resolution} not divisible by patch {c.patch_size}")
    v = (c.encoder_resolution // c.patch_size) ** 2
    if c.tokens_per_image != v:
        raise TokensPerImageMismatch(
            f"tokens_per_image {c.tokens_per_image} != (resolution/patch)^2 = {v}")
    if c.n_thumb_frames % 2 != 0:
        raise OddThumbFrames(f"n_thumb_frames must be even, got {c.n_thumb_frames}")
    if c.n_thumb_frames > c.n_frames:
        raise ThumbFramesExceedTotal(
            f"n_thumb_frames {c.n_thumb_frames} > n_frames {c.n_frames}")
    if c.token_budget <= c.n_thumbnails * v:
        raise BudgetTooSmall(
            f"budget {c.token_budget} leaves no sampled tokens "
            f"(needs > {c.n_thumbnails} * {v})")
    layout = c.thumb_layout
    if layout.cols < 1 or layout.rows < 1:
        raise LayoutTooSmall(f"layout {layout.cols}x{layout.rows} has no cells")
    if layout.cells < c.n_thumb_frames:
        raise LayoutTooSmall(
            f"layout {layout.cols}x{layout.rows} holds {layout.cells} frames, "
            f"need {c.n_thumb_frames}")
    s = c.strategy
    if isinstance(s, Pool) and (s.kernel < 1 or s.stride < 1):
        raise InvalidPooling(f"kernel {s.kernel} and stride {s.stride} must be >= 1")
    if isinstance(s, Pool) and s.mode not in ("avg", "max"):
        raise InvalidPooling(f"unknown pooling mode {s.mode!r}")
    if isinstance(s, Pool) and s.kind not in ("seq1d", "spatial2d"):
        raise InvalidPooling(f"unknown pooling kind {s.kind!r}")
    if isinstance(s, Sample) and s.target < 1:
        raise InvalidSelection(f"sample target must be >= 1, got {s.target}")
    if isinstance(s, ThumbnailAndSampling) and s.budget <= s.n_thumbnails * v:
        raise BudgetTooSmall(
            f"strategy budget {s.budget} leaves no sampled tokens "
            f"(needs > {s.n_thumbnails} * {v})")
    return config


@dataclass(frozen=True)
class TokenBudget:
    """Token split between the two pathways under a fixed total budget."""

    thumbnail_tokens: int
    sampled_tokens: int
    total: int
    sampling_compression_rate: float

    def __post_init__(self) -> None:
        if self.thumbnail_tokens + self.sampled_tokens != self.total:
            raise ValueError("thumbnail_tokens + sampled_tokens must equal total")
        if self.sampled_tokens <= 0:
            raise ValueError("sampled_tokens must be positive")


@dataclass(frozen=True, eq=False)
class TokenPack:
    """The final artifact: sampled tokens plus per-thumbnail token tensors.

    ``ordering`` fixes the serialized token order. ``config`` is a snapshot
    of the parameters that produced the pack.
    """

    sampled: TokenTensor
    thumbnails: tuple = ()
    ordering: Ordering = Ordering.SAMPLING_FIRST
    config: CompressionConfig = field(
        default_factory=lambda: CompressionConfig(n_thumbnails=0))
    source_label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "thumbnails", tuple(self.thumbnails))
        if len(self.thumbnails) != self.config.n_thumbnails:
            raise ValueError(
                f"pack has {len(self.thumbnails)} thumbnails, "
                f"config says {self.config.n_thumbnails}")
        for t in self.thumbnails:
            if t.dim != self.sampled.dim:
                raise ValueError(
                    f"thumbnail dim {t.dim} != sampled dim {self.sampled.dim}")

    @property
    def thumbnail_tokens(self) -> int:
        return sum(t.num_tokens for t in self.thumbnails)

    @property
    def total_tokens(self) -> int:
        return self.sampled.num_tokens + self.thumbnail_tokens

    @property
    def dim(self) -> int:
        return self.sampled.dim

    def tensors_in_order(self) -> list:
        """Tensors in serialized order per the ordering mode."""
        if self.ordering is Ordering.THUMBNAIL_FIRST:
            return [*self.thumbnails, self.sampled]
        return [self.sampled, *self.thumbnails]
