"""tokpress: deterministic visual-token compression for video frames.

Turns a sequence of RGB frames into a fixed-budget pack of encoder tokens
using one of six strategies, the flagship being the hybrid that pairs a
grid-view thumbnail with tokens sampled evenly from every frame.
"""

from .budget import fits_context, plan
from .errors import (
    BadMagic,
    BudgetTooSmall,
    DimMismatch,
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
    WrongResolution,
)
from .grid import compose_thumbnail, default_layout, resize_bilinear
from .model import (
    CompressionConfig,
    Concat,
    Frame,
    Grid,
    Grids,
    Ordering,
    Pool,
    Sample,
    StrategySpec,
    ThumbnailAndSampling,
    ThumbnailLayout,
    TokenBudget,
    TokenPack,
    TokenTensor,
    validate_config,
)
from .packio import pack_from_bytes, pack_to_bytes, read_pack, write_manifest, write_pack
from .sampling import sample_frames, select_equidistant, uniform_indices
from .strategies import (
    build_grids,
    concat_tokens,
    encode_frames,
    pool_tokens,
    run_strategy,
    sample_tokens,
    thumbnail_and_sampling,
)
from .tower import VisionTowerSpec, encode, load_features, write_features

__version__ = "0.1.0"

__all__ = [
    "BadMagic", "BudgetTooSmall", "CompressionConfig", "Concat", "DimMismatch",
    "FormatError", "Frame", "FramesRequired", "Grid", "Grids", "InvalidCount",
    "InvalidPooling", "InvalidSelection", "IoError", "LayoutTooSmall",
    "NotDivisible", "NotSquareGrid", "OddThumbFrames", "Ordering", "Pool",
    "ResolutionNotDivisible", "Sample", "ShapeMismatch", "StrategySpec",
    "ThumbFramesExceedTotal", "ThumbnailAndSampling", "ThumbnailLayout",
    "TokenBudget", "TokenPack", "TokenTensor", "TokensPerImageMismatch",
    "TokpressError", "TooManyFrames", "UnsupportedVersion", "VisionTowerSpec",
    "WrongResolution", "build_grids", "compose_thumbnail", "concat_tokens",
    "default_layout", "encode", "encode_frames", "fits_context",
    "load_features", "pack_from_bytes", "pack_to_bytes", "plan", "pool_tokens",
    "read_pack", "resize_bilinear", "run_strategy", "sample_frames",
    "sample_tokens", "select_equidistant", "thumbnail_and_sampling",
    "uniform_indices", "validate_config", "write_features", "write_manifest",
    "write_pack",
]
