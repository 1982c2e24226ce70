"""Grid-view thumbnail composition.

Arranges a handful of frames into one square image at encoder resolution.
Cell sizes come from integer division of the target edge; remainder pixels
go to the last column and row so cells tile the canvas exactly. Resampling
is bilinear with half-pixel centers, accumulated in float32 and rounded
half-to-even, which makes composed rasters bit-identical across platforms.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import TooManyFrames
from .model import Frame, ThumbnailLayout


def default_layout(n_thumb: int) -> ThumbnailLayout:
    """Two columns, n_thumb/2 rows. n_thumb must be even and >= 2."""
    return ThumbnailLayout.for_frames(n_thumb)


def _axis_weights(out_size: int, in_size: int):
    """Source index pairs and blend weights for one axis, half-pixel centers."""
    dst = np.arange(out_size, dtype=np.float32)
    src = (dst + np.float32(0.5)) * np.float32(in_size / out_size) - np.float32(0.5)
    lo = np.floor(src).astype(np.int64)
    frac = (src - lo).astype(np.float32)
    hi = np.clip(lo + 1, 0, in_size - 1)
    lo = np.clip(lo, 0, in_size - 1)
    return lo, hi, frac


def resize_bilinear(pixels: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize of an (h, w, 3) uint8 raster to (out_h, out_w, 3).

    Same-size input is returned unchanged (bit-exact identity).
    """
    in_h, in_w = pixels.shape[0], pixels.shape[1]
    if (in_h, in_w) == (out_h, out_w):
        return pixels.copy()
    y_lo, y_hi, y_frac = _axis_weights(out_h, in_h)
    x_lo, x_hi, x_frac = _axis_weights(out_w, in_w)
    src = pixels.astype(np.float32)
    # Interpolate rows first, then columns; float32 throughout.
    top = src[y_lo]
    bot = src[y_hi]
    wy = y_frac[:, None, None]
    rows = top * (np.float32(1.0) - wy) + bot * wy
    left = rows[:, x_lo]
    right = rows[:, x_hi]
    wx = x_frac[None, :, None]
    out = left * (np.float32(1.0) - wx) + right * wx
    return np.rint(out).astype(np.uint8)


def compose_thumbnail(frames: Sequence[Frame], layout: ThumbnailLayout,
                      target: int, source_index: int = 0) -> Frame:
    """Compose frames into one target x target grid image, row-major fill.

    Frame i lands in cell (row = i // cols, col = i % cols), stretched to
    the cell by :func:`resize_bilinear`. Unused cells stay black.
    """
    if len(frames) > layout.cells:
        raise TooManyFrames(
            f"{len(frames)} frames exceed layout capacity {layout.cols}x{layout.rows}")
    canvas = np.zeros((target, target, 3), dtype=np.uint8)
    base_w = target // layout.cols
    base_h = target // layout.rows
    for i, frame in enumerate(frames):
        row, col = divmod(i, layout.cols)
        x0 = col * base_w
        y0 = row * base_h
        # Last column/row absorbs the remainder pixels.
        x1 = target if col == layout.cols - 1 else x0 + base_w
        y1 = target if row == layout.rows - 1 else y0 + base_h
        canvas[y0:y1, x0:x1] = resize_bilinear(frame.pixels, y1 - y0, x1 - x0)
    return Frame(pixels=canvas, source_index=source_index)
