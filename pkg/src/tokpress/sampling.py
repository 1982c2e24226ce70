"""Equidistant selection over frame sequences.

One integer rule drives every selection in the pipeline: partition ``total``
positions into ``select`` equal segments and take each segment's center,
index_j = floor((2j + 1) * total / (2 * select)). Pure integer arithmetic,
so results are identical on every platform.
"""

from __future__ import annotations

from typing import Sequence

from .errors import InvalidSelection, OddThumbFrames
from .model import Frame


def uniform_indices(total: int, select: int) -> list[int]:
    """Centers of ``select`` equal segments over ``range(total)``.

    Strictly increasing, each index in [0, total). Requires
    1 <= select <= total.
    """
    if total < 1:
        raise InvalidSelection(f"total must be >= 1, got {total}")
    if select < 1 or select > total:
        raise InvalidSelection(f"select must be in [1, {total}], got {select}")
    return [((2 * j + 1) * total) // (2 * select) for j in range(select)]


def sample_frames(frames: Sequence[Frame], n_frames: int) -> list[Frame]:
    """Select up to ``n_frames`` equidistant frames.

    Sequences shorter than the target are returned whole: every frame is
    used and no frame repeats.
    """
    if not frames:
        raise InvalidSelection("cannot sample from an empty frame sequence")
    if n_frames < 1:
        raise InvalidSelection(f"n_frames must be >= 1, got {n_frames}")
    if len(frames) <= n_frames:
        return list(frames)
    return [frames[i] for i in uniform_indices(len(frames), n_frames)]


def select_equidistant(frames: Sequence[Frame], n_thumb: int) -> list[Frame]:
    """The ``n_thumb`` equidistant frames feeding thumbnail composition.

    n_thumb must be even (grid layouts are two columns wide) and at most
    len(frames). Temporal order and source indices are preserved.
    """
    if n_thumb % 2 != 0:
        raise OddThumbFrames(f"thumbnail frame count must be even, got {n_thumb}")
    return [frames[i] for i in uniform_indices(len(frames), n_thumb)]
