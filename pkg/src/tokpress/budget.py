"""Token-budget arithmetic.

Splits a fixed budget between the thumbnail and sampled pathways and
reports the resulting compression rate on the sampled side:
n_frames x tokens_per_image / sampled_tokens.
"""

from __future__ import annotations

from .errors import BudgetTooSmall
from .model import CompressionConfig, TokenBudget


def plan(config: CompressionConfig) -> TokenBudget:
    """Allocate config.token_budget between pathways."""
    v = config.tokens_per_image
    thumb = config.n_thumbnails * v
    sampled = config.token_budget - thumb
    if sampled <= 0:
        raise BudgetTooSmall(
            f"budget {config.token_budget} <= {config.n_thumbnails} "
            f"thumbnails x {v} tokens")
    rate = (config.n_frames * v) / sampled
    return TokenBudget(thumbnail_tokens=thumb, sampled_tokens=sampled,
                       total=config.token_budget,
                       sampling_compression_rate=rate)


def fits_context(budget: TokenBudget, context_length: int,
                 reserved_text: int = 0) -> bool:
    """Whether the visual tokens plus reserved text tokens fit the window."""
    if context_length < 1:
        raise ValueError(f"context_length must be positive, got {context_length}")
    return budget.total + reserved_text <= context_length
