#!/usr/bin/env python3
# Token counts for every compression strategy on the same 16-frame clip.

import numpy as np

from tokpress import (CompressionConfig, Concat, Frame, Grid, Grids, Pool,
                      Sample, ThumbnailAndSampling, VisionTowerSpec,
                      run_strategy)

rng = np.random.default_rng(7)
frames = [Frame(pixels=rng.integers(0, 256, (72, 96, 3), dtype=np.uint8),
                source_index=i) for i in range(16)]

# stub tower at paper geometry: 336/14 -> 24x24 = 576 tokens per image
tower = VisionTowerSpec(resolution=336, patch_size=14, dim=8)

table = [
    ("concat 4 frames", 4, 2304, None),
    ("pool 2x2/2", 16, 2304, Pool(mode="avg", kind="spatial2d", kernel=2, stride=2)),
    ("grid of 4", 4, 576, Grid()),
    ("grids, 4 per grid", 16, 2304, Grids(frames_per_grid=4)),
    ("sample to 2304", 16, 2304, Sample(target=2304)),
    ("thumbnail+sampling", 16, 2304,
     ThumbnailAndSampling(n_thumb=4, n_thumbnails=1, budget=2304)),
]

for label, n, budget, strategy in table:
    cfg = CompressionConfig(
        n_frames=n, n_thumb_frames=4,
        n_thumbnails=1 if isinstance(strategy, ThumbnailAndSampling) else 0,
        token_budget=budget, strategy=strategy or Concat())
    pack = run_strategy(cfg, tower, frames=frames[:n])
    split = (f"{pack.sampled.num_tokens}+{pack.thumbnail_tokens}"
             if pack.thumbnail_tokens else str(pack.total_tokens))
    print(f"{label:22s} frames={n:2d} tokens={split}")

# the hybrid is the only row that spends part of its budget on a summary
# image; everything else is a single tensor
