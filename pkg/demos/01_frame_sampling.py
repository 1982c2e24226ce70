#!/usr/bin/env python3
# Equidistant selection: which frames does the pipeline actually look at?

import numpy as np

from tokpress import Frame, sample_frames, select_equidistant, uniform_indices

print(uniform_indices(50, 6))   # [4, 12, 20, 29, 37, 45]
print(uniform_indices(16, 4))   # [2, 6, 10, 14]
print(uniform_indices(10, 4))   # [1, 3, 6, 8]
print(uniform_indices(7, 7))    # identity when select == total

# each index is the center of its segment: segment i covers
# [i*total/select, (i+1)*total/select) and we take floor of the midpoint
total, select = 50, 6
for i in range(select):
    lo = i * total / select
    hi = (i + 1) * total / select
    print(f"segment {i}: [{lo:5.2f}, {hi:5.2f}) -> frame {uniform_indices(total, select)[i]}")

# on actual frames the source_index survives selection
rng = np.random.default_rng(0)
frames = [Frame(pixels=rng.integers(0, 256, (36, 64, 3), dtype=np.uint8),
                source_index=i) for i in range(50)]

picked = select_equidistant(frames, 6)
print("picked source indices:", [f.source_index for f in picked])

# sample_frames caps a long video at n; shorter videos pass through whole
print(len(sample_frames(frames, 16)), "of 50 kept")
print(len(sample_frames(frames[:10], 16)), "of 10 kept (no padding, no repeats)")
