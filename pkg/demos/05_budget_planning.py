#!/usr/bin/env python3
# How many thumbnails can a context window afford?

from dataclasses import replace

from tokpress import CompressionConfig, TokpressError, fits_context, plan

base = CompressionConfig()

# every extra thumbnail costs 576 tokens of sampling budget, so the
# sampling pathway compresses harder as k grows
print("k  thumb  sampled  rate")
for k in range(0, 6):
    try:
        b = plan(replace(base, n_thumbnails=k))
    except TokpressError as err:
        print(f"{k}  {err.name}: {err}")
        continue
    print(f"{k}  {b.thumbnail_tokens:5d}  {b.sampled_tokens:7d}  "
          f"{b.sampling_compression_rate:7.4f}")

# squeezing the budget instead keeps the thumbnail and shrinks the samples
for budget in (2304, 2880, 3456):
    b = plan(replace(base, token_budget=budget))
    print(f"M={budget}: {b.sampled_tokens} sampled")

# a pack fits when tokens + reserved text prompt fit the model context
b = plan(base)
print(fits_context(b, 4096, reserved_text=512))    # True: 3456+512 <= 4096
print(fits_context(b, 4096, reserved_text=1024))   # False
print(fits_context(b, 3456))                       # True, exactly at the edge
