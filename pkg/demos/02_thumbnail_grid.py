#!/usr/bin/env python3
# Composing a thumbnail: six frames tiled into one 336x336 grid image.

import numpy as np

from tokpress import Frame, compose_thumbnail, default_layout, resize_bilinear


def solid(color, h, w, idx):
    px = np.zeros((h, w, 3), dtype=np.uint8)
    px[:, :] = color
    return Frame(pixels=px, source_index=idx)


layout = default_layout(6)
print(f"layout for 6 frames: {layout.cols} cols x {layout.rows} rows")

colors = [(255, 0, 0), (0, 255, 0), (0, 0, 255),
          (255, 255, 0), (255, 0, 255), (0, 255, 255)]
frames = [solid(c, 90 + 7 * i, 120 + 5 * i, i) for i, c in enumerate(colors)]

composite = compose_thumbnail(frames, layout, 336)
print("composite shape:", composite.pixels.shape)

# cells are 336/2 = 168 wide and 336/3 = 112 tall; frames fill row-major
for i in range(6):
    r, c = divmod(i, layout.cols)
    cell = composite.pixels[r * 112:(r + 1) * 112, c * 168:(c + 1) * 168]
    corner = tuple(int(v) for v in cell[0, 0])
    print(f"cell ({r},{c}): {cell.shape[1]}x{cell.shape[0]} px, color {corner},"
          f" uniform={bool(np.all(cell == cell[0, 0]))}")

# constant colors survive resizing exactly, which is why the scan above
# comes out uniform; a real frame is stretched to the cell, no letterbox
stretched = resize_bilinear(frames[0].pixels, 112, 168)
print("stretched first frame:", stretched.shape, "still red:",
      bool(np.all(stretched == (255, 0, 0))))

# odd target sizes just make the last row/column absorb the remainder
odd = compose_thumbnail(frames, layout, 335)
print("odd target 335 still fills:", odd.pixels.shape)
