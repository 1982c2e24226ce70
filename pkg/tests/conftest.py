"""Shared test helpers: frame factories and independent oracles.

The oracles here deliberately avoid the library's vectorized paths: pooling
is a literal loop over windows and dims, selection re-derives indices from
the segment-center formula. They exist so the implementation has something
independent to disagree with.
"""

from __future__ import annotations

import numpy as np

from tokpress import Frame

# test_acceptance appends one [PASS]/[FAIL] line per criterion; printing
# them from the summary hook keeps them visible under captured output.
acceptance_report: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_report:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report:
            terminalreporter.write_line(line)


def make_frames(n, height=48, width=64, seed=0):
    rng = np.random.default_rng(seed)
    return [Frame(pixels=rng.integers(0, 256, (height, width, 3), dtype=np.uint8),
                  source_index=i)
            for i in range(n)]


def solid_frame(color, height=48, width=64, source_index=0):
    px = np.zeros((height, width, 3), dtype=np.uint8)
    px[:, :] = color
    return Frame(pixels=px, source_index=source_index)


def oracle_pool_seq1d(values, mode, kernel, stride):
    """Naive strided-window reduction over the token sequence."""
    n, dim = values.shape
    rows = []
    for start in range(0, n, stride):
        stop = min(start + kernel, n)
        row = []
        for d in range(dim):
            col = [float(values[i, d]) for i in range(start, stop)]
            row.append(max(col) if mode == "max" else sum(col) / len(col))
        rows.append(row)
    return np.array(rows, dtype=np.float32).reshape(len(rows), dim)


def oracle_pool_spatial2d(values, mode, kernel, stride):
    """Naive window reduction over the square patch grid, partial windows dropped."""
    n, dim = values.shape
    side = int(round(n ** 0.5))
    assert side * side == n
    rows = []
    for r0 in range(0, side - kernel + 1, stride):
        for c0 in range(0, side - kernel + 1, stride):
            row = []
            for d in range(dim):
                col = [float(values[(r0 + dr) * side + (c0 + dc), d])
                       for dr in range(kernel) for dc in range(kernel)]
                row.append(max(col) if mode == "max" else sum(col) / len(col))
            rows.append(row)
    return np.array(rows, dtype=np.float32).reshape(len(rows), dim)


def oracle_centers(total, select):
    """Segment centers spelled out the long way: exact midpoint of each
    of the ``select`` equal segments over [0, total), floored."""
    from fractions import Fraction

    out = []
    for i in range(select):
        lo = Fraction(i * total, select)
        hi = Fraction((i + 1) * total, select)
        out.append(int((lo + hi) / 2))
    return out
