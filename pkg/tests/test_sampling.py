from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_frames, oracle_centers
from tokpress import (
    InvalidSelection,
    OddThumbFrames,
    sample_frames,
    select_equidistant,
    uniform_indices,
)


def test_identity_case():
    assert uniform_indices(4, 4) == [0, 1, 2, 3]


def test_fifty_to_six():
    # frozen from the segment-midpoint oracle
    assert oracle_centers(50, 6) == [4, 12, 20, 29, 37, 45]
    assert uniform_indices(50, 6) == [4, 12, 20, 29, 37, 45]


def test_sixteen_to_four():
    assert oracle_centers(16, 4) == [2, 6, 10, 14]
    assert uniform_indices(16, 4) == [2, 6, 10, 14]


@pytest.mark.parametrize("total,select", [(0, 1), (5, 0), (5, 6), (3, -1)])
def test_bad_selection(total, select):
    with pytest.raises(InvalidSelection):
        uniform_indices(total, select)


@given(total=st.integers(1, 3000), select=st.integers(1, 3000))
def test_matches_oracle(total, select):
    if select > total:
        select = total
    assert uniform_indices(total, select) == oracle_centers(total, select)


@given(total=st.integers(1, 2000), select=st.integers(1, 2000))
def test_strictly_increasing_in_range(total, select):
    if select > total:
        select = total
    idx = uniform_indices(total, select)
    assert len(idx) == select
    assert all(0 <= i < total for i in idx)
    assert all(b > a for a, b in zip(idx, idx[1:]))


@settings(max_examples=30)
@given(select=st.integers(1, 200))
def test_gap_spread(select):
    # consecutive gaps differ by at most 1 on divisible totals, 2 otherwise
    for total in range(select, 201):
        idx = uniform_indices(total, select)
        if len(idx) < 2:
            continue
        gaps = [b - a for a, b in zip(idx, idx[1:])]
        limit = 1 if total % select == 0 else 2
        assert max(gaps) - min(gaps) <= limit


@given(total=st.integers(1, 500))
def test_full_selection_is_identity(total):
    assert uniform_indices(total, total) == list(range(total))


def test_select_equidistant_identity():
    frames = make_frames(6)
    assert select_equidistant(frames, 6) == frames


def test_select_equidistant_positions():
    frames = make_frames(50)
    chosen = select_equidistant(frames, 6)
    assert [f.source_index for f in chosen] == [4, 12, 20, 29, 37, 45]
    chosen = select_equidistant(make_frames(16), 4)
    assert [f.source_index for f in chosen] == [2, 6, 10, 14]


def test_select_equidistant_rejects_odd():
    with pytest.raises(OddThumbFrames):
        select_equidistant(make_frames(10), 3)


def test_sample_frames_caps_at_available():
    frames = make_frames(8)
    assert sample_frames(frames, 20) == frames
    assert len(sample_frames(frames, 4)) == 4
    with pytest.raises(InvalidSelection):
        sample_frames([], 4)


@given(total=st.integers(1, 300), select=st.integers(1, 300))
def test_selection_never_out_of_bounds(total, select):
    frames = make_frames(total, height=2, width=2)
    want = min(select, total)
    out = sample_frames(frames, want)
    assert len(out) == min(want, total)
    assert all(f in frames for f in out)
