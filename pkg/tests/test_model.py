from __future__ import annotations

import numpy as np
import pytest

from tokpress import (
    BudgetTooSmall,
    CompressionConfig,
    Concat,
    Frame,
    Grids,
    InvalidPooling,
    InvalidSelection,
    OddThumbFrames,
    Ordering,
    Pool,
    Sample,
    ThumbFramesExceedTotal,
    ThumbnailAndSampling,
    ThumbnailLayout,
    TokenBudget,
    TokenPack,
    TokenTensor,
    TokensPerImageMismatch,
    validate_config,
)
from tokpress.model import strategy_from_json, strategy_to_json


def test_frame_validation():
    px = np.zeros((4, 5, 3), dtype=np.uint8)
    f = Frame(pixels=px, source_index=3)
    assert (f.height, f.width) == (4, 5)
    assert not f.pixels.flags.writeable
    with pytest.raises(ValueError):
        Frame(pixels=np.zeros((4, 5, 4), dtype=np.uint8))
    with pytest.raises(ValueError):
        Frame(pixels=np.zeros((4, 5, 3), dtype=np.float32))
    with pytest.raises(ValueError):
        Frame(pixels=np.zeros((0, 5, 3), dtype=np.uint8))


def test_token_tensor_shapes():
    t = TokenTensor(values=np.zeros((6, 2), dtype=np.float32))
    assert (t.num_tokens, t.dim) == (6, 2)
    assert t.provenance is None
    prov = np.zeros((6, 3), dtype=np.uint32)
    t2 = TokenTensor(values=np.zeros((6, 2), dtype=np.float32), provenance=prov)
    assert t2.provenance.shape == (6, 3)
    with pytest.raises(ValueError):
        TokenTensor(values=np.zeros((6, 2), dtype=np.float32),
                    provenance=np.zeros((5, 3), dtype=np.uint32))
    with pytest.raises(ValueError):
        TokenTensor(values=np.zeros(6, dtype=np.float32))


def test_default_config_is_valid():
    cfg = CompressionConfig()
    assert cfg.tokens_per_image == 576
    assert cfg.thumb_layout == ThumbnailLayout(cols=2, rows=3)
    assert isinstance(cfg.strategy, ThumbnailAndSampling)
    assert validate_config(cfg) is cfg


def test_thumb_frames_equal_frames_boundary():
    cfg = CompressionConfig(n_frames=16, n_thumb_frames=16, n_thumbnails=1,
                            token_budget=2 * 576,
                            thumb_layout=ThumbnailLayout(cols=2, rows=8))
    assert validate_config(cfg) is cfg


@pytest.mark.parametrize("kwargs,error", [
    (dict(n_thumb_frames=5), OddThumbFrames),
    (dict(n_frames=4, n_thumb_frames=6), ThumbFramesExceedTotal),
    (dict(token_budget=576), BudgetTooSmall),
    (dict(token_budget=300), BudgetTooSmall),
    (dict(tokens_per_image=100), TokensPerImageMismatch),
    (dict(strategy=Pool(kernel=0)), InvalidPooling),
    (dict(strategy=Pool(mode="median")), InvalidPooling),
    (dict(strategy=Sample(target=0)), InvalidSelection),
    (dict(strategy=ThumbnailAndSampling(n_thumb=6, n_thumbnails=6, budget=3456)),
     BudgetTooSmall),
])
def test_validation_errors(kwargs, error):
    with pytest.raises(error):
        validate_config(CompressionConfig(**kwargs))


def test_validation_reports_one_named_error():
    # several invariants broken at once; exactly one named error comes back
    cfg = CompressionConfig(n_frames=2, n_thumb_frames=7, token_budget=10)
    with pytest.raises(OddThumbFrames):
        validate_config(cfg)


def test_every_config_validates_or_names_an_error():
    rng = np.random.default_rng(5)
    from tokpress import TokpressError
    for _ in range(300):
        cfg = CompressionConfig(
            n_frames=int(rng.integers(-2, 60)),
            n_thumb_frames=int(rng.integers(-2, 20)),
            n_thumbnails=int(rng.integers(-1, 5)),
            token_budget=int(rng.integers(-10, 5000)),
            encoder_resolution=int(rng.integers(1, 400)),
            patch_size=int(rng.integers(1, 40)),
        )
        try:
            validate_config(cfg)
        except TokpressError as exc:
            assert type(exc).__name__ == exc.name


def test_budget_record_consistency():
    b = TokenBudget(thumbnail_tokens=576, sampled_tokens=2880, total=3456,
                    sampling_compression_rate=10.0)
    assert b.total == 3456
    with pytest.raises(ValueError):
        TokenBudget(thumbnail_tokens=1, sampled_tokens=1, total=3,
                    sampling_compression_rate=1.0)
    with pytest.raises(ValueError):
        TokenBudget(thumbnail_tokens=3, sampled_tokens=0, total=3,
                    sampling_compression_rate=1.0)


def _tensor(n, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    return TokenTensor(values=rng.random((n, dim), dtype=np.float32))


def test_pack_thumbnail_count_must_match_config():
    cfg = CompressionConfig(n_thumbnails=2)
    with pytest.raises(ValueError):
        TokenPack(sampled=_tensor(5), thumbnails=(_tensor(5),), config=cfg)


def test_pack_order_modes():
    cfg = CompressionConfig(n_thumbnails=1)
    s, t = _tensor(5, seed=1), _tensor(3, seed=2)
    pack = TokenPack(sampled=s, thumbnails=(t,), config=cfg)
    assert pack.tensors_in_order() == [s, t]
    pack = TokenPack(sampled=s, thumbnails=(t,), config=cfg,
                     ordering=Ordering.THUMBNAIL_FIRST)
    assert pack.tensors_in_order() == [t, s]
    assert pack.total_tokens == 8
    assert pack.thumbnail_tokens == 3


def test_strategy_json_round_trip():
    specs = [Concat(), Pool(mode="max", kind="seq1d", kernel=3, stride=3),
             Grids(frames_per_grid=4), Sample(target=2304),
             ThumbnailAndSampling(n_thumb=6, n_thumbnails=1, budget=3456)]
    for spec in specs:
        assert strategy_from_json(strategy_to_json(spec)) == spec
    with pytest.raises(ValueError):
        strategy_from_json({"kind": "mystery"})
