"""Command-line front end.

Subcommands: compress (frames or features to a token pack), inspect (pack
header and statistics), compare (per-strategy token-count table), sweep
(budget allocations across one varying parameter). Exit codes: 0 success,
1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from .budget import plan
from .errors import IoError, TokpressError
from .model import (
    CompressionConfig,
    Concat,
    Frame,
    Grid,
    Grids,
    Ordering,
    Pool,
    Sample,
    ThumbnailAndSampling,
    strategy_name,
    validate_config,
)
from .packio import read_pack, write_manifest, write_pack
from .sampling import sample_frames
from .strategies import run_strategy
from .tower import VisionTowerSpec, load_features

IMAGE_SUFFIXES = (".png", ".ppm")

# CLI option name -> CompressionConfig field accepted in --config files.
CONFIG_KEYS = {
    "n_frames": "frames",
    "n_thumb_frames": "thumb_frames",
    "n_thumbnails": "thumbnails",
    "token_budget": "budget",
    "encoder_resolution": "resolution",
    "patch_size": "patch",
    "ordering": "ordering",
}

DEFAULTS = {
    "frames": 50,
    "thumb_frames": 6,
    "thumbnails": 1,
    "budget": 3456,
    "resolution": 336,
    "patch": 14,
    "ordering": "sampling_first",
}


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def load_config_file(path: str) -> dict:
    """Parse key=value lines; keys mirror the config record's field names."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        opt = CONFIG_KEYS[key]
        if opt == "ordering":
            out[opt] = value
        else:
            try:
                out[opt] = int(value)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: {key} must be an integer")
    return out


def _resolve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    """Merge defaults, config file, and explicit flags (flags win)."""
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            settings.update(load_config_file(args.config))
        except ValueError as exc:
            parser.error(str(exc))
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    for key in ("frames", "budget", "resolution", "patch"):
        if settings[key] < 1:
            parser.error(f"--{key.replace('_', '-')} must be >= 1")
    if settings["thumb_frames"] < 0 or settings["thumbnails"] < 0:
        parser.error("--thumb-frames and --thumbnails must be >= 0")
    if settings["ordering"] not in ("sampling_first", "thumbnail_first"):
        parser.error(f"unknown ordering {settings['ordering']!r}")
    return settings


def _threads(args: argparse.Namespace) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("TOKPRESS_THREADS", "")
    if env.strip():
        try:
            value = int(env)
        except ValueError:
            raise IoError(f"TOKPRESS_THREADS is not an integer: {env!r}")
        if value < 1:
            raise IoError(f"TOKPRESS_THREADS must be >= 1, got {value}")
        return value
    return 1


def load_frame_dir(path: Path) -> list[Frame]:
    """Read PNG/PPM files in lexicographic order as frames."""
    files = sorted(p for p in path.iterdir()
                   if p.suffix.lower() in IMAGE_SUFFIXES and p.is_file())
    if not files:
        raise IoError(f"no {'/'.join(IMAGE_SUFFIXES)} files in {path}")
    frames = []
    for i, file in enumerate(files):
        try:
            with Image.open(file) as img:
                pixels = np.asarray(img.convert("RGB"), dtype=np.uint8)
        except OSError as exc:
            raise IoError(f"cannot decode {file}: {exc}") from exc
        frames.append(Frame(pixels=pixels, source_index=i))
    return frames


def _build_strategy(name: str, settings: dict):
    if name == "concat":
        return Concat()
    if name == "pool":
        return Pool(mode=settings["pool_mode"], kind=settings["pool_kind"],
                    kernel=settings["kernel"], stride=settings["stride"])
    if name == "grid":
        return Grid()
    if name == "grids":
        return Grids(frames_per_grid=settings["thumb_frames"])
    if name == "sample":
        return Sample(target=settings["budget"])
    return ThumbnailAndSampling(n_thumb=settings["thumb_frames"],
                                n_thumbnails=settings["thumbnails"],
                                budget=settings["budget"])


def cmd_compress(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    settings = _resolve(args, parser)
    settings["pool_mode"] = args.pool_mode
    settings["pool_kind"] = args.pool_kind
    settings["kernel"] = args.kernel
    settings["stride"] = args.stride
    strategy = _build_strategy(args.strategy, settings)
    threads = _threads(args)

    input_path = Path(args.input)
    frames = None
    features = None
    if input_path.is_dir():
        raw = load_frame_dir(input_path)
        kept = sample_frames(raw, settings["frames"])
        # Shorter inputs use every frame; indices restart at zero so token
        # provenance matches the pipeline's frame sequence.
        frames = [Frame(pixels=f.pixels, source_index=i)
                  for i, f in enumerate(kept)]
        n_eff = len(frames)
        tower = VisionTowerSpec(resolution=settings["resolution"],
                                patch_size=settings["patch"], dim=args.dim)
    elif input_path.is_file():
        probe = read_pack(input_path)
        n_eff = probe.config.n_frames
        tower = VisionTowerSpec(resolution=settings["resolution"],
                                patch_size=settings["patch"], dim=probe.dim,
                                kind="file", path=input_path)
        features = load_features(tower, n_eff)
    else:
        raise IoError(f"input {input_path} is neither a directory nor a file")

    uses_thumbs = args.strategy in ("grid", "grids", "ts")
    config = CompressionConfig(
        n_frames=n_eff,
        n_thumb_frames=settings["thumb_frames"] if uses_thumbs else 0,
        n_thumbnails=settings["thumbnails"] if args.strategy == "ts" else 0,
        token_budget=settings["budget"],
        encoder_resolution=settings["resolution"],
        patch_size=settings["patch"],
        ordering=Ordering(settings["ordering"]),
        strategy=strategy,
    )
    validate_config(config)

    pack = run_strategy(config, tower, frames=frames, features=features,
                        threads=threads, source_label=args.label)
    write_pack(pack, args.out)
    if args.manifest:
        write_manifest(pack, str(args.out) + ".json")

    v = config.tokens_per_image
    if args.strategy == "ts":
        rate = (n_eff * v) / pack.sampled.num_tokens
    elif args.strategy == "grid":
        rate = (config.n_thumb_frames * v) / pack.total_tokens
    else:
        rate = (n_eff * v) / pack.total_tokens
    print(f"{args.strategy}: sampled={pack.sampled.num_tokens} "
          f"thumbnail={pack.thumbnail_tokens} total={pack.total_tokens} "
          f"rate={rate:.4f} -> {args.out}")
    return 0


def _stats_line(label: str, values: np.ndarray) -> str:
    if values.size == 0:
        return f"{label}: count=0"
    return (f"{label}: count={values.shape[0]} min={values.min():.6f} "
            f"max={values.max():.6f} mean={values.mean(dtype=np.float64):.6f}")


def cmd_inspect(args: argparse.Namespace) -> int:
    pack = read_pack(args.in_path)
    cfg = pack.config
    print(f"strategy={strategy_name(cfg.strategy)} ordering={pack.ordering.value} "
          f"frames={cfg.n_frames} thumb_frames={cfg.n_thumb_frames} "
          f"thumbnails={cfg.n_thumbnails}")
    print(f"sampled={pack.sampled.num_tokens} thumbnail={pack.thumbnail_tokens} "
          f"total={pack.total_tokens} dim={pack.dim}")
    print(_stats_line("sampled", pack.sampled.values))
    for i, t in enumerate(pack.thumbnails):
        print(_stats_line(f"thumbnail[{i}]", t.values))
    tensors = pack.tensors_in_order()
    if all(t.provenance is not None for t in tensors) and pack.total_tokens:
        frame_ids = np.concatenate([t.provenance[:, 0] for t in tensors])
        print(f"provenance: frame indices {frame_ids.min()}..{frame_ids.max()}")
    if pack.source_label:
        print(f"source_label={pack.source_label}")
    return 0


def _perfect_square_root(n: int) -> int:
    root = int(np.sqrt(n))
    for candidate in (root - 1, root, root + 1):
        if candidate >= 0 and candidate * candidate == n:
            return candidate
    return -1


def compare_rows(n: int, budget: int, v: int, grid_side: int,
                 thumb_frames: int, thumbnails: int) -> list[tuple]:
    """Token counts and rates per strategy at one (frames, budget) setting."""
    rows = []

    if budget % v == 0 and 1 <= budget // v <= n:
        rows.append(("concat", budget // v, budget, ""))
    else:
        rows.append(("concat", "", "infeasible", ""))

    total = n * v
    r = total // budget if budget and total % budget == 0 else 0
    t = _perfect_square_root(r) if r else -1
    if r and t >= 1 and grid_side % t == 0:
        rows.append(("pool", n, budget, f"{float(r):.4f}"))
    else:
        rows.append(("pool", n, "infeasible", ""))

    if r and r % 2 == 0 and 2 <= r <= n:
        rows.append(("grid", r, v, f"{float(r):.4f}"))
    else:
        rows.append(("grid", "", "infeasible", ""))

    k = budget // v if budget % v == 0 else 0
    per = n // k if k and n % k == 0 else 0
    if k and per >= 2 and per % 2 == 0:
        rows.append(("grids", n, budget, f"{float(per):.4f}"))
    else:
        rows.append(("grids", n, "infeasible", ""))

    if budget <= total:
        rows.append(("sample", n, budget, f"{total / budget:.4f}"))
    else:
        rows.append(("sample", n, "infeasible", ""))

    sampled = budget - thumbnails * v
    if (sampled > 0 and thumb_frames >= 2 and thumb_frames % 2 == 0
            and thumb_frames * thumbnails <= n and sampled <= total):
        rows.append(("ts", n, budget, f"{total / sampled:.4f}"))
    else:
        rows.append(("ts", n, "infeasible", ""))
    return rows


def cmd_compare(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    settings = _resolve(args, parser)
    v = (settings["resolution"] // settings["patch"]) ** 2
    side = settings["resolution"] // settings["patch"]
    rows = compare_rows(settings["frames"], settings["budget"], v, side,
                        settings["thumb_frames"], settings["thumbnails"])
    print("strategy,frames,tokens,rate")
    for row in rows:
        print(",".join(str(cell) for cell in row))
    return 0


def cmd_sweep(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    settings = _resolve(args, parser)
    field = {"frames": "n_frames", "thumb-frames": "n_thumb_frames",
             "thumbnails": "n_thumbnails", "budget": "token_budget"}[args.param]
    base = dict(
        n_frames=settings["frames"],
        n_thumb_frames=settings["thumb_frames"],
        n_thumbnails=settings["thumbnails"],
        token_budget=settings["budget"],
        encoder_resolution=settings["resolution"],
        patch_size=settings["patch"],
    )
    print("value,thumbnail_tokens,sampled_tokens,rate")
    valid = 0
    for raw in args.values.split(","):
        raw = raw.strip()
        try:
            value = int(raw)
            params = dict(base)
            params[field] = value
            budget = plan(validate_config(CompressionConfig(**params)))
        except (ValueError, TokpressError):
            print(f"{raw},invalid,invalid,invalid")
            continue
        valid += 1
        print(f"{value},{budget.thumbnail_tokens},{budget.sampled_tokens},"
              f"{budget.sampling_compression_rate:.4f}")
    return 0 if valid else 1


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--frames", type=positive_int, default=None,
                     help="maximum frames sampled from the input (default 50)")
    sub.add_argument("--thumb-frames", dest="thumb_frames", type=nonneg_int,
                     default=None, help="frames per thumbnail grid (default 6)")
    sub.add_argument("--thumbnails", type=nonneg_int, default=None,
                     help="number of thumbnail grids (default 1)")
    sub.add_argument("--budget", type=positive_int, default=None,
                     help="total token budget (default 3456)")
    sub.add_argument("--resolution", type=positive_int, default=None,
                     help="encoder input edge in pixels (default 336)")
    sub.add_argument("--patch", type=positive_int, default=None,
                     help="encoder patch edge in pixels (default 14)")
    sub.add_argument("--config", default=None,
                     help="key=value file mirroring config field names")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tokpress",
        description="Compress video frames into fixed-budget token packs.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compress", help="run a strategy and write a pack")
    _add_config_flags(c)
    c.add_argument("--input", required=True,
                   help="directory of PNG/PPM frames, or a .tstk feature file")
    c.add_argument("--strategy", required=True,
                   choices=["concat", "pool", "grid", "grids", "sample", "ts"])
    c.add_argument("--pool-mode", dest="pool_mode", choices=["avg", "max"],
                   default="avg")
    c.add_argument("--pool-kind", dest="pool_kind",
                   choices=["seq1d", "spatial2d"], default="spatial2d")
    c.add_argument("--kernel", type=positive_int, default=2)
    c.add_argument("--stride", type=positive_int, default=2)
    c.add_argument("--ordering", choices=["sampling_first", "thumbnail_first"],
                   default=None)
    c.add_argument("--dim", type=positive_int, default=64,
                   help="token dimensionality of the stub encoder")
    c.add_argument("--threads", type=positive_int, default=None,
                   help="encoder worker threads (or TOKPRESS_THREADS)")
    c.add_argument("--label", default="", help="source label stored in the pack")
    c.add_argument("--manifest", action="store_true",
                   help="also write <out>.json with the pack header")
    c.add_argument("--out", required=True, help="output .tstk path")

    i = sub.add_parser("inspect", help="print a pack's header and statistics")
    i.add_argument("--in", dest="in_path", required=True, help="pack path")

    p = sub.add_parser("compare", help="per-strategy token table as CSV")
    _add_config_flags(p)

    s = sub.add_parser("sweep", help="budget allocations over one parameter")
    _add_config_flags(s)
    s.add_argument("--param", required=True,
                   choices=["frames", "thumb-frames", "thumbnails", "budget"])
    s.add_argument("--values", required=True,
                   help="comma-separated parameter values")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compress":
            return cmd_compress(args, parser)
        if args.command == "inspect":
            return cmd_inspect(args)
        if args.command == "compare":
            return cmd_compare(args, parser)
        return cmd_sweep(args, parser)
    except TokpressError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"IoError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
