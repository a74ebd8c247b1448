"""Batch command-line front end: compress, decompress, analyze, bench.

Machine-readable output (JSON, CSV, tables) goes to stdout; diagnostics and
timing go to stderr so piped output stays clean. Exit code 0 means full
success.
"""

import argparse
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from .container import read_container
from .errors import CodecError
from .lzw import BACKEND, DEFAULT_MAX_WIDTH
from .metrics import compression_ratio, entropy_trace, psnr_matrix
from .pipeline import CompressionConfig, compress, decompress
from .rasters import read_image, write_image
from .synthetic import corpus

_EXT_FORMAT = {".pgm": "pgm", ".ppm": "ppm", ".pam": "pam", ".raw": "raw", ".bin": "raw"}
_CHANNEL_FORMAT = {1: "pgm", 3: "ppm", 4: "pam"}


def _config_from(args) -> CompressionConfig:
    return CompressionConfig(
        patch_size=args.patch_size,
        drop_alpha=getattr(args, "drop_alpha", False),
        enable_projection=not args.no_projection,
        enable_bitplane=not args.no_bitplane,
        lzw_max_width=args.lzw_max_width,
    )


def _load_raster(args):
    if args.raw:
        if not (args.width and args.height and args.channels):
            raise CodecError("--raw needs --width, --height, and --channels")
        return read_image(
            args.input,
            "raw",
            width=args.width,
            height=args.height,
            channels=args.channels,
        )
    return read_image(args.input)


def _atomic_write(path, data: bytes):
    """Write via a temp file + rename so failures leave no partial output."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=Path(path).name)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _add_raster_input_flags(sub):
    sub.add_argument("--raw", action="store_true", help="headerless raw input bytes")
    sub.add_argument("--width", type=int, help="raw input width")
    sub.add_argument("--height", type=int, help="raw input height")
    sub.add_argument("--channels", type=int, help="raw input channel count")


def _add_stage_flags(sub):
    sub.add_argument("--patch-size", type=int, default=5000, help="tile edge length")
    sub.add_argument(
        "--no-projection", action="store_true", help="skip the residual projection stage"
    )
    sub.add_argument(
        "--no-bitplane", action="store_true", help="skip the bit-plane transposition stage"
    )
    sub.add_argument(
        "--lzw-max-width",
        type=int,
        default=DEFAULT_MAX_WIDTH,
        help="LZW code width ceiling in bits (9-20)",
    )


def cmd_compress(args) -> int:
    image = _load_raster(args)
    config = _config_from(args)
    start = time.perf_counter()
    blob = compress(image, config, threads=args.threads)
    elapsed = time.perf_counter() - start
    _atomic_write(args.output, blob)
    original = image.nbytes
    ratio = compression_ratio(original, len(blob))
    mbps = original / elapsed / 1e6 if elapsed > 0 else math.inf
    print(
        f"{original} bytes -> {len(blob)} bytes  ratio {ratio:.3f}  "
        f"{elapsed:.3f}s  {mbps:.1f} MB/s"
    )
    return 0


def cmd_decompress(args) -> int:
    with open(args.input, "rb") as fh:
        cont = read_container(fh.read())
    if cont.header.alpha_dropped:
        print(
            "note: container was written with --drop-alpha; output is RGB",
            file=sys.stderr,
        )
    image = decompress(cont, threads=args.threads)
    format = args.format
    if format is None:
        format = _EXT_FORMAT.get(Path(args.output).suffix.lower())
    if format is None:
        format = _CHANNEL_FORMAT[image.shape[2]]
    _atomic_write(args.output, write_image(image, format))
    return 0


def _psnr_records(matrix):
    records = []
    n = matrix.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            value = matrix[i, j]
            records.append(
                {
                    "plane_i": i,
                    "plane_j": j,
                    "psnr_db": "inf" if math.isinf(value) else value,
                }
            )
    return records


def cmd_analyze(args) -> int:
    image = _load_raster(args)
    config = _config_from(args)
    h, w, _ = image.shape
    step = args.patch_size
    patches = []
    for r in range(0, h, step):
        for c in range(0, w, step):
            tile = np.ascontiguousarray(image[r : r + step, c : c + step])
            entry = {
                "row": r,
                "col": c,
                "height": tile.shape[0],
                "width": tile.shape[1],
                "entropy": [
                    {"stage": stage, "entropy_bits": bits}
                    for stage, bits in entropy_trace(tile, config).items()
                ],
            }
            if args.psnr:
                entry["psnr_raw"] = _psnr_records(psnr_matrix(tile, "raw"))
                entry["psnr_projected"] = _psnr_records(psnr_matrix(tile, "projected"))
            patches.append(entry)
    report = {
        "source": str(args.input),
        "height": h,
        "width": w,
        "channels": image.shape[2],
        "patches": patches,
    }
    text = json.dumps(report, indent=2)
    if args.output:
        _atomic_write(args.output, text.encode() + b"\n")
    else:
        print(text)
    return 0


_ABLATION_ROWS = (
    ("lzw", CompressionConfig(enable_projection=False, enable_bitplane=False)),
    ("lzw+projection", CompressionConfig(enable_bitplane=False)),
    ("lzw+projection+bitplane", CompressionConfig()),
)


def _bench_corpus(args):
    if args.synthetic:
        return [
            (f"synthetic-{i}", img)
            for i, img in enumerate(corpus(args.synthetic, args.seed))
        ]
    if not args.corpus:
        raise CodecError("bench needs --synthetic N or --corpus DIR")
    paths = sorted(p for p in Path(args.corpus).iterdir() if p.is_file())
    images = [(p.name, read_image(p)) for p in paths]
    if not images:
        raise CodecError(f"no rasters found in {args.corpus}")
    return images


def cmd_bench(args) -> int:
    images = _bench_corpus(args)
    rows = []
    if args.ablation:
        combos = _ABLATION_ROWS
    else:
        combos = (("requested", _config_from(args)),)
    for name, base in combos:
        config = CompressionConfig(
            patch_size=args.patch_size,
            enable_projection=base.enable_projection,
            enable_bitplane=base.enable_bitplane,
            lzw_max_width=args.lzw_max_width,
        )
        total_in = total_out = 0
        peak_payload = 0
        start = time.perf_counter()
        for label, image in images:
            blob = compress(image, config, threads=args.threads)
            payload = sum(r.enc_len for r in read_container(blob).records)
            peak_payload = max(peak_payload, payload)
            total_in += image.nbytes
            total_out += len(blob)
            rows.append(
                (name, label, image.nbytes, len(blob),
                 compression_ratio(image.nbytes, len(blob)), payload)
            )
        elapsed = time.perf_counter() - start
        rows.append(
            (name, "aggregate", total_in, total_out,
             compression_ratio(total_in, total_out), peak_payload)
        )
        print(
            f"[{name}] {total_in / elapsed / 1e6:.1f} MB/s over {len(images)} images "
            f"({BACKEND} backend)",
            file=sys.stderr,
        )
    header = ("config", "image", "original", "compressed", "ratio", "peak_payload")
    if args.csv:
        print(",".join(header))
        for row in rows:
            print(",".join(f"{v:.6f}" if isinstance(v, float) else str(v) for v in row))
    else:
        widths = [
            max(len(header[i]), max(len(_cell(row[i])) for row in rows))
            for i in range(len(header))
        ]
        print("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)))
        for row in rows:
            print("  ".join(_cell(v).ljust(widths[i]) for i, v in enumerate(row)))
    return 0


def _cell(value):
    return f"{value:.6f}" if isinstance(value, float) else str(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slidecodec",
        description="Lossless patch-based image codec with projection, "
        "bit-plane, and LZW stages.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="raster file to container")
    p.add_argument("input")
    p.add_argument("output")
    _add_stage_flags(p)
    p.add_argument("--drop-alpha", action="store_true",
                   help="discard the alpha channel of RGBA input (lossy)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_raster_input_flags(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="container to raster file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--format", choices=("pgm", "ppm", "pam", "raw"),
                   help="output format (default: from extension, then channel count)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("analyze", help="entropy trace and optional plane PSNR, as JSON")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    _add_stage_flags(p)
    p.add_argument("--psnr", action="store_true", help="add plane-pair PSNR records")
    _add_raster_input_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="compression ratio table over a corpus")
    p.add_argument("--corpus", help="directory of raster files")
    p.add_argument("--synthetic", type=int, metavar="N",
                   help="use N generated slide-like images")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ablation", action="store_true",
                   help="compare lzw / +projection / +bitplane stage combinations")
    _add_stage_flags(p)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CodecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
