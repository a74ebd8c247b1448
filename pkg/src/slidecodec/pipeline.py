"""End-to-end codec: crop, tile, per-tile stage chain, container assembly.

Compression runs four steps. Empty rows and columns (every sample zero) are
cropped and their indices recorded. The cropped image is cut into
patch_size x patch_size tiles, edge tiles keeping their true size. Each tile
passes through the enabled stages in order: projection residuals, bit-plane
transposition, LZW. Stage choices are recorded per tile in a stage mask so
ablation containers decode correctly. Tiles are processed by an optional
thread pool; results are committed in row-major tile order, so output bytes
do not depend on the thread count.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bitplane import from_bitplanes, plane_stream_size, to_bitplanes
from .container import (
    STAGE_BITPLANE,
    STAGE_LZW,
    STAGE_PROJECTION,
    Container,
    ContainerHeader,
    PatchRecord,
    read_container,
    write_container,
)
from .errors import CodecError, CorruptStreamError, StructuralError, UnsupportedLayoutError
from .lzw import DEFAULT_MAX_WIDTH, lzw_decode, lzw_encode
from .transform import project, unproject

__all__ = [
    "CompressionConfig",
    "CropResult",
    "compress",
    "crop_empty",
    "decompress",
    "strip_alpha",
    "uncrop",
]


@dataclass(frozen=True)
class CompressionConfig:
    """Stage toggles and knobs; defaults give the full pipeline."""

    patch_size: int = 5000
    drop_alpha: bool = False
    enable_projection: bool = True
    enable_bitplane: bool = True
    lzw_max_width: int = DEFAULT_MAX_WIDTH

    def __post_init__(self):
        if self.patch_size < 1:
            raise ValueError(f"patch_size must be positive, got {self.patch_size}")
        if not 9 <= self.lzw_max_width <= 20:
            raise ValueError(f"lzw_max_width {self.lzw_max_width} outside [9, 20]")


@dataclass(frozen=True)
class CropResult:
    cropped: np.ndarray
    removed_rows: tuple
    removed_cols: tuple
    original_height: int
    original_width: int


def _check_image(image, channels=(1, 3, 4)):
    if not isinstance(image, np.ndarray) or image.dtype != np.uint8:
        raise UnsupportedLayoutError("image must be a uint8 ndarray")
    if image.ndim != 3:
        raise UnsupportedLayoutError(
            f"image must be height x width x channels, got shape {image.shape}"
        )
    h, w, c = image.shape
    if h < 1 or w < 1:
        raise UnsupportedLayoutError(f"image dimensions must be positive, got {h}x{w}")
    if c not in channels:
        raise UnsupportedLayoutError(f"unsupported channel count {c}")
    return image


def crop_empty(image) -> CropResult:
    """Drop rows and columns that are entirely zero across all channels."""
    image = _check_image(image)
    h, w, _ = image.shape
    row_live = image.any(axis=(1, 2))
    col_live = image.any(axis=(0, 2))
    cropped = image[row_live][:, col_live]
    return CropResult(
        cropped=cropped,
        removed_rows=tuple(np.flatnonzero(~row_live).tolist()),
        removed_cols=tuple(np.flatnonzero(~col_live).tolist()),
        original_height=h,
        original_width=w,
    )


def uncrop(result: CropResult) -> np.ndarray:
    """Re-insert zero rows/columns at the recorded indices."""
    cropped = result.cropped
    if not isinstance(cropped, np.ndarray) or cropped.ndim != 3:
        raise StructuralError("cropped image must be height x width x channels")
    h, w = result.original_height, result.original_width
    ch, cw, nchan = cropped.shape
    if ch + len(result.removed_rows) != h or cw + len(result.removed_cols) != w:
        raise StructuralError(
            f"crop metadata inconsistent: {ch}x{cw} cropped plus "
            f"{len(result.removed_rows)}/{len(result.removed_cols)} removed "
            f"does not give {h}x{w}"
        )
    out = np.zeros((h, w, nchan), dtype=np.uint8)
    kept_rows = np.setdiff1d(np.arange(h), np.asarray(result.removed_rows, dtype=np.intp))
    kept_cols = np.setdiff1d(np.arange(w), np.asarray(result.removed_cols, dtype=np.intp))
    if len(kept_rows) != ch or len(kept_cols) != cw:
        raise StructuralError("removed indices out of range or duplicated")
    if ch and cw:
        out[np.ix_(kept_rows, kept_cols)] = cropped
    return out


def strip_alpha(image):
    """Return (image, alpha_dropped); warns and no-ops on non-RGBA input."""
    image = _check_image(image)
    if image.shape[2] != 4:
        warnings.warn(
            f"strip_alpha requested on {image.shape[2]}-channel image; nothing to drop",
            stacklevel=2,
        )
        return image, False
    return np.ascontiguousarray(image[:, :, :3]), True


def _tile_grid(height, width, patch_size):
    for r in range(0, height, patch_size):
        for c in range(0, width, patch_size):
            yield r, c, min(patch_size, height - r), min(patch_size, width - c)


def _encode_tile(tile, row, col, config):
    h, w, c = tile.shape
    mask = STAGE_LZW
    arr = tile
    if config.enable_projection:
        arr = project(np.ascontiguousarray(arr))
        mask |= STAGE_PROJECTION
    if config.enable_bitplane:
        stream = to_bitplanes(arr)
        mask |= STAGE_BITPLANE
    else:
        stream = arr.tobytes()
    payload = lzw_encode(stream, config.lzw_max_width)
    record = PatchRecord(row, col, h, w, h * w * c, len(payload), mask)
    return record, payload


def _decode_tile(record, payload, channels, max_width):
    try:
        data = payload
        if record.stage_mask & STAGE_LZW:
            data = lzw_decode(data, max_width)
        if record.stage_mask & STAGE_BITPLANE:
            expected = plane_stream_size(record.height, record.width, channels)
        else:
            expected = record.raw_len
        if len(data) != expected:
            raise CorruptStreamError(
                f"stage chain produced {len(data)} bytes, expected {expected}"
            )
        if record.stage_mask & STAGE_BITPLANE:
            arr = from_bitplanes(data, record.height, record.width, channels)
        else:
            arr = np.frombuffer(data, dtype=np.uint8).reshape(
                record.height, record.width, channels
            )
        if record.stage_mask & STAGE_PROJECTION:
            arr = unproject(arr)
        return arr
    except CodecError as exc:
        raise type(exc)(
            f"patch at row {record.row}, col {record.col}: {exc}"
        ) from exc


def _run(jobs, worker, threads):
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, jobs))
    return [worker(j) for j in jobs]


def compress(image, config=None, threads=1) -> bytes:
    """Compress an image into container bytes; inverse of :func:`decompress`."""
    config = config or CompressionConfig()
    image = _check_image(image)
    alpha_dropped = False
    if config.drop_alpha:
        image, alpha_dropped = strip_alpha(image)
    if image.shape[2] == 4:
        raise UnsupportedLayoutError(
            "4-channel input needs drop_alpha=True (--drop-alpha); "
            "the projection stage is defined for 1 or 3 channels"
        )
    crop = crop_empty(image)
    ch, cw, nchan = crop.cropped.shape
    tiles = [
        (crop.cropped[r : r + th, c : c + tw], r, c)
        for r, c, th, tw in _tile_grid(ch, cw, config.patch_size)
    ]
    results = _run(tiles, lambda t: _encode_tile(t[0], t[1], t[2], config), threads)
    header = ContainerHeader(
        original_width=crop.original_width,
        original_height=crop.original_height,
        channels=nchan,
        patch_size=config.patch_size,
        alpha_dropped=alpha_dropped,
        lzw_max_width=config.lzw_max_width,
    )
    return write_container(
        header,
        crop.removed_rows,
        crop.removed_cols,
        [rec for rec, _ in results],
        [blob for _, blob in results],
    )


def decompress(data, threads=1) -> np.ndarray:
    """Rebuild the exact image from container bytes (or a parsed Container)."""
    cont = data if isinstance(data, Container) else read_container(data)
    hdr = cont.header
    ch = hdr.original_height - len(cont.removed_rows)
    cw = hdr.original_width - len(cont.removed_cols)
    cropped = np.zeros((ch, cw, hdr.channels), dtype=np.uint8)
    decoded = _run(
        list(zip(cont.records, cont.payloads)),
        lambda job: _decode_tile(job[0], job[1], hdr.channels, hdr.lzw_max_width),
        threads,
    )
    for record, tile in zip(cont.records, decoded):
        cropped[record.row : record.row + record.height,
                record.col : record.col + record.width] = tile
    return uncrop(
        CropResult(cropped, cont.removed_rows, cont.removed_cols,
                   hdr.original_height, hdr.original_width)
    )
