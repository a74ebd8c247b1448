"""Archive container: header, crop metadata, patch index, and payload blobs.

Byte-exact layout, all integers little-endian:

    magic            4 bytes, ASCII "WISE"
    version          u16 (this writer emits 1; readers reject anything newer)
    flags            u16: bit 0 = alpha channel was dropped,
                          bits 1-5 = LZW max code width (0 means default 16)
    original width   u32
    original height  u32
    channels         u8
    bit depth        u8 (must be 8)
    patch size       u32
    removed rows     varint count, then varint deltas of the sorted index list
                     (first index absolute, then gaps)
    removed cols     same encoding
    patch count      u32
    patch records    per patch: origin row u32, origin col u32, patch height
                     u32, patch width u32, uncompressed length u64, compressed
                     length u64, stage mask u8
    payloads         all blobs concatenated in index order

Patch records must tile the cropped image (original minus removed rows and
columns) in row-major order with no overlap and no gap; writing validates this
and reading re-validates it. Varints are the usual 7-bits-per-byte encoding
with the high bit as a continuation flag.
"""

import struct
from dataclasses import dataclass, field

from .errors import (
    BadMagicError,
    IndexInconsistencyError,
    StructuralError,
    TruncatedStreamError,
    UnsupportedVersionError,
)

__all__ = [
    "MAGIC",
    "VERSION",
    "STAGE_PROJECTION",
    "STAGE_BITPLANE",
    "STAGE_LZW",
    "ContainerHeader",
    "PatchRecord",
    "Container",
    "write_container",
    "read_container",
]

MAGIC = b"WISE"
VERSION = 1

STAGE_PROJECTION = 1
STAGE_BITPLANE = 2
STAGE_LZW = 4

_FLAG_ALPHA = 0x0001
_WIDTH_SHIFT = 1
_WIDTH_MASK = 0x1F


@dataclass(frozen=True)
class ContainerHeader:
    original_width: int
    original_height: int
    channels: int
    patch_size: int
    alpha_dropped: bool = False
    lzw_max_width: int = 16
    version: int = VERSION
    bit_depth: int = 8


@dataclass(frozen=True)
class PatchRecord:
    row: int
    col: int
    height: int
    width: int
    raw_len: int
    enc_len: int
    stage_mask: int


@dataclass(frozen=True)
class Container:
    header: ContainerHeader
    removed_rows: tuple
    removed_cols: tuple
    records: tuple
    payloads: tuple = field(repr=False)


def _expected_tiling(header, n_removed_rows, n_removed_cols):
    """Row-major tile grid the patch index must match exactly."""
    ch = header.original_height - n_removed_rows
    cw = header.original_width - n_removed_cols
    p = header.patch_size
    tiles = []
    if ch > 0 and cw > 0:
        for r in range(0, ch, p):
            for c in range(0, cw, p):
                tiles.append((r, c, min(p, ch - r), min(p, cw - c)))
    return tiles


def _check_index_list(name, indices, bound):
    prev = -1
    for i in indices:
        if not prev < i < bound:
            raise StructuralError(
                f"removed {name} indices must be strictly increasing and below {bound}"
            )
        prev = i


def _validate(header, removed_rows, removed_cols, records, payloads):
    if header.original_width < 1 or header.original_height < 1:
        raise StructuralError("original dimensions must be positive")
    if header.channels not in (1, 3, 4):
        raise StructuralError(f"unsupported channel count {header.channels}")
    if header.bit_depth != 8:
        raise StructuralError("only 8-bit samples are supported")
    if header.patch_size < 1:
        raise StructuralError("patch size must be positive")
    if not 9 <= header.lzw_max_width <= 20:
        raise StructuralError(f"LZW max width {header.lzw_max_width} outside [9, 20]")
    _check_index_list("row", removed_rows, header.original_height)
    _check_index_list("column", removed_cols, header.original_width)
    if len(records) != len(payloads):
        raise StructuralError(
            f"{len(records)} patch records but {len(payloads)} payloads"
        )
    for i, (rec, blob) in enumerate(zip(records, payloads)):
        if rec.enc_len != len(blob):
            raise StructuralError(
                f"patch {i}: record says {rec.enc_len} compressed bytes, blob has {len(blob)}"
            )
        if rec.stage_mask & ~(STAGE_PROJECTION | STAGE_BITPLANE | STAGE_LZW):
            raise StructuralError(f"patch {i}: unknown stage mask bits {rec.stage_mask:#x}")
        if rec.raw_len != rec.height * rec.width * header.channels:
            raise StructuralError(
                f"patch {i}: uncompressed length {rec.raw_len} does not match "
                f"{rec.height}x{rec.width}x{header.channels}"
            )
    expected = _expected_tiling(header, len(removed_rows), len(removed_cols))
    actual = [(r.row, r.col, r.height, r.width) for r in records]
    if actual != expected:
        raise IndexInconsistencyError(
            f"patch index does not tile the cropped image: expected {len(expected)} "
            f"row-major tiles, got {actual[:4]}{'...' if len(actual) > 4 else ''}"
        )


def _put_varint(out, value):
    while value >= 0x80:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    out.append(value)


def _put_index_list(out, indices):
    _put_varint(out, len(indices))
    prev = 0
    for idx in indices:
        _put_varint(out, idx - prev)
        prev = idx


def write_container(header, removed_rows, removed_cols, records, payloads) -> bytes:
    """Serialize a container; identical inputs always yield identical bytes."""
    removed_rows = tuple(removed_rows)
    removed_cols = tuple(removed_cols)
    records = tuple(records)
    payloads = tuple(bytes(p) for p in payloads)
    _validate(header, removed_rows, removed_cols, records, payloads)

    flags = (_FLAG_ALPHA if header.alpha_dropped else 0) | (
        header.lzw_max_width << _WIDTH_SHIFT
    )
    out = bytearray()
    out += MAGIC
    out += struct.pack(
        "<HHIIBBI",
        header.version,
        flags,
        header.original_width,
        header.original_height,
        header.channels,
        header.bit_depth,
        header.patch_size,
    )
    _put_index_list(out, removed_rows)
    _put_index_list(out, removed_cols)
    out += struct.pack("<I", len(records))
    for rec in records:
        out += struct.pack(
            "<IIIIQQB",
            rec.row,
            rec.col,
            rec.height,
            rec.width,
            rec.raw_len,
            rec.enc_len,
            rec.stage_mask,
        )
    for blob in payloads:
        out += blob
    return bytes(out)


class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, n, what):
        if self.pos + n > len(self.data):
            raise TruncatedStreamError(
                f"container ends inside {what} (offset {self.pos}, wanted {n} bytes)"
            )
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt, what):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))

    def varint(self, what):
        shift = 0
        value = 0
        while True:
            byte = self.take(1, what)[0]
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value
            shift += 7
            if shift > 63:
                raise StructuralError(f"varint too long in {what}")

    def index_list(self, what):
        count = self.varint(what)
        indices = []
        prev = 0
        for _ in range(count):
            prev += self.varint(what)
            indices.append(prev)
        return tuple(indices)


def read_container(data: bytes) -> Container:
    """Parse container bytes; exact inverse of :func:`write_container`."""
    r = _Reader(bytes(data))
    magic = r.take(4, "magic")
    if magic != MAGIC:
        raise BadMagicError(f"not a container: magic {magic!r} != {MAGIC!r}")
    version, flags = r.unpack("<HH", "header")
    if version > VERSION:
        raise UnsupportedVersionError(
            f"container version {version} is newer than supported version {VERSION}"
        )
    width, height, channels, bit_depth, patch_size = r.unpack("<IIBBI", "header")
    lzw_max_width = (flags >> _WIDTH_SHIFT) & _WIDTH_MASK or 16
    header = ContainerHeader(
        original_width=width,
        original_height=height,
        channels=channels,
        patch_size=patch_size,
        alpha_dropped=bool(flags & _FLAG_ALPHA),
        lzw_max_width=lzw_max_width,
        version=version,
        bit_depth=bit_depth,
    )
    removed_rows = r.index_list("removed-rows block")
    removed_cols = r.index_list("removed-cols block")
    (count,) = r.unpack("<I", "patch count")
    records = []
    for i in range(count):
        row, col, ph, pw, raw_len, enc_len, mask = r.unpack(
            "<IIIIQQB", f"patch record {i}"
        )
        records.append(PatchRecord(row, col, ph, pw, raw_len, enc_len, mask))
    payloads = []
    for i, rec in enumerate(records):
        payloads.append(bytes(r.take(rec.enc_len, f"payload of patch {i}")))
    if r.pos != len(r.data):
        raise StructuralError(f"{len(r.data) - r.pos} trailing bytes after payloads")
    records = tuple(records)
    payloads = tuple(payloads)
    _validate(header, removed_rows, removed_cols, records, payloads)
    return Container(header, removed_rows, removed_cols, records, payloads)
