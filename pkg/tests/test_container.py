import numpy as np
import pytest

from slidecodec.container import (
    MAGIC,
    STAGE_BITPLANE,
    STAGE_LZW,
    STAGE_PROJECTION,
    VERSION,
    Container,
    ContainerHeader,
    PatchRecord,
    read_container,
    write_container,
)
from slidecodec.errors import (
    BadMagicError,
    IndexInconsistencyError,
    StructuralError,
    TruncatedStreamError,
    UnsupportedVersionError,
)
from slidecodec.pipeline import CompressionConfig, compress


def small_container(payload=b"\x01\x02", height=2, width=3, channels=1,
                    removed_rows=(), removed_cols=(), patch_size=16):
    header = ContainerHeader(width, height, channels, patch_size)
    ch = height - len(removed_rows)
    cw = width - len(removed_cols)
    rec = PatchRecord(0, 0, ch, cw, ch * cw * channels, len(payload),
                      STAGE_PROJECTION | STAGE_BITPLANE | STAGE_LZW)
    return header, removed_rows, removed_cols, (rec,), (payload,)


def test_round_trip_fields():
    header, rr, rc, recs, pays = small_container(removed_rows=(1,))
    blob = write_container(header, rr, rc, recs, pays)
    assert blob[:4] == MAGIC
    parsed = read_container(blob)
    assert parsed.header == header
    assert parsed.removed_rows == (1,)
    assert parsed.removed_cols == ()
    assert parsed.records == recs
    assert parsed.payloads == pays


def test_round_trip_from_real_compression():
    rng = np.random.default_rng(41)
    img = rng.integers(0, 256, (37, 23, 3), dtype=np.uint8)
    blob = compress(img, CompressionConfig(patch_size=16, lzw_max_width=12))
    parsed = read_container(blob)
    assert parsed.header.original_height == 37
    assert parsed.header.original_width == 23
    assert parsed.header.channels == 3
    assert parsed.header.lzw_max_width == 12
    assert parsed.header.version == VERSION
    assert len(parsed.records) == 6
    rows = [(r.row, r.col, r.height, r.width) for r in parsed.records]
    assert rows == [(0, 0, 16, 16), (0, 16, 16, 7), (16, 0, 16, 16),
                    (16, 16, 16, 7), (32, 0, 5, 16), (32, 16, 5, 7)]
    for rec, blob_ in zip(parsed.records, parsed.payloads):
        assert rec.enc_len == len(blob_)
        assert rec.raw_len == rec.height * rec.width * 3


def test_index_lists_round_trip_large_gaps():
    header = ContainerHeader(5, 1000, 1, 4096)
    removed = tuple(range(0, 1000, 7))
    rec_h = 1000 - len(removed)
    rec = PatchRecord(0, 0, rec_h, 5, rec_h * 5, 3, 0)
    blob = write_container(header, removed, (), (rec,), (b"abc",))
    parsed = read_container(blob)
    assert parsed.removed_rows == removed


def test_bad_magic():
    blob = write_container(*small_container())
    with pytest.raises(BadMagicError):
        read_container(b"JUNK" + blob[4:])


def test_unsupported_version():
    blob = bytearray(write_container(*small_container()))
    blob[4:6] = (99).to_bytes(2, "little")
    with pytest.raises(UnsupportedVersionError):
        read_container(bytes(blob))


def test_truncation_at_every_prefix():
    blob = write_container(*small_container())
    for cut in range(len(blob)):
        with pytest.raises(TruncatedStreamError) as err:
            read_container(blob[:cut])
        assert "offset" in str(err.value)


def test_trailing_bytes_rejected():
    blob = write_container(*small_container())
    with pytest.raises(StructuralError, match="trailing"):
        read_container(blob + b"\x00")


def test_alpha_flag_round_trip():
    header = ContainerHeader(3, 2, 3, 16, alpha_dropped=True)
    rec = PatchRecord(0, 0, 2, 3, 18, 2, STAGE_LZW)
    blob = write_container(header, (), (), (rec,), (b"hi",))
    assert read_container(blob).header.alpha_dropped is True


@pytest.mark.parametrize("width", [9, 12, 16, 20])
def test_width_flag_round_trip(width):
    header = ContainerHeader(3, 2, 1, 16, lzw_max_width=width)
    rec = PatchRecord(0, 0, 2, 3, 6, 2, 0)
    blob = write_container(header, (), (), (rec,), (b"hi",))
    assert read_container(blob).header.lzw_max_width == width


def test_tiling_mismatch_rejected():
    header = ContainerHeader(3, 2, 1, 16)
    rec = PatchRecord(0, 0, 1, 3, 3, 2, 0)  # misses the second row
    with pytest.raises(IndexInconsistencyError):
        write_container(header, (), (), (rec,), (b"hi",))


def test_overlapping_tiles_rejected():
    header = ContainerHeader(4, 4, 1, 2)
    recs = tuple(PatchRecord(r, c, 2, 2, 4, 1, 0)
                 for r, c in [(0, 0), (0, 0), (2, 0), (2, 2)])
    with pytest.raises(IndexInconsistencyError):
        write_container(header, (), (), recs, (b"a",) * 4)


def test_raw_len_mismatch_rejected():
    header = ContainerHeader(3, 2, 1, 16)
    rec = PatchRecord(0, 0, 2, 3, 5, 2, 0)
    with pytest.raises(StructuralError):
        write_container(header, (), (), (rec,), (b"hi",))


def test_payload_length_mismatch_rejected():
    header, rr, rc, recs, _ = small_container()
    with pytest.raises(StructuralError):
        write_container(header, rr, rc, recs, (b"wrong length",))


def test_unknown_stage_bits_rejected():
    header = ContainerHeader(3, 2, 1, 16)
    rec = PatchRecord(0, 0, 2, 3, 6, 2, 0x08)
    with pytest.raises(StructuralError):
        write_container(header, (), (), (rec,), (b"hi",))


def test_nonincreasing_removed_rows_rejected():
    header, _, rc, recs, pays = small_container(removed_rows=(1,))
    with pytest.raises(StructuralError):
        write_container(header, (1, 1), rc, recs, pays)


def test_removed_index_out_of_range_rejected():
    header, _, rc, recs, pays = small_container(removed_rows=(1,))
    with pytest.raises(StructuralError):
        write_container(header, (5,), rc, recs, pays)


def test_corrupted_index_fails_reparse():
    # flipping a record count byte must not pass re-validation
    header, rr, rc, recs, pays = small_container()
    blob = bytearray(write_container(header, rr, rc, recs, pays))
    # second byte of the big-endian-free little-endian u32 patch count
    pos = len(blob) - len(pays[0]) - 29 - 4
    blob[pos] ^= 0x01
    with pytest.raises((StructuralError, TruncatedStreamError, IndexInconsistencyError)):
        read_container(bytes(blob))


def test_zero_patch_container():
    # fully cropped image: no records, no payloads
    header = ContainerHeader(2, 2, 1, 16)
    blob = write_container(header, (0, 1), (0, 1), (), ())
    parsed = read_container(blob)
    assert parsed.records == ()
    assert parsed.payloads == ()
