import numpy as np
import pytest

from slidecodec.bitplane import (
    effective_bit_histogram,
    from_bitplanes,
    plane_stream_size,
    to_bitplanes,
)
from slidecodec.errors import StructuralError

from oracles import oracle_to_bitplanes


def residuals(values, channels=1):
    return np.asarray(values, dtype=np.uint8).reshape(1, -1, channels)


def test_golden_three_byte_vector():
    # planes emitted most-significant first: six empty planes, then 0x80, 0xC0
    stream = to_bitplanes(residuals([0x03, 0x01, 0x00]))
    assert stream == bytes([0, 0, 0, 0, 0, 0, 0x80, 0xC0])


def test_golden_three_byte_vector_inverse():
    stream = bytes([0, 0, 0, 0, 0, 0, 0x80, 0xC0])
    r = from_bitplanes(stream, 1, 3, 1)
    assert r.reshape(-1).tolist() == [0x03, 0x01, 0x00]


def test_single_set_position_low():
    stream = to_bitplanes(residuals([0x01] * 8))
    assert stream == bytes([0] * 7 + [0xFF])


def test_single_set_position_high():
    stream = to_bitplanes(residuals([0x80] * 8))
    assert stream == bytes([0xFF] + [0] * 7)


def test_all_zero_stream_round_trip():
    r = np.zeros((4, 5, 3), dtype=np.uint8)
    stream = to_bitplanes(r)
    assert stream == bytes(len(stream))
    assert (from_bitplanes(stream, 4, 5, 3) == 0).all()


@pytest.mark.parametrize("shape", [(1, 1, 1), (1, 3, 1), (3, 1, 3), (2, 4, 1),
                                   (5, 5, 3), (1, 17, 3), (9, 7, 1)])
def test_round_trip_shapes(shape):
    rng = np.random.default_rng(sum(shape))
    r = rng.integers(0, 256, shape, dtype=np.uint8)
    stream = to_bitplanes(r)
    assert len(stream) == plane_stream_size(*shape)
    assert (from_bitplanes(stream, *shape) == r).all()


def test_size_law():
    # 8 planes per channel, each ceil(h*w/8) bytes; never smaller than input
    for h, w, c in [(1, 1, 1), (3, 3, 3), (10, 10, 1), (13, 7, 3)]:
        assert plane_stream_size(h, w, c) == c * 8 * ((h * w + 7) // 8)
        assert plane_stream_size(h, w, c) >= h * w * c


def test_matches_scalar_oracle():
    rng = np.random.default_rng(21)
    for _ in range(30):
        h, w = rng.integers(1, 10, 2)
        c = int(rng.choice([1, 3]))
        r = rng.integers(0, 256, (h, w, c), dtype=np.uint8)
        assert to_bitplanes(r) == oracle_to_bitplanes(r)


def test_pad_bits_are_zero_and_ignored():
    r = residuals([0xFF, 0xFF, 0xFF])
    stream = to_bitplanes(r)
    assert stream == bytes([0xE0] * 8)
    assert (from_bitplanes(stream, 1, 3, 1) == r).all()


def test_wrong_stream_size_rejected():
    with pytest.raises(StructuralError):
        from_bitplanes(bytes(7), 1, 3, 1)
    with pytest.raises(StructuralError):
        from_bitplanes(bytes(9), 1, 3, 1)


def test_histogram_all_zero():
    hist = effective_bit_histogram(np.zeros((3, 3, 1), dtype=np.uint8))
    assert hist["zero"] == 9
    assert hist["counts"] == [0] * 8


def test_histogram_golden():
    hist = effective_bit_histogram(residuals([0x01, 0x02, 0x80]))
    assert hist["zero"] == 0
    assert hist["counts"] == [1, 1, 0, 0, 0, 0, 0, 1]


def test_histogram_sums_to_total():
    rng = np.random.default_rng(22)
    r = rng.integers(0, 256, (20, 20, 3), dtype=np.uint8)
    hist = effective_bit_histogram(r)
    assert hist["zero"] + sum(hist["counts"]) == r.size


def test_histogram_uniform_top_fraction():
    # highest set bit lands at position 7 for half of uniform random bytes
    rng = np.random.default_rng(23)
    r = rng.integers(0, 256, (100000, 1, 1), dtype=np.uint8)
    hist = effective_bit_histogram(r)
    assert abs(hist["counts"][7] / r.size - 0.5) < 0.05
