"""Bit-plane transposition: regroup bit position k of every byte into its own plane.

For each channel the h*w residual bytes (row-major pixel order) are split into
8 planes, one per bit position. Plane k holds bit k of every byte, packed 8
pixels per byte with the earliest pixel in the most significant bit, and a
zero-padded final byte when h*w is not a multiple of 8. Planes are emitted most
significant first (k = 7 down to 0), channels in order, so the high planes --
which are near-constant after zigzag residual coding -- form long uniform runs
at the front of each channel's section.

The stream length is always channels * 8 * ceil(h*w / 8) bytes; transposition
by itself is not compression, it only rearranges bits for the dictionary stage.
"""

import numpy as np

from .errors import StructuralError

__all__ = ["to_bitplanes", "from_bitplanes", "effective_bit_histogram", "plane_stream_size"]

_HIGH_BIT = np.full(256, -1, dtype=np.int8)  # highest set bit position; -1 for zero
for _v in range(1, 256):
    _HIGH_BIT[_v] = _v.bit_length() - 1


def plane_stream_size(height: int, width: int, channels: int) -> int:
    """Exact byte length of the transposed stream for the given patch shape."""
    return channels * 8 * ((height * width + 7) // 8)


def to_bitplanes(residuals: np.ndarray) -> bytes:
    """Transpose an (h, w, c) uint8 patch into its packed bit-plane stream."""
    r = np.asarray(residuals)
    if r.dtype != np.uint8 or r.ndim != 3:
        raise StructuralError(f"expected (h, w, c) uint8 array, got {r.dtype} {r.shape}")
    h, w, c = r.shape
    out = []
    for ch in range(c):
        pixels = np.ascontiguousarray(r[:, :, ch]).reshape(-1)
        # (npix, 8) with column 0 = bit 7: rows of the transpose are already
        # ordered most-significant plane first.
        bits = np.unpackbits(pixels[:, None], axis=1)
        out.append(np.packbits(bits.T, axis=1).tobytes())
    return b"".join(out)


def from_bitplanes(stream: bytes, height: int, width: int, channels: int) -> np.ndarray:
    """Exact inverse of :func:`to_bitplanes`; pad bits are ignored."""
    expected = plane_stream_size(height, width, channels)
    if len(stream) != expected:
        raise StructuralError(
            f"bit-plane stream is {len(stream)} bytes, expected {expected} "
            f"for a {height}x{width}x{channels} patch"
        )
    npix = height * width
    plane_len = (npix + 7) // 8
    data = np.frombuffer(stream, dtype=np.uint8).reshape(channels, 8, plane_len)
    out = np.empty((height, width, channels), dtype=np.uint8)
    for ch in range(channels):
        bits = np.unpackbits(data[ch], axis=1)[:, :npix]
        out[:, :, ch] = np.packbits(bits, axis=0).reshape(height, width)
    return out


def effective_bit_histogram(residuals: np.ndarray) -> dict:
    """Count bytes by the position of their highest set bit.

    Returns ``{"zero": n, "counts": [c0, ..., c7]}`` where ``counts[k]`` is the
    number of bytes whose highest set bit sits at position k. The zero count
    plus all position counts always sums to the total byte count.
    """
    r = np.asarray(residuals)
    if r.dtype != np.uint8:
        raise StructuralError(f"expected uint8 samples, got {r.dtype}")
    pos = _HIGH_BIT[r.reshape(-1)]
    hist = np.bincount(pos + 1, minlength=9)
    return {"zero": int(hist[0]), "counts": [int(n) for n in hist[1:]]}
