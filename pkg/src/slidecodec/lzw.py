"""Dictionary coding stage: variable-width LZW over byte streams.

Encoding and decoding dispatch to the compiled kernels in
``slidecodec._speedups`` when that extension was built, and fall back to the
pure-Python kernels in ``slidecodec._lzw_py`` otherwise (or when the
``SLIDECODEC_PURE`` environment variable is set). Both backends produce
byte-identical streams; ``BACKEND`` names the one in use.
"""

import os
from typing import NamedTuple

from . import _lzw_py
from ._lzw_py import CLEAR, END, FIRST_CODE, MIN_WIDTH

__all__ = [
    "BACKEND",
    "CLEAR",
    "END",
    "DEFAULT_MAX_WIDTH",
    "CodeTrace",
    "lzw_encode",
    "lzw_decode",
    "lzw_encode_trace",
]

DEFAULT_MAX_WIDTH = 16

if os.environ.get("SLIDECODEC_PURE"):
    _kernel = _lzw_py
    BACKEND = "python"
else:
    try:
        from . import _speedups as _kernel

        BACKEND = "native"
    except ImportError:
        _kernel = _lzw_py
        BACKEND = "python"


class CodeTrace(NamedTuple):
    """Full encoder record: the code sequence plus its packed byte stream.

    ``peak_next_code`` is the largest dictionary size the encoder reached,
    for checking the 2**max_width bound.
    """

    codes: tuple
    packed: bytes
    initial_code_width: int
    max_code_width: int
    peak_next_code: int


def _check_width(max_width: int) -> None:
    if not 9 <= max_width <= 20:
        raise ValueError(f"max_width must be in [9, 20], got {max_width}")


def lzw_encode(data: bytes, max_width: int = DEFAULT_MAX_WIDTH) -> bytes:
    """Encode a byte string; empty input encodes to just the END code."""
    _check_width(max_width)
    return _kernel.encode(bytes(data), max_width)


def lzw_decode(data: bytes, max_width: int = DEFAULT_MAX_WIDTH) -> bytes:
    """Exact inverse of :func:`lzw_encode` for the same max_width."""
    _check_width(max_width)
    return _kernel.decode(bytes(data), max_width)


def lzw_encode_trace(data: bytes, max_width: int = DEFAULT_MAX_WIDTH) -> CodeTrace:
    """Encode while recording the emitted code sequence.

    Always runs the pure-Python path (it instruments every step); the packed
    bytes are identical to :func:`lzw_encode`'s output.
    """
    _check_width(max_width)
    capacity = 1 << max_width
    table: dict[int, int] = {}
    next_code = FIRST_CODE
    peak = FIRST_CODE
    width = MIN_WIDTH
    acc = 0
    nbits = 0
    out = bytearray()
    codes = []
    prev = -1

    def put(code: int) -> None:
        nonlocal acc, nbits
        codes.append(code)
        acc = (acc << width) | code
        nbits += width
        while nbits >= 8:
            nbits -= 8
            out.append((acc >> nbits) & 0xFF)
        acc &= (1 << nbits) - 1  # drop flushed bits so acc stays small

    for b in bytes(data):
        if prev < 0:
            prev = b
            continue
        key = (prev << 8) | b
        code = table.get(key)
        if code is not None:
            prev = code
            continue
        put(prev)
        if next_code < capacity:
            table[key] = next_code
            next_code += 1
            peak = max(peak, next_code)
            if next_code - 1 >= (1 << width):
                width += 1
        else:
            put(CLEAR)
            table.clear()
            next_code = FIRST_CODE
            width = MIN_WIDTH
        prev = b
    if prev >= 0:
        put(prev)
        # mirror the decoder's entry for the final data code (see _lzw_py)
        if FIRST_CODE < next_code < capacity:
            next_code += 1
            peak = max(peak, next_code)
            if next_code - 1 >= (1 << width):
                width += 1
    put(END)
    if nbits:
        out.append((acc << (8 - nbits)) & 0xFF)
    return CodeTrace(tuple(codes), bytes(out), MIN_WIDTH, max_width, peak)
