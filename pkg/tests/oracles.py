"""Independent brute-force reference implementations.

Everything here trades speed for obviousness: scalar loops, byte-string
dictionaries, bit-at-a-time packing. The test suites compare the package's
vectorized/compiled paths against these, and the frozen golden values in the
tests were recorded from these functions.
"""

import math

CLEAR = 256
END = 257
FIRST = 258
MIN_WIDTH = 9


def oracle_lzw_codes(data: bytes, max_width: int = 16) -> list:
    """Greedy longest-match LZW by literal dictionary search over byte strings."""
    capacity = 1 << max_width
    table = {bytes([b]): b for b in range(256)}
    next_code = FIRST
    codes = []
    i = 0
    n = len(data)
    while i < n:
        # longest dictionary entry starting at i, found by extension
        j = i + 1
        while j < n and data[i:j + 1] in table:
            j += 1
        codes.append(table[data[i:j]])
        if j < n:
            if next_code < capacity:
                table[data[i:j + 1]] = next_code
                next_code += 1
            else:
                codes.append(CLEAR)
                table = {bytes([b]): b for b in range(256)}
                next_code = FIRST
        i = j
    codes.append(END)
    return codes


def oracle_pack(codes: list, max_width: int = 16) -> bytes:
    """Bit-pack a code sequence MSB-first with the width-growth schedule."""
    bits = []
    width = MIN_WIDTH
    next_code = FIRST
    for code in codes:
        bits.extend((code >> k) & 1 for k in range(width - 1, -1, -1))
        if code == CLEAR:
            width = MIN_WIDTH
            next_code = FIRST
        elif code != END:
            if next_code < (1 << max_width):
                next_code += 1
                if next_code - 1 >= (1 << width):
                    width += 1
    while len(bits) % 8:
        bits.append(0)
    out = bytearray()
    for k in range(0, len(bits), 8):
        byte = 0
        for b in bits[k:k + 8]:
            byte = (byte << 1) | b
        out.append(byte)
    return bytes(out)


def oracle_project(patch):
    """Scalar residual transform: row diff, column diff, channel tie, zigzag."""
    h = len(patch)
    w = len(patch[0])
    c = len(patch[0][0])
    x = [[[int(patch[i][j][k]) for k in range(c)] for j in range(w)] for i in range(h)]
    rows = [[[x[i][j][k] - (x[i - 1][j][k] if i else 0) for k in range(c)]
             for j in range(w)] for i in range(h)]
    cols = [[[rows[i][j][k] - (rows[i][j - 1][k] if j else 0) for k in range(c)]
             for j in range(w)] for i in range(h)]
    if c == 3:
        for i in range(h):
            for j in range(w):
                for k in (1, 2):
                    cols[i][j][k] -= cols[i][j][0]
    out = [[[0] * c for _ in range(w)] for _ in range(h)]
    for i in range(h):
        for j in range(w):
            for k in range(c):
                v = cols[i][j][k] % 256
                s = v - 256 if v >= 128 else v
                out[i][j][k] = 2 * s if s >= 0 else -2 * s - 1
    return out


def oracle_to_bitplanes(patch) -> bytes:
    """Bit-matrix transpose by indexing every bit, planes 7 down to 0."""
    h = len(patch)
    w = len(patch[0])
    c = len(patch[0][0])
    out = bytearray()
    for ch in range(c):
        flat = [int(patch[i][j][ch]) for i in range(h) for j in range(w)]
        for plane in range(7, -1, -1):
            bits = [(v >> plane) & 1 for v in flat]
            while len(bits) % 8:
                bits.append(0)
            for k in range(0, len(bits), 8):
                byte = 0
                for b in bits[k:k + 8]:
                    byte = (byte << 1) | b
                out.append(byte)
    return bytes(out)


def oracle_entropy(symbols) -> float:
    """Shannon entropy from a frequency table, plain dict and math.log2."""
    counts = {}
    for s in symbols:
        counts[s] = counts.get(s, 0) + 1
    n = len(symbols)
    h = 0.0
    for key in sorted(counts):
        p = counts[key] / n
        h -= p * math.log2(p)
    return h
