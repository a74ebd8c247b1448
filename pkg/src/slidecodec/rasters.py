"""Flat raster ingestion and emission: binary PGM/PPM, PAM, and raw bytes.

Samples pass through untouched in both directions; only 8-bit depth
(maxval 255) is accepted. Raw mode is headerless interleaved bytes and needs
explicit dimensions.
"""

import numpy as np

from .errors import (
    ImageFormatError,
    MalformedHeaderError,
    TruncatedDataError,
    UnsupportedDepthError,
)

__all__ = ["read_image", "write_image", "sniff_format"]

_PAM_TUPLTYPES = {1: "GRAYSCALE", 3: "RGB", 4: "RGB_ALPHA"}


def _as_bytes(source):
    if isinstance(source, (bytes, bytearray, memoryview)):
        return bytes(source)
    if hasattr(source, "read"):
        return source.read()
    with open(source, "rb") as fh:
        return fh.read()


def sniff_format(data: bytes):
    """Format name from the magic bytes, or None for unrecognized data."""
    return {b"P5": "pgm", b"P6": "ppm", b"P7": "pam"}.get(data[:2])


def _next_token(data, pos):
    """Skip whitespace and # comments, return (token, new position)."""
    n = len(data)
    while pos < n:
        ch = data[pos : pos + 1]
        if ch == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise MalformedHeaderError("header ended while a token was expected")
    return data[start:pos], pos


def _int_token(data, pos, what):
    token, pos = _next_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise MalformedHeaderError(f"{what} is not an integer: {token!r}") from None
    return value, pos


def _pixels(data, pos, height, width, channels, what):
    need = height * width * channels
    if len(data) - pos < need:
        raise TruncatedDataError(
            f"{what}: expected {need} sample bytes, found {len(data) - pos}"
        )
    arr = np.frombuffer(data, dtype=np.uint8, count=need, offset=pos)
    return arr.reshape(height, width, channels)


def _read_pnm(data, magic, channels):
    width, pos = _int_token(data, 2, "width")
    height, pos = _int_token(data, pos, "height")
    maxval, pos = _int_token(data, pos, "maxval")
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedDepthError(f"maxval {maxval} unsupported; only 255 (8-bit)")
    # exactly one whitespace byte separates the header from the samples
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise MalformedHeaderError("missing whitespace after maxval")
    return _pixels(data, pos + 1, height, width, channels, magic.decode())


def _read_pam(data):
    end = data.find(b"ENDHDR\n")
    if end < 0:
        raise MalformedHeaderError("PAM header has no ENDHDR")
    fields = {}
    for line in data[:end].split(b"\n")[1:]:
        line = line.split(b"#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        key = parts[0].upper()
        fields[key] = parts[1] if len(parts) > 1 else b""
    try:
        width = int(fields[b"WIDTH"])
        height = int(fields[b"HEIGHT"])
        depth = int(fields[b"DEPTH"])
        maxval = int(fields[b"MAXVAL"])
    except KeyError as missing:
        raise MalformedHeaderError(f"PAM header missing {missing}") from None
    except ValueError:
        raise MalformedHeaderError("PAM header field is not an integer") from None
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedDepthError(f"maxval {maxval} unsupported; only 255 (8-bit)")
    if depth not in (1, 3, 4):
        raise MalformedHeaderError(f"PAM depth {depth} unsupported (want 1, 3, or 4)")
    return _pixels(data, end + len(b"ENDHDR\n"), height, width, depth, "P7")


def read_image(source, format=None, width=None, height=None, channels=None):
    """Decode a raster into an h x w x c uint8 array.

    source may be a path, a binary stream, or bytes. format is one of
    "pgm", "ppm", "pam", "raw", or None to sniff from the magic bytes.
    Raw mode requires width/height/channels.
    """
    data = _as_bytes(source)
    if format is None:
        format = sniff_format(data)
        if format is None:
            raise MalformedHeaderError(
                f"unrecognized magic {data[:2]!r}; use raw mode with explicit dimensions"
            )
    if format == "raw":
        if not (width and height and channels):
            raise ImageFormatError("raw mode needs width, height, and channels")
        if channels not in (1, 3, 4):
            raise ImageFormatError(f"unsupported channel count {channels}")
        return _pixels(data, 0, height, width, channels, "raw")
    if format == "pgm":
        if data[:2] != b"P5":
            raise MalformedHeaderError(f"not a binary PGM: magic {data[:2]!r}")
        return _read_pnm(data, b"P5", 1)
    if format == "ppm":
        if data[:2] != b"P6":
            raise MalformedHeaderError(f"not a binary PPM: magic {data[:2]!r}")
        return _read_pnm(data, b"P6", 3)
    if format == "pam":
        if data[:2] != b"P7":
            raise MalformedHeaderError(f"not a PAM: magic {data[:2]!r}")
        return _read_pam(data)
    raise ImageFormatError(f"unknown format {format!r}")


def write_image(image, format) -> bytes:
    """Encode an h x w x c uint8 array; exact inverse of read_image."""
    if not isinstance(image, np.ndarray) or image.dtype != np.uint8 or image.ndim != 3:
        raise ImageFormatError("image must be an h x w x c uint8 array")
    h, w, c = image.shape
    body = np.ascontiguousarray(image).tobytes()
    if format == "raw":
        return body
    if format == "pgm":
        if c != 1:
            raise ImageFormatError(f"PGM holds 1 channel, image has {c}")
        return b"P5\n%d %d\n255\n" % (w, h) + body
    if format == "ppm":
        if c != 3:
            raise ImageFormatError(f"PPM holds 3 channels, image has {c}")
        return b"P6\n%d %d\n255\n" % (w, h) + body
    if format == "pam":
        if c not in _PAM_TUPLTYPES:
            raise ImageFormatError(f"PAM supports 1/3/4 channels, image has {c}")
        header = (
            b"P7\nWIDTH %d\nHEIGHT %d\nDEPTH %d\nMAXVAL 255\nTUPLTYPE %s\nENDHDR\n"
            % (w, h, c, _PAM_TUPLTYPES[c].encode())
        )
        return header + body
    raise ImageFormatError(f"unknown format {format!r}")
