"""Hierarchical projection coding: cascaded first-order deltas plus zigzag byte mapping.

The forward transform runs three passes over an 8-bit patch, each one a plain
first-order difference computed modulo 256:

1. row pass:     out[m, n, c] = in[m, n, c] - in[m-1, n, c]      (m >= 1)
2. column pass:  out[m, n, c] = in[m, n, c] - in[m, n-1, c]      (n >= 1)
3. channel pass: out[m, n, c] = in[m, n, c] - in[m, n, 0]        (c >= 1, RGB only)

Each pass reads the full output of the previous pass; the first row, first
column, and first channel pass through undifferenced. The resulting modular
residuals are reinterpreted as signed values in [-128, 127] and zigzag-mapped
so that small magnitudes become small unsigned bytes (0, -1, 1, -2, ... map to
0, 1, 2, 3, ...), which keeps the high bit positions of near-zero residuals
empty for the bit-plane stage.

Inversion undoes the passes in reverse order, each via a modular cumulative
sum, and is exact for every input.
"""

import numpy as np

from .errors import StructuralError, UnsupportedLayoutError

__all__ = ["zigzag", "unzigzag", "project", "unproject"]


def zigzag(s: int) -> int:
    """Map a signed value in [-128, 127] to an unsigned byte, interleaving signs."""
    if not -128 <= s <= 127:
        raise ValueError(f"zigzag input {s} outside [-128, 127]")
    return 2 * s if s >= 0 else -2 * s - 1


def unzigzag(u: int) -> int:
    """Inverse of :func:`zigzag`; total on [0, 255]."""
    if not 0 <= u <= 255:
        raise ValueError(f"unzigzag input {u} outside [0, 255]")
    return u // 2 if u % 2 == 0 else -(u + 1) // 2


def _build_luts():
    signed = np.arange(256, dtype=np.int16)
    signed[128:] -= 256
    zz = np.where(signed >= 0, 2 * signed, -2 * signed - 1).astype(np.uint8)
    inv = np.zeros(256, dtype=np.uint8)
    inv[zz] = np.arange(256, dtype=np.uint8)
    return zz, inv


# _ZIGZAG[residual byte] -> zigzag byte; _UNZIGZAG is the inverse permutation
# (zigzag of the signed reinterpretation equals a fixed byte permutation).
_ZIGZAG, _UNZIGZAG = _build_luts()


def _check_patch(patch: np.ndarray, channels: tuple[int, ...]) -> np.ndarray:
    patch = np.asarray(patch)
    if patch.dtype != np.uint8:
        raise StructuralError(f"expected uint8 samples, got {patch.dtype}")
    if patch.ndim != 3:
        raise StructuralError(f"expected (height, width, channels) array, got shape {patch.shape}")
    if patch.shape[2] not in channels:
        raise UnsupportedLayoutError(
            f"unsupported channel count {patch.shape[2]}; expected one of {channels}"
        )
    return patch


def project(patch: np.ndarray) -> np.ndarray:
    """Forward transform of an (h, w, c) uint8 patch into zigzag residual bytes.

    Supports 1 or 3 channels; the channel pass is skipped for single-channel
    input. Output has the same shape as the input.
    """
    x = _check_patch(patch, (1, 3))
    d = x.copy()
    d[1:, :, :] -= x[:-1, :, :]
    e = d.copy()
    e[:, 1:, :] -= d[:, :-1, :]
    y = e.copy()
    if x.shape[2] == 3:
        y[:, :, 1:] -= e[:, :, :1]
    return _ZIGZAG[y]


def unproject(residuals: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`project`."""
    r = _check_patch(residuals, (1, 3))
    y = _UNZIGZAG[r]
    if r.shape[2] == 3:
        y[:, :, 1:] += y[:, :, :1]
    y = np.cumsum(y, axis=1, dtype=np.uint8)
    y = np.cumsum(y, axis=0, dtype=np.uint8)
    return y
