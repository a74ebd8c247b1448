"""Seeded synthetic imagery for tests and benchmarks.

Real slide scans are gigapixel files that cannot ship with the repository,
so the test suite and the benchmark drive the codec with small generated
stand-ins: a fixed 8x8 demonstration matrix, smooth gradient patches, and
tissue-like images with empty margins. Every generator is deterministic in
its seed; the suites pin exact values produced from these inputs.
"""

from __future__ import annotations

import numpy as np

from .transform import unproject

__all__ = [
    "sample_matrix",
    "smooth_gradient_patch",
    "wsi_like_image",
    "corpus",
]

# 8x8 single-channel block of smoothly shaded values, the kind of gently
# varying tissue texture the residual transform is built for. Frozen so the
# analysis suites can pin its exact entropy trace.
_SAMPLE = (
    (152, 153, 155, 156, 158, 159, 161, 162),
    (154, 155, 157, 158, 160, 161, 163, 164),
    (157, 158, 159, 161, 162, 164, 165, 166),
    (159, 160, 162, 163, 165, 166, 168, 169),
    (162, 163, 164, 166, 167, 169, 170, 171),
    (164, 165, 167, 168, 170, 171, 173, 174),
    (167, 168, 169, 171, 172, 174, 175, 176),
    (169, 170, 172, 173, 175, 176, 178, 179),
)


def sample_matrix() -> np.ndarray:
    """The bundled 8x8 single-channel demonstration matrix, shape (8, 8, 1)."""
    return np.asarray(_SAMPLE, dtype=np.uint8).reshape(8, 8, 1)


def smooth_gradient_patch(seed, height: int = 64, width: int = 64,
                          channels: int = 3) -> np.ndarray:
    """A smooth linear luminance ramp with a seeded direction per channel."""
    rng = np.random.default_rng(seed)
    i = np.arange(height, dtype=np.float64)[:, None]
    j = np.arange(width, dtype=np.float64)[None, :]
    out = np.empty((height, width, channels), dtype=np.uint8)
    for c in range(channels):
        theta = rng.uniform(0.0, 2.0 * np.pi)
        mag = rng.uniform(0.3, 1.5)
        base = rng.uniform(40.0, 215.0)
        plane = base + mag * np.sin(theta) * i + mag * np.cos(theta) * j
        out[:, :, c] = np.clip(np.round(plane), 0, 255).astype(np.uint8)
    return out


def _tissue(rng: np.random.Generator, height: int, width: int,
            channels: int) -> np.ndarray:
    """Tissue-like texture built in residual space and integrated back.

    Each row is a shallow ramp whose slope and phase drift smoothly from row
    to row, with flat stretches mixed in; secondary channels ride on the
    first with smaller excursions. Constructing the residuals and applying
    the inverse transform yields imagery whose forward transform is exactly
    the designed residual field.
    """
    z = np.zeros((height, width, channels), dtype=np.uint8)
    j = np.arange(width)
    slopes = np.clip(
        np.round(np.cumsum(rng.normal(0.0, 0.6, height)) / 4 + rng.uniform(1, 5)),
        1, 6,
    ).astype(np.int64)
    phases = rng.integers(0, 64, height)
    quiet = rng.random(height) < 0.35
    slopes[quiet] = 0
    phases[quiet] = 0
    z[:, :, 0] = (phases[:, None] + slopes[:, None] * j[None, :]) % 64
    for c in range(1, channels):
        sl = np.clip(
            np.round(np.cumsum(rng.normal(0.0, 0.3, height)) / 6 + rng.uniform(1, 3)),
            1, 3,
        ).astype(np.int64)
        ph = rng.integers(0, 16, height)
        sl[quiet] = 0
        ph[quiet] = 0
        z[:, :, c] = (ph[:, None] + sl[:, None] * j[None, :]) % 16
    return unproject(z)


def wsi_like_image(seed, height: int = 256, width: int = 256,
                   channels: int = 3) -> np.ndarray:
    """A slide-like image: textured tissue surrounded by empty margins."""
    rng = np.random.default_rng(seed)
    out = np.zeros((height, width, channels), dtype=np.uint8)
    top, bottom = rng.integers(0, max(height // 8, 1), 2)
    left, right = rng.integers(0, max(width // 8, 1), 2)
    tissue = _tissue(rng, height - top - bottom, width - left - right, channels)
    out[top:height - bottom, left:width - right] = tissue
    return out


def corpus(count: int = 100, seed: int = 42, height: int = 256,
           width: int = 256, channels: int = 3) -> list:
    """The seeded evaluation corpus: `count` independent slide-like images."""
    return [
        wsi_like_image(np.random.SeedSequence([seed, k]), height, width, channels)
        for k in range(count)
    ]
