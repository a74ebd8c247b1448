"""Tests for the seeded image generators.

The generators feed every analysis pin and the benchmark, so their output
must be bit-stable across runs and numpy versions in use here.
"""

import numpy as np

from slidecodec.pipeline import crop_empty
from slidecodec.synthetic import (
    corpus,
    sample_matrix,
    smooth_gradient_patch,
    wsi_like_image,
)


def test_sample_matrix_is_frozen():
    m = sample_matrix()
    assert m.shape == (8, 8, 1)
    assert m.dtype == np.uint8
    assert tuple(m[0, :, 0]) == (152, 153, 155, 156, 158, 159, 161, 162)
    assert tuple(m[7, :, 0]) == (169, 170, 172, 173, 175, 176, 178, 179)
    assert int(m.sum()) == 10580


def test_sample_matrix_returns_a_fresh_array():
    first = sample_matrix()
    first[:] = 0
    assert sample_matrix()[0, 0, 0] == 152


def test_gradient_patch_shape_and_determinism():
    a = smooth_gradient_patch(np.random.SeedSequence(0), 32, 48, channels=3)
    b = smooth_gradient_patch(np.random.SeedSequence(0), 32, 48, channels=3)
    assert a.shape == (32, 48, 3)
    assert a.dtype == np.uint8
    assert np.array_equal(a, b)
    c = smooth_gradient_patch(np.random.SeedSequence(1), 32, 48, channels=3)
    assert not np.array_equal(a, c)


def test_gradient_patch_is_smooth():
    img = smooth_gradient_patch(np.random.SeedSequence(3), 64, 64)
    rows = np.abs(np.diff(img.astype(np.int16), axis=0))
    cols = np.abs(np.diff(img.astype(np.int16), axis=1))
    assert rows.max() <= 2
    assert cols.max() <= 2


def test_wsi_like_image_shape_and_determinism():
    a = wsi_like_image(np.random.SeedSequence(7), height=128, width=96)
    b = wsi_like_image(np.random.SeedSequence(7), height=128, width=96)
    assert a.shape == (128, 96, 3)
    assert a.dtype == np.uint8
    assert np.array_equal(a, b)


def test_wsi_like_image_has_croppable_margins():
    removed = 0
    for k in range(10):
        img = wsi_like_image(np.random.SeedSequence(k))
        res = crop_empty(img)
        removed += len(res.removed_rows) + len(res.removed_cols)
        # whatever the margins were, only all-zero lines may be removed
        for r in res.removed_rows:
            assert img[r].max() == 0
        for c in res.removed_cols:
            assert img[:, c].max() == 0
    assert removed > 0


def test_wsi_like_image_interior_varies():
    img = wsi_like_image(np.random.SeedSequence(2))
    assert img.max() > 0
    assert len(np.unique(img)) > 16


def test_corpus_counts_and_determinism():
    images = corpus(count=3, seed=42, height=64, width=64)
    assert len(images) == 3
    for img in images:
        assert img.shape == (64, 64, 3)
        assert img.dtype == np.uint8
    again = corpus(count=3, seed=42, height=64, width=64)
    for a, b in zip(images, again):
        assert np.array_equal(a, b)
    # member k is exactly the k-th child stream of the corpus seed
    direct = wsi_like_image(np.random.SeedSequence([42, 1]), 64, 64)
    assert np.array_equal(images[1], direct)


def test_corpus_members_differ():
    images = corpus(count=4, seed=9, height=64, width=64)
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            assert not np.array_equal(images[i], images[j])
