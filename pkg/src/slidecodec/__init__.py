"""Lossless whole-slide-image codec.

Stages: empty row/column cropping, hierarchical delta projection with zigzag
residuals, bit-plane transposition, and variable-width LZW, wrapped in a
tiled archive container. See the README for the CLI and file format.
"""

from .bitplane import effective_bit_histogram, from_bitplanes, to_bitplanes
from .container import ContainerHeader, PatchRecord, read_container, write_container
from .lzw import BACKEND, lzw_decode, lzw_encode, lzw_encode_trace
from .metrics import bitplane_psnr, compression_ratio, entropy_trace, psnr_matrix, shannon_entropy
from .pipeline import (
    CompressionConfig,
    CropResult,
    compress,
    crop_empty,
    decompress,
    strip_alpha,
    uncrop,
)
from .rasters import read_image, write_image
from .transform import project, unproject, unzigzag, zigzag

__version__ = "0.1.0"
