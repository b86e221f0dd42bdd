"""Basic 3x3 local binary patterns and block-wise code histograms."""

import numpy as np

from .errors import SizeError

__all__ = ["NEIGHBOR_OFFSETS", "lbp_code", "lbp_image", "block_features"]

# (drow, dcol) clockwise from top-left; the first entry is the most significant bit.
NEIGHBOR_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1))


def lbp_code(neighborhood):
    """Code of a single 3x3 neighborhood: bit set where neighbor >= center."""
    n = np.asarray(neighborhood).reshape(3, 3)
    center = n[1, 1]
    code = 0
    for dr, dc in NEIGHBOR_OFFSETS:
        code = (code << 1) | int(n[1 + dr, 1 + dc] >= center)
    return code


def lbp_image(img):
    """Codes for every interior pixel; the result is ``(h - 2, w - 2)`` uint8."""
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] < 3 or img.shape[1] < 3:
        raise SizeError(f"LBP needs an image of at least 3x3, got {img.shape}")
    img = img.astype(np.float64)
    h, w = img.shape
    center = img[1:-1, 1:-1]
    codes = np.zeros((h - 2, w - 2), dtype=np.uint8)
    for dr, dc in NEIGHBOR_OFFSETS:
        neighbor = img[1 + dr : h - 1 + dr, 1 + dc : w - 1 + dc]
        codes = (codes << 1) | (neighbor >= center)
    return codes


def block_features(codes, block_size=8):
    """Concatenated 256-bin histograms of non-overlapping blocks, row-major.

    Partial blocks on the right and bottom edges are dropped, so each
    histogram holds exactly ``block_size ** 2`` counts.
    """
    codes = np.asarray(codes)
    by, bx = codes.shape[0] // block_size, codes.shape[1] // block_size
    if by == 0 or bx == 0:
        raise SizeError(f"code image {codes.shape} is smaller than one {block_size}x{block_size} block")
    tiles = codes[: by * block_size, : bx * block_size].reshape(by, block_size, bx, block_size)
    block_index = np.arange(by * bx).reshape(by, 1, bx, 1)
    flat = (block_index * 256 + tiles.astype(np.int64)).ravel()
    return np.bincount(flat, minlength=by * bx * 256).astype(np.float64)
