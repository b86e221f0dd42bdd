"""Raster containers and Netpbm (PGM/PPM) codecs.

Images are plain numpy arrays:

* 8-bit gray: ``uint8`` array of shape ``(height, width)``
* RGB: ``uint8`` array of shape ``(height, width, 3)``
* binary masks: ``uint8`` array holding only 0 and 1
* real-valued gray (wavelet and fusion stages): ``float64`` ``(height, width)``

Row-major order, ``img[row, col]``, 0-based in storage.
"""

import re
from pathlib import Path

import numpy as np

from .errors import ParseError, TruncatedError, UnsupportedError

__all__ = [
    "load_pnm",
    "save_pnm",
    "read_pnm",
    "write_pnm",
    "to_grayscale",
    "round_half_away",
    "is_pnm",
]

_MAGICS = {b"P2": (1, False), b"P3": (3, False), b"P5": (1, True), b"P6": (3, True)}
_WHITESPACE = b" \t\n\r\v\f"
_TOKEN = re.compile(rb"\S+")

# Coefficients of the luminance conversion. They sum to 0.9999, not 1.
GRAY_WEIGHTS = (0.2989, 0.5870, 0.1140)


def round_half_away(x):
    """Round to the nearest integer, halves away from zero (``np.round`` rounds halves to even)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def is_pnm(data):
    return len(data) >= 2 and bytes(data[:2]) in _MAGICS


def _header(data):
    """Parse magic, width, height, maxval. Returns them plus the offset just past maxval."""
    magic = bytes(data[:2])
    if magic not in _MAGICS:
        raise ParseError(f"bad magic {magic!r}", 0)
    pos = 2
    values = []
    n = len(data)
    while len(values) < 3:
        # skip whitespace and comments
        while pos < n:
            c = data[pos : pos + 1]
            if c in _WHITESPACE and c:
                pos += 1
            elif c == b"#":
                end = data.find(b"\n", pos)
                pos = n if end < 0 else end + 1
            else:
                break
        if pos >= n:
            raise ParseError("header ends early", pos)
        start = pos
        while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
            pos += 1
        tok = data[start:pos]
        if not tok.isdigit():
            raise ParseError(f"expected an unsigned integer, got {tok[:16]!r}", start)
        values.append(int(tok))
    width, height, maxval = values
    if width < 1 or height < 1:
        raise ParseError(f"non-positive dimensions {width}x{height}", pos)
    if maxval < 1:
        raise ParseError(f"invalid maxval {maxval}", pos)
    if maxval > 255:
        raise UnsupportedError(f"maxval {maxval} > 255 (16-bit PNM is not supported)")
    return magic, width, height, maxval, pos


def load_pnm(data):
    """Decode a P2/P3/P5/P6 byte string.

    Returns a ``(h, w)`` uint8 array for PGM and a ``(h, w, 3)`` uint8 array for
    PPM. Sample values are returned as encoded; no rescaling to 255 is done.
    """
    data = bytes(data)
    magic, width, height, maxval, pos = _header(data)
    channels, binary = _MAGICS[magic]
    count = width * height * channels
    if binary:
        # exactly one whitespace byte separates maxval from the raster
        if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
            raise ParseError("missing whitespace before raster", pos)
        pos += 1
        raster = data[pos : pos + count]
        if len(raster) < count:
            raise TruncatedError(f"expected {count} raster bytes, found {len(raster)}")
        pixels = np.frombuffer(raster, dtype=np.uint8)
        if pixels.max(initial=0) > maxval:
            bad = int(np.argmax(pixels > maxval))
            raise ParseError(f"sample exceeds maxval {maxval}", pos + bad)
    else:
        samples = []
        for m in _TOKEN.finditer(data, pos):
            if len(samples) == count:
                break
            tok = m.group()
            if not tok.isdigit():
                raise ParseError(f"bad sample {tok[:16]!r}", m.start())
            v = int(tok)
            if v > maxval:
                raise ParseError(f"sample {v} exceeds maxval {maxval}", m.start())
            samples.append(v)
        if len(samples) < count:
            raise TruncatedError(f"expected {count} samples, found {len(samples)}")
        pixels = np.array(samples, dtype=np.uint8)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return pixels.reshape(shape).copy()


def save_pnm(image, binary=True):
    """Encode an 8-bit gray or RGB array as PNM bytes (maxval 255)."""
    img = np.asarray(image)
    if img.dtype != np.uint8:
        raise UnsupportedError(f"only uint8 images can be saved, got {img.dtype}; quantize first")
    if img.ndim == 2:
        magic = b"P5" if binary else b"P2"
    elif img.ndim == 3 and img.shape[2] == 3:
        magic = b"P6" if binary else b"P3"
    else:
        raise UnsupportedError(f"unsupported image shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise UnsupportedError("empty image")
    height, width = img.shape[:2]
    header = b"%s\n%d %d\n255\n" % (magic, width, height)
    if binary:
        return header + np.ascontiguousarray(img).tobytes()
    rows = img.reshape(height, -1)
    body = b"".join(b" ".join(b"%d" % v for v in row) + b"\n" for row in rows.tolist())
    return header + body


def read_pnm(path):
    return load_pnm(Path(path).read_bytes())


def write_pnm(path, image, binary=True):
    Path(path).write_bytes(save_pnm(image, binary))


def to_grayscale(rgb):
    """Luminance conversion ``0.2989 R + 0.5870 G + 0.1140 B``, rounded half away and clamped."""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise UnsupportedError(f"expected an (h, w, 3) RGB array, got shape {rgb.shape}")
    r, g, b = (rgb[..., i].astype(np.float64) for i in range(3))
    gray = GRAY_WEIGHTS[0] * r + GRAY_WEIGHTS[1] * g + GRAY_WEIGHTS[2] * b
    return np.clip(round_half_away(gray), 0, 255).astype(np.uint8)
