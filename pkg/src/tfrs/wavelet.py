"""Unnormalized Haar transforms and LL/detail-band fusion.

A Haar step replaces each pair ``(u, v)`` by its mean ``(u + v) / 2`` and
half-difference ``(u - v) / 2``, so ``[10, 4, 9, 5]`` becomes means
``[7, 7]`` and details ``[3, 2]``; the full recursive transform is
``[7, 0, 3, 2]``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import OddLengthError, SizeError

__all__ = [
    "SubbandSet",
    "FusionWeights",
    "haar1d_step",
    "inverse_haar1d_step",
    "haar1d_full",
    "inverse_haar1d_full",
    "dwt2_single",
    "idwt2_single",
    "standard_decomposition",
    "inverse_standard_decomposition",
    "average_detail",
    "confidence_matrix",
    "sweep_weights",
    "flatten",
]


@dataclass(frozen=True)
class SubbandSet:
    """One-level quadrants. ``hl`` is top-right, ``lh`` bottom-left, ``hh`` bottom-right."""

    ll: np.ndarray
    hl: np.ndarray
    lh: np.ndarray
    hh: np.ndarray


@dataclass(frozen=True)
class FusionWeights:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0):
            raise ValueError(f"weights must lie in [0, 1], got {self}")
        if abs(self.alpha + self.beta - 1.0) > 1e-12:
            raise ValueError(f"alpha + beta must equal 1, got {self}")

    @classmethod
    def from_beta(cls, beta):
        return cls(1.0 - beta, beta)


def _is_pow2(n):
    return n >= 1 and n & (n - 1) == 0


def haar1d_step(v, axis=-1):
    v = np.asarray(v, dtype=np.float64)
    n = v.shape[axis]
    if n < 2 or n % 2:
        raise OddLengthError(f"Haar step needs an even length >= 2, got {n}")
    even = np.take(v, np.arange(0, n, 2), axis=axis)
    odd = np.take(v, np.arange(1, n, 2), axis=axis)
    return (even + odd) / 2, (even - odd) / 2


def inverse_haar1d_step(means, details, axis=-1):
    means = np.asarray(means, dtype=np.float64)
    details = np.asarray(details, dtype=np.float64)
    if means.shape != details.shape:
        raise SizeError(f"means {means.shape} and details {details.shape} differ")
    return _interleave(means + details, means - details, axis)


def _interleave(first, second, axis):
    first = np.moveaxis(first, axis, -1)
    second = np.moveaxis(second, axis, -1)
    out = np.stack([first, second], axis=-1).reshape(first.shape[:-1] + (-1,))
    return np.moveaxis(out, -1, axis)


def haar1d_full(v):
    """Full decomposition laid out as ``[overall mean, coarse details, ..., finest details]``."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or not _is_pow2(v.size):
        raise SizeError(f"length must be a power of two, got {v.shape}")
    parts = []
    means = v
    while means.size > 1:
        means, details = haar1d_step(means)
        parts.append(details)
    return np.concatenate([means] + parts[::-1])


def inverse_haar1d_full(c):
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1 or not _is_pow2(c.size):
        raise SizeError(f"length must be a power of two, got {c.shape}")
    means = c[:1]
    while means.size < c.size:
        n = means.size
        means = inverse_haar1d_step(means, c[n : 2 * n])
    return means


def dwt2_single(img):
    """One 2-D level: rows first, then columns. LL equals the 2x2 block means."""
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    if h % 2 or w % 2:
        raise SizeError(f"image dimensions must be even, got {h}x{w}")
    lo, hi = haar1d_step(img, axis=1)
    ll, lh = haar1d_step(lo, axis=0)
    hl, hh = haar1d_step(hi, axis=0)
    return SubbandSet(ll=ll, hl=hl, lh=lh, hh=hh)


def idwt2_single(s):
    lo = _interleave(s.ll + s.lh, s.ll - s.lh, 0)
    hi = _interleave(s.hl + s.hh, s.hl - s.hh, 0)
    return _interleave(lo + hi, lo - hi, 1)


def standard_decomposition(img):
    """Full 1-D Haar on every row, then on every column of the result."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or not (_is_pow2(img.shape[0]) and _is_pow2(img.shape[1])):
        raise SizeError(f"both dimensions must be powers of two, got {img.shape}")
    out = np.array([haar1d_full(row) for row in img])
    return np.array([haar1d_full(col) for col in out.T]).T


def inverse_standard_decomposition(coeffs):
    coeffs = np.asarray(coeffs, dtype=np.float64)
    out = np.array([inverse_haar1d_full(col) for col in coeffs.T]).T
    return np.array([inverse_haar1d_full(row) for row in out])


def average_detail(s):
    return (s.hl + s.lh + s.hh) / 3.0


def confidence_matrix(ll, d, w):
    """Pixel-wise ``alpha * LL + beta * D``."""
    ll = np.asarray(ll, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    if ll.shape != d.shape:
        raise SizeError(f"LL {ll.shape} and detail band {d.shape} differ")
    return w.alpha * ll + w.beta * d


def sweep_weights():
    """The eleven pairs ``(1 - 0.1 i, 0.1 i)`` for i = 0..10."""
    return [FusionWeights.from_beta(0.1 * i) for i in range(11)]


def flatten(t):
    return np.asarray(t, dtype=np.float64).reshape(-1)
