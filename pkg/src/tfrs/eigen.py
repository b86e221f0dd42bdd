"""Eigenface PCA through the Gram-matrix trick.

With M training rows of dimension N (M much smaller than N), the M x M
matrix ``Phi Phi^T / M`` of the centered data shares its nonzero
eigenvalues with the N x N covariance, and each of its eigenvectors ``v``
maps to a feature-space eigenvector ``Phi^T v``.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _binio
from .errors import DegenerateSpectrumWarning, RankError, SizeError

__all__ = [
    "FeatureMatrix",
    "EigenModel",
    "jacobi_eigh",
    "split_train_test",
    "fit_pca",
    "project",
    "eigen_model_to_bytes",
    "eigen_model_from_bytes",
]

EIGEN_MAGIC = b"TFRSEIG1"


@dataclass(frozen=True)
class FeatureMatrix:
    data: np.ndarray  # (M, N)
    labels: list = field(default_factory=list)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise SizeError(f"feature matrix must be 2-D, got {data.shape}")
        if len(self.labels) != data.shape[0]:
            raise SizeError(f"{len(self.labels)} labels for {data.shape[0]} rows")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "labels", list(self.labels))

    @classmethod
    def stack(cls, vectors, labels):
        return cls(np.vstack([np.asarray(v, dtype=np.float64).ravel() for v in vectors]), labels)

    def __len__(self):
        return self.data.shape[0]


@dataclass(frozen=True)
class EigenModel:
    mean: np.ndarray  # (N,)
    components: np.ndarray  # (k, N), unit rows, descending eigenvalue
    eigenvalues: np.ndarray  # (k,)
    degenerate: bool = False

    @property
    def k(self):
        return self.components.shape[0]

    def truncate(self, k):
        if not 1 <= k <= self.k:
            raise RankError(f"cannot keep {k} of {self.k} components")
        return EigenModel(self.mean, self.components[:k], self.eigenvalues[:k], self.degenerate)


def jacobi_eigh(a, tol=1e-12, max_sweeps=60):
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Sweeps until the off-diagonal Frobenius norm is at most ``tol`` times the
    Frobenius norm of the input. Returns ``(eigenvalues, eigenvectors)`` with
    eigenvalues in descending order and eigenvectors as columns.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise SizeError(f"expected a square matrix, got {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(np.abs(a).max(initial=0.0), 1.0)):
        raise ValueError("matrix is not symmetric")
    a = (a + a.T) / 2
    v = np.eye(n)
    target = tol * np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def split_train_test(m):
    """Odd rows (1st, 3rd, ...) train, even rows (2nd, 4th, ...) test."""
    if len(m) < 2:
        raise SizeError("need at least two rows to split")
    return (
        FeatureMatrix(m.data[0::2], m.labels[0::2]),
        FeatureMatrix(m.data[1::2], m.labels[1::2]),
    )


def _fix_sign(u):
    return u if u[np.argmax(np.abs(u))] >= 0 else -u


def fit_pca(train, k, rel_floor=1e-10):
    """Top-``k`` eigenfaces of the training rows.

    Components whose eigenvalue is numerically zero (at most ``rel_floor``
    times the largest) cannot be recovered from the Gram matrix; they are
    replaced by unit vectors orthogonalized against the earlier components
    and the model is marked ``degenerate``.
    """
    x = train.data if isinstance(train, FeatureMatrix) else np.asarray(train, dtype=np.float64)
    m, n = x.shape
    if n < 1 or m < 1:
        raise SizeError(f"empty training matrix {x.shape}")
    if not 1 <= k <= min(m, n):
        raise RankError(f"k={k} must lie in [1, min(M, N)] = [1, {min(m, n)}]")
    mean = x.mean(axis=0)
    phi = x - mean
    lam, vecs = jacobi_eigh(phi @ phi.T / m)
    lam = np.maximum(lam[:k], 0.0)
    floor = rel_floor * lam[0]
    comps = []
    degenerate = False
    for i in range(k):
        u = phi.T @ vecs[:, i]
        norm = np.linalg.norm(u)
        if lam[i] <= floor or norm == 0.0:
            degenerate = True
            break
        comps.append(_fix_sign(u / norm))
    if degenerate:
        lam[len(comps) :] = 0.0
        basis = iter(np.eye(n))
        while len(comps) < k:
            u = next(basis)
            for _ in range(2):
                for c in comps:
                    u = u - (c @ u) * c
            norm = np.linalg.norm(u)
            if norm > 1e-6:
                comps.append(_fix_sign(u / norm))
        warnings.warn(
            f"{k - int(np.count_nonzero(lam))} of {k} eigenvalues are numerically zero",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )
    return EigenModel(mean, np.array(comps), lam, degenerate)


def project(model, x):
    """Coordinates of ``x`` (a vector or rows of vectors) in the eigenspace."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.mean.size:
        raise SizeError(f"feature length {x.shape[-1]} != model dimension {model.mean.size}")
    return (x - model.mean) @ model.components.T


def eigen_model_to_bytes(model):
    k, n = model.components.shape
    return (
        EIGEN_MAGIC
        + _binio.u32(k, n)
        + _binio.f64(model.mean)
        + _binio.f64(model.eigenvalues)
        + _binio.f64(model.components)
    )


def read_eigen_model(reader):
    reader.magic(EIGEN_MAGIC)
    k, n = reader.u32(2)
    mean = reader.f64(n)
    lam = reader.f64(k)
    comps = reader.f64(k * n).reshape(k, n)
    return EigenModel(mean, comps, lam, bool(np.any(lam <= 0.0)))


def eigen_model_from_bytes(data):
    return read_eigen_model(_binio.Reader(data))
