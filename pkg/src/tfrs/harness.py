"""Datasets, the three experiment protocols and result tables.

A dataset is a directory with one subdirectory per subject, each holding
PNM frames. Subjects and frames are taken in lexicographic order; stacking
them subject by subject gives the M x N feature matrix whose odd rows train
and even rows test.
"""

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .classify import MlpConfig, fit_min_distance, min_distance_predict, mlp_predict, mlp_train
from .eigen import FeatureMatrix, fit_pca, project, split_train_test
from .errors import DataError, ManifestError, SizeError
from .imageio import is_pnm, read_pnm, save_pnm, to_grayscale
from .pipeline import lbp_feature, wavelet_bands
from .preprocess import FACE_SHAPE, extract_face
from .wavelet import FusionWeights, confidence_matrix, flatten, sweep_weights

__all__ = [
    "DatasetManifest",
    "FaceSet",
    "ExperimentConfig",
    "ResultsTable",
    "scan_dataset",
    "synth_dataset",
    "preprocess_all",
    "load_faces",
    "recognition_rate",
    "run_wavelet_experiment",
    "run_lbp_experiment",
    "run_experiment",
    "emit_results",
    "parse_csv",
]

log = logging.getLogger(__name__)

DEFAULT_EIGEN_COUNTS = (10, 20, 30, 40, 50)


@dataclass(frozen=True)
class DatasetManifest:
    root: Path
    subjects: list  # [(label, [path, ...]), ...]
    images_per_subject: int
    skipped: list = field(default_factory=list)  # non-PNM files that were ignored

    @property
    def rows(self):
        return [(label, p) for label, paths in self.subjects for p in paths]

    @property
    def name(self):
        return self.root.name


@dataclass
class FaceSet:
    """Normalized faces in manifest row order."""

    faces: list
    labels: list
    failures: list = field(default_factory=list)  # (path, error message)
    dropped: list = field(default_factory=list)  # row indices left out in lenient mode


@dataclass(frozen=True)
class ExperimentConfig:
    feature: str = "wavelet"  # "wavelet" | "lbp"
    classifier: str = "ann"  # "ann" | "mindist" | "both"
    eigen_counts: tuple = DEFAULT_EIGEN_COUNTS
    sweep: bool = True
    alpha: float = 0.5  # fusion weight when not sweeping
    mindist_k: int = 40  # eigenvectors for the single minimum-distance column
    block_size: int = 8
    mlp: MlpConfig = field(default_factory=MlpConfig)
    seed: int = 0  # MLP initialization seed; overrides mlp.seed

    def __post_init__(self):
        if self.feature not in ("wavelet", "lbp"):
            raise ValueError(f"unknown feature {self.feature!r}")
        if self.classifier not in ("ann", "mindist", "both"):
            raise ValueError(f"unknown classifier {self.classifier!r}")
        if not self.eigen_counts or min(self.eigen_counts) < 1:
            raise ValueError("eigen_counts must be a non-empty list of positive counts")
        if self.mindist_k < 1:
            raise ValueError("mindist_k must be positive")

    @property
    def weights(self):
        return sweep_weights() if self.sweep else [FusionWeights(self.alpha, 1.0 - self.alpha)]


@dataclass
class ResultsTable:
    row_labels: list
    col_labels: list
    cells: list  # rates, one list per row
    row_header: str = "label"
    caption: str = ""

    def __post_init__(self):
        if len(self.cells) != len(self.row_labels) or any(len(r) != len(self.col_labels) for r in self.cells):
            raise SizeError("cells do not match the row/column labels")
        if any(not 0.0 <= v <= 100.0 for r in self.cells for v in r):
            raise ValueError("recognition rates must lie in [0, 100]")


def scan_dataset(root, per_subject=None):
    """Build a manifest from ``root/<subject>/<frame>`` files.

    Files without a PNM magic number are skipped and listed in
    ``manifest.skipped``. With ``per_subject`` only the first that many
    frames of each subject are kept.
    """
    root = Path(root)
    if not root.is_dir():
        raise ManifestError(f"{root} is not a directory")
    subjects, skipped = [], []
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        frames = []
        for f in sorted(p for p in sub.iterdir() if p.is_file()):
            with open(f, "rb") as fh:
                head = fh.read(2)
            if is_pnm(head):
                frames.append(f)
            else:
                skipped.append(f)
                log.warning("skipping non-PNM file %s", f)
        if frames:
            subjects.append((sub.name, frames[:per_subject] if per_subject else frames))
    if len(subjects) < 2:
        raise ManifestError(f"{root}: need at least two subject directories with PNM images")
    counts = {label: len(paths) for label, paths in subjects}
    if len(set(counts.values())) != 1:
        raise ManifestError(f"unequal images per subject: {counts}")
    n = next(iter(counts.values()))
    if n % 2:
        raise ManifestError(f"images per subject must be even for the odd/even split, got {n}")
    return DatasetManifest(root, subjects, n, skipped)


def _subject_pattern(seed, subject):
    rng = np.random.default_rng([seed, subject])
    a, b = rng.uniform(40, 46), rng.uniform(52, 58)
    blobs = []
    for _ in range(int(rng.integers(3, 7))):
        r, t = np.sqrt(rng.uniform(0, 0.6)), rng.uniform(0, 2 * np.pi)
        amp = rng.choice([-1.0, 1.0]) * rng.uniform(40, 80)
        blobs.append((r * a * np.cos(t), r * b * np.sin(t), rng.uniform(4, 10), amp))
    return a, b, blobs


def _render(seed, subject, index, pattern, size):
    a, b, blobs = pattern
    rng = np.random.default_rng([seed, subject, index, 1])
    dx, dy = rng.integers(-2, 3, size=2)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    u, v = xx - (size / 2 + dx), yy - (size / 2 + dy)
    face = np.full((size, size), 150.0)
    for bx, by, sigma, amp in blobs:
        face += amp * np.exp(-((u - bx) ** 2 + (v - by) ** 2) / (2 * sigma * sigma))
    img = np.full((size, size), 25.0)
    inside = (u / a) ** 2 + (v / b) ** 2 <= 1
    img[inside] = np.clip(face[inside], 110, 250)
    # small warm spot in the background so largest-component selection matters
    sy, sx = rng.integers(5, 20, size=2)
    img[sy : sy + 4, sx : sx + 4] = 200
    img += rng.normal(0.0, 8.0, img.shape)
    return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def synth_dataset(seed, n_subjects, per_subject, out, size=160):
    """Write a synthetic thermal-face dataset of PGM files and return its manifest.

    Each subject has a fixed face shape and 3-6 Gaussian warm/cool blobs on
    an elliptical support; each frame adds white noise (sigma 8) and a
    random shift of up to 2 pixels.
    """
    if size < 160:
        raise ValueError("synthetic frames must be at least 160x160")
    out = Path(out)
    for s in range(n_subjects):
        pattern = _subject_pattern(seed, s)
        sub = out / f"s{s:03d}"
        sub.mkdir(parents=True, exist_ok=True)
        for i in range(per_subject):
            (sub / f"{i:03d}.pgm").write_bytes(save_pnm(_render(seed, s, i, pattern, size)))
    return scan_dataset(out)


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _try_extract(path):
    try:
        return extract_face(read_pnm(path)), None
    except DataError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def preprocess_all(manifest, strict=True, workers=1):
    """Normalize every frame of the manifest to a 112x92 face.

    In strict mode any failure raises. In lenient mode a failed frame is
    dropped together with its odd/even partner so every subject keeps
    matching train and test counts; dropped rows are listed on the result.
    """
    rows = manifest.rows
    results = _map(lambda r: _try_extract(r[1]), rows, workers)
    failures = [(str(rows[i][1]), err) for i, (_, err) in enumerate(results) if err]
    if failures and strict:
        raise DataError(f"{len(failures)} image(s) failed preprocessing; first: {failures[0][0]}: {failures[0][1]}")
    bad = {i for i, (_, err) in enumerate(results) if err}
    dropped = sorted(bad | {i ^ 1 for i in bad})
    faces, labels = [], []
    for i, ((face, _), (label, _)) in enumerate(zip(results, rows)):
        if i not in dropped:
            faces.append(face)
            labels.append(label)
    if dropped:
        log.warning("lenient mode: dropped %d rows after %d failures", len(dropped), len(failures))
    return FaceSet(faces, labels, failures, dropped)


def load_faces(manifest, workers=1):
    """Read frames that are already normalized faces (e.g. output of ``tfrs preprocess``)."""

    def read(path):
        img = read_pnm(path)
        gray = to_grayscale(img) if img.ndim == 3 else img
        if gray.shape != FACE_SHAPE:
            raise SizeError(f"{path}: expected a {FACE_SHAPE[0]}x{FACE_SHAPE[1]} face, got {gray.shape}")
        return gray

    rows = manifest.rows
    return FaceSet(_map(lambda r: read(r[1]), rows, workers), [label for label, _ in rows])


def recognition_rate(predicted, actual):
    """Percentage correct, truncated to two decimals (97 of 102 gives 95.09)."""
    if len(predicted) != len(actual):
        raise SizeError(f"{len(predicted)} predictions for {len(actual)} labels")
    if not actual:
        raise SizeError("no test samples")
    correct = sum(p == a for p, a in zip(predicted, actual))
    return (10000 * correct // len(actual)) / 100


def _faces(data, strict, workers):
    return data if isinstance(data, FaceSet) else preprocess_all(data, strict, workers)


def _pca_rates(features, labels, cfg, workers):
    """Rates of every requested classifier cell for one feature matrix.

    Returns ``{("ann", k): rate, ("mindist", k): rate}`` for the cells the
    config asks for.
    """
    train, test = split_train_test(FeatureMatrix(features, labels))
    cells = []
    if cfg.classifier in ("ann", "both"):
        cells += [("ann", k) for k in cfg.eigen_counts]
    if cfg.classifier in ("mindist", "both"):
        cells.append(("mindist", cfg.mindist_k))
    mlp_cfg = replace(cfg.mlp, seed=cfg.seed)
    model = fit_pca(train, max(k for _, k in cells))
    z_train = project(model, train.data)
    z_test = project(model, test.data)

    def run(cell):
        kind, k = cell
        tr = FeatureMatrix(z_train[:, :k], train.labels)
        if kind == "ann":
            mlp = mlp_train(tr, mlp_cfg)
            pred = mlp_predict(mlp, z_test[:, :k])
        else:
            pred = min_distance_predict(fit_min_distance(tr), z_test[:, :k])
        return recognition_rate(pred, test.labels)

    return dict(zip(cells, _map(run, cells, workers)))


def _weights_label(w):
    return f"alpha={w.alpha:.1f} beta={w.beta:.1f}"


def run_wavelet_experiment(data, cfg, strict=True, workers=1):
    """Haar confidence-matrix features, one table row per (alpha, beta).

    ANN: one column per eigenvector count. Minimum distance: a single
    column at ``cfg.mindist_k`` eigenvectors. ``"both"`` gives both sets.
    """
    fs = _faces(data, strict, workers)
    bands = _map(wavelet_bands, fs.faces, workers)
    rows, cells = [], []
    for w in cfg.weights:
        feats = np.array([flatten(confidence_matrix(ll, d, w)) for ll, d in bands])
        rates = _pca_rates(feats, fs.labels, cfg, workers)
        rows.append(_weights_label(w))
        cells.append(list(rates.values()))
    cols = [f"{kind} k={k}" for kind, k in rates]
    return ResultsTable(rows, cols, cells, row_header="alpha_beta",
                        caption=f"Haar confidence matrix + PCA + {cfg.classifier}")


def run_lbp_experiment(data, cfg, strict=True, workers=1, row_label=None):
    """Block-LBP features. With ``classifier="both"`` the single row has one ANN
    column per eigenvector count and a final minimum-distance column."""
    fs = _faces(data, strict, workers)
    feats = np.array(_map(lambda f: lbp_feature(f, cfg.block_size), fs.faces, workers))
    rates = _pca_rates(feats, fs.labels, cfg, workers)
    if row_label is None:
        row_label = data.name if isinstance(data, DatasetManifest) else "dataset"
    return ResultsTable([row_label], [f"{kind} k={k}" for kind, k in rates], [list(rates.values())],
                        row_header="database", caption=f"block LBP + PCA + {cfg.classifier}")


def run_experiment(data, cfg, strict=True, workers=1):
    if cfg.feature == "wavelet":
        return run_wavelet_experiment(data, cfg, strict, workers)
    return run_lbp_experiment(data, cfg, strict, workers)


def emit_results(table, fmt="csv"):
    """Serialize a table as CSV or a markdown pipe table (UTF-8 bytes)."""
    header = [table.row_header, *table.col_labels]
    body = [[label, *(f"{v:.2f}" for v in row)] for label, row in zip(table.row_labels, table.cells)]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue().encode("utf-8")
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join(["---"] * len(header)) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in body]
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def parse_csv(data):
    """Inverse of ``emit_results(table, "csv")``."""
    rows = list(csv.reader(io.StringIO(data.decode("utf-8"))))
    header, body = rows[0], rows[1:]
    return ResultsTable(
        [r[0] for r in body], header[1:], [[float(v) for v in r[1:]] for r in body], row_header=header[0]
    )
