"""Face-region extraction from a raw thermal frame.

The chain is: grayscale -> mean-threshold binarization -> connected-component
labeling -> largest component -> centroid -> ellipse axes -> elliptic crop,
resampled to a fixed 112x92 face image.

Formulas use 1-based (column, row) coordinates; arrays are indexed 0-based
as ``img[row, col]``. The conversion happens only in `centroid`,
`estimate_axes` and `ellipse_mask`.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMaskError, NoComponentError, SizeError
from .imageio import round_half_away, to_grayscale

__all__ = [
    "FACE_SHAPE",
    "Connectivity",
    "Centroid",
    "EllipseSpec",
    "LabelImage",
    "mean_gray",
    "binarize",
    "label_components",
    "largest_component",
    "centroid",
    "estimate_axes",
    "ellipse_boundary",
    "ellipse_mask",
    "crop_and_normalize",
    "bilinear_resize",
    "extract_face",
]

FACE_SHAPE = (112, 92)


class Connectivity(enum.Enum):
    FOUR = 4
    EIGHT = 8


@dataclass(frozen=True)
class Centroid:
    x: float  # column, 1-based
    y: float  # row, 1-based


@dataclass(frozen=True)
class EllipseSpec:
    center: Centroid
    semi_minor: int  # horizontal
    semi_major: int  # vertical

    def __post_init__(self):
        if self.semi_minor < 1 or self.semi_major < 1:
            raise ValueError("ellipse semi-axes must be >= 1")


@dataclass(frozen=True)
class LabelImage:
    labels: np.ndarray  # int32, 0 = background
    count: int


def mean_gray(img):
    img = np.asarray(img)
    if img.size == 0:
        raise SizeError("empty image")
    return float(img.astype(np.float64).sum() / img.size)


def binarize(img):
    """1 where the pixel is at least the global mean gray value, else 0."""
    img = np.asarray(img)
    return (img.astype(np.float64) >= mean_gray(img)).astype(np.uint8)


class _UnionFind:
    def __init__(self):
        self.parent = [0]  # slot 0 unused so labels start at 1

    def make(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, a):
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller label as root
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def _row_runs(row):
    """Start (inclusive) and end (exclusive) columns of the runs of ones in a 0/1 row."""
    padded = np.concatenate(([0], row.astype(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    return edges[0::2], edges[1::2]


def label_components(img, conn=Connectivity.EIGHT):
    """Two-pass connected-component labeling over horizontal runs.

    Pass one gives every run a provisional label, reusing the label of an
    adjacent run in the previous row and recording equivalences when a run
    touches several. Pass two replaces each provisional label by its class
    representative. Final labels are 1..K in order of first row-major
    appearance.
    """
    img = np.asarray(img)
    if img.ndim != 2:
        raise SizeError(f"expected a 2-D mask, got shape {img.shape}")
    conn = Connectivity(conn)
    slack = 1 if conn is Connectivity.EIGHT else 0
    uf = _UnionFind()
    runs = []  # (row, start, end, provisional label)
    prev = []
    for r in range(img.shape[0]):
        starts, ends = _row_runs(img[r] != 0)
        cur = []
        j = 0
        for s, e in zip(starts.tolist(), ends.tolist()):
            # previous-row runs overlapping [s - slack, e + slack)
            while j < len(prev) and prev[j][1] + slack <= s:
                j += 1
            label = 0
            k = j
            while k < len(prev) and prev[k][0] < e + slack:
                if label == 0:
                    label = prev[k][2]
                else:
                    uf.union(label, prev[k][2])
                k += 1
            if label == 0:
                label = uf.make()
            cur.append((s, e, label))
            runs.append((r, s, e, label))
        prev = cur

    out = np.zeros(img.shape, dtype=np.int32)
    final = {}
    for r, s, e, label in runs:
        root = uf.find(label)
        if root not in final:
            final[root] = len(final) + 1
        out[r, s:e] = final[root]
    return LabelImage(out, len(final))


def largest_component(labels):
    """Mask of the component with the most pixels; ties go to the smaller label."""
    if labels.count == 0:
        raise NoComponentError("no foreground component")
    sizes = np.bincount(labels.labels.ravel(), minlength=labels.count + 1)
    sizes[0] = -1
    return (labels.labels == int(np.argmax(sizes))).astype(np.uint8)


def centroid(mask):
    rows, cols = np.nonzero(np.asarray(mask))
    if rows.size == 0:
        raise NoComponentError("empty mask has no centroid")
    return Centroid(x=float(cols.mean()) + 1.0, y=float(rows.mean()) + 1.0)


def _index(coord):
    """1-based real coordinate -> nearest 0-based integer index."""
    return int(round_half_away(coord)) - 1


def estimate_axes(mask, c):
    """Semi-axes from the mask extents along the centroid's row and column.

    The horizontal semi-axis reaches the rightmost foreground pixel on the
    centroid row (the "right ear"); the vertical one reaches the topmost
    foreground pixel in the centroid column (the "forehead").
    """
    mask = np.asarray(mask)
    row, col = _index(c.y), _index(c.x)
    if not (0 <= row < mask.shape[0] and 0 <= col < mask.shape[1]):
        raise DegenerateMaskError(f"centroid {c} lies outside the image")
    on_row = np.flatnonzero(mask[row])
    on_col = np.flatnonzero(mask[:, col])
    if on_row.size == 0 or on_col.size == 0:
        raise DegenerateMaskError("centroid row or column has no foreground")
    minor = int(round_half_away(on_row[-1] + 1 - c.x))
    major = int(round_half_away(c.y - (on_col[0] + 1)))
    return EllipseSpec(c, max(minor, 1), max(major, 1))


def ellipse_boundary(a, b):
    """Midpoint (Bresenham) ellipse outline for semi-axes ``a`` (x) and ``b`` (y).

    Returns the first-quadrant points ``(dx, dy)``; the outline is their
    four-way reflection.
    """
    a2, b2 = a * a, b * b
    pts = []
    x, y = 0, b
    # region 1: slope magnitude < 1, step in x
    p = b2 - a2 * b + 0.25 * a2
    while b2 * x < a2 * y:
        pts.append((x, y))
        x += 1
        if p < 0:
            p += 2 * b2 * x + b2
        else:
            y -= 1
            p += 2 * b2 * x - 2 * a2 * y + b2
    # region 2: step in y
    p = b2 * (x + 0.5) ** 2 + a2 * (y - 1) ** 2 - a2 * b2
    while y >= 0:
        pts.append((x, y))
        y -= 1
        if p > 0:
            p += a2 - 2 * a2 * y
        else:
            x += 1
            p += 2 * b2 * x - 2 * a2 * y + a2
    return pts


def _half_widths(a, b):
    """Filled half-width of the ellipse for every |dy| in 0..b."""
    widths = np.zeros(b + 1, dtype=np.int64)
    for dx, dy in ellipse_boundary(a, b):
        widths[dy] = max(widths[dy], dx)
    dy = np.arange(b + 1)
    implicit = np.floor(a * np.sqrt(np.clip(1.0 - (dy / b) ** 2, 0.0, None)) + 1e-9).astype(np.int64)
    return np.maximum(widths, implicit)


def ellipse_mask(spec, width, height):
    """Filled ellipse as a ``(height, width)`` 0/1 mask, clipped to the image."""
    a, b = spec.semi_minor, spec.semi_major
    cr, cc = _index(spec.center.y), _index(spec.center.x)
    half = _half_widths(a, b)
    mask = np.zeros((height, width), dtype=np.uint8)
    for dy in range(-b, b + 1):
        r = cr + dy
        if 0 <= r < height:
            w = half[abs(dy)]
            lo, hi = max(cc - w, 0), min(cc + w + 1, width)
            if lo < hi:
                mask[r, lo:hi] = 1
    return mask


def bilinear_resize(img, shape):
    """Bilinear resampling with corner-aligned grids (same size => identity)."""
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    oh, ow = shape

    def grid(n_in, n_out):
        if n_out == 1 or n_in == 1:
            pos = np.zeros(n_out)
        else:
            pos = np.arange(n_out) * ((n_in - 1) / (n_out - 1))
        lo = np.minimum(np.floor(pos).astype(np.int64), n_in - 1)
        hi = np.minimum(lo + 1, n_in - 1)
        return lo, hi, pos - lo

    r0, r1, fr = grid(h, oh)
    c0, c1, fc = grid(w, ow)
    top = img[r0][:, c0] * (1 - fc) + img[r0][:, c1] * fc
    bottom = img[r1][:, c0] * (1 - fc) + img[r1][:, c1] * fc
    return top * (1 - fr)[:, None] + bottom * fr[:, None]


def crop_and_normalize(gray, spec, shape=FACE_SHAPE):
    """Zero everything outside the ellipse, cut its bounding box, resize to ``shape``."""
    gray = np.asarray(gray)
    h, w = gray.shape
    mask = ellipse_mask(spec, w, h)
    cr, cc = _index(spec.center.y), _index(spec.center.x)
    r0, r1 = max(cr - spec.semi_major, 0), min(cr + spec.semi_major + 1, h)
    c0, c1 = max(cc - spec.semi_minor, 0), min(cc + spec.semi_minor + 1, w)
    if r0 >= r1 or c0 >= c1:
        raise DegenerateMaskError("ellipse bounding box does not intersect the image")
    face = np.where(mask, gray, 0)[r0:r1, c0:c1]
    out = bilinear_resize(face, shape)
    return np.clip(round_half_away(out), 0, 255).astype(np.uint8)


def extract_face(image, conn=Connectivity.EIGHT):
    """Run the whole preprocessing chain on one RGB or gray frame."""
    image = np.asarray(image)
    gray = to_grayscale(image) if image.ndim == 3 else image
    mask = largest_component(label_components(binarize(gray), conn))
    spec = estimate_axes(mask, centroid(mask))
    return crop_and_normalize(gray, spec)
