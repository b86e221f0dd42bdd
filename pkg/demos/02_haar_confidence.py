"""Haar wavelet bands of a face and the LL/detail confidence matrix."""

import tempfile
from pathlib import Path

import numpy as np

from tfrs import wavelet
from tfrs.harness import preprocess_all, synth_dataset

# A one-dimensional warm-up: four samples, two levels.
print("full Haar of [10, 4, 9, 5]:", wavelet.haar1d_full([10, 4, 9, 5]))
means, details = wavelet.haar1d_step([10, 4, 9, 5])
print("one step -> means", means, "details", details)

root = Path(tempfile.mkdtemp()) / "raw"
faces = preprocess_all(synth_dataset(3, 2, 2, root)).faces
face = faces[0].astype(float)

bands = wavelet.dwt2_single(face)
for name in ("ll", "hl", "lh", "hh"):
    b = getattr(bands, name)
    print(f"{name.upper()}: shape {b.shape}, energy {np.sum(b**2):.0f}")

# Nothing is lost: the inverse rebuilds the face exactly.
print("reconstruction max error:", np.abs(wavelet.idwt2_single(bands) - face).max())

# Confidence matrix T = alpha * LL + beta * mean(detail bands), for every sweep row.
d = wavelet.average_detail(bands)
for w in wavelet.sweep_weights():
    t = wavelet.confidence_matrix(bands.ll, d, w)
    print(f"alpha={w.alpha:.1f} beta={w.beta:.1f}  T mean {t.mean():8.3f}  T std {t.std():7.3f}")

print("feature vector length:", wavelet.flatten(t).size)
