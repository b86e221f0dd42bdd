"""Eigenfaces on synthetic faces: spectrum, projection and reconstruction."""

import tempfile
from pathlib import Path

import numpy as np

from tfrs.eigen import FeatureMatrix, fit_pca, project, split_train_test
from tfrs.harness import preprocess_all, synth_dataset
from tfrs.pipeline import wavelet_feature
from tfrs.wavelet import FusionWeights

root = Path(tempfile.mkdtemp()) / "raw"
fs = preprocess_all(synth_dataset(1, 10, 12, root))
w = FusionWeights(0.5, 0.5)
data = FeatureMatrix.stack([wavelet_feature(f, w) for f in fs.faces], fs.labels)
train, test = split_train_test(data)
print("train", train.data.shape, " test", test.data.shape)

model = fit_pca(train, 40)
share = np.cumsum(model.eigenvalues) / model.eigenvalues.sum()
for k in (1, 5, 10, 20, 40):
    print(f"k={k:2d}  variance captured {share[k - 1]:.3f}")

# Residual energy of the training set shrinks as components are added.
for k in (5, 10, 20, 40):
    m = model.truncate(k)
    recon = project(m, train.data) @ m.components + m.mean
    print(f"k={k:2d}  mean squared residual {np.mean((train.data - recon) ** 2):.3f}")

z = project(model.truncate(10), test.data)
print("test coordinates:", z.shape)
