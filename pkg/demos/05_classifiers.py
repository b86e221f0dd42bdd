"""MLP and minimum distance classifiers on eigenface coordinates."""

import tempfile
from pathlib import Path

from tfrs.classify import MlpConfig, fit_min_distance, min_distance_predict, mlp_predict, mlp_train
from tfrs.eigen import FeatureMatrix, fit_pca, project, split_train_test
from tfrs.harness import preprocess_all, recognition_rate, synth_dataset
from tfrs.pipeline import lbp_feature

root = Path(tempfile.mkdtemp()) / "raw"
fs = preprocess_all(synth_dataset(2, 10, 12, root))
train, test = split_train_test(FeatureMatrix.stack([lbp_feature(f) for f in fs.faces], fs.labels))
eig = fit_pca(train, 20)
ztr = FeatureMatrix(project(eig, train.data), train.labels)
zte = project(eig, test.data)

md = fit_min_distance(ztr)
print("minimum distance:", recognition_rate(min_distance_predict(md, zte), test.labels))

# Momentum 0 is plain gradient descent; momentum 1 never leaves the initial weights.
for mc in (0.0, 0.5, 0.9, 1.0):
    cfg = MlpConfig(hidden=(32, 32, 32), momentum=mc, epochs=500, seed=0)
    net = mlp_train(ztr, cfg)
    rate = recognition_rate(mlp_predict(net, zte), test.labels)
    print(f"mlp mc={mc:.1f}: loss {net.loss_history[0]:7.2f} -> {net.loss_history[-1]:7.2f}, rate {rate:.2f}")
