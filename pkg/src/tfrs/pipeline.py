"""Per-image feature extractors and a serializable fitted recognizer.

A fitted `Recognizer` bundles everything needed to classify a new face:
feature settings, the eigenspace and the trained classifier. On disk it is

    b"TFRSPIPE" | u32 header length | JSON header | TFRSEIG1 block | TFRSMLP1 or TFRSMDC1 block

The JSON header carries ``feature``, ``alpha``, ``beta``, ``block_size``,
``classifier`` and ``classes`` (the label of each MLP output unit).
"""

import json
from dataclasses import dataclass

import numpy as np

from . import _binio
from .classify import (
    MlpModel,
    fit_min_distance,
    min_distance_predict,
    min_distance_to_bytes,
    mlp_predict,
    mlp_to_bytes,
    mlp_train,
    read_min_distance,
    read_mlp,
)
from .eigen import FeatureMatrix, eigen_model_to_bytes, fit_pca, project, read_eigen_model
from .errors import ParseError
from .lbp import block_features, lbp_image
from .wavelet import FusionWeights, average_detail, confidence_matrix, dwt2_single, flatten

__all__ = ["wavelet_bands", "wavelet_feature", "lbp_feature", "Recognizer", "fit_recognizer"]

PIPE_MAGIC = b"TFRSPIPE"


def wavelet_bands(face):
    """``(LL, D)``: the approximation band and the mean of the three detail bands."""
    s = dwt2_single(face)
    return s.ll, average_detail(s)


def wavelet_feature(face, weights):
    ll, d = wavelet_bands(face)
    return flatten(confidence_matrix(ll, d, weights))


def lbp_feature(face, block_size=8):
    return block_features(lbp_image(face), block_size)


@dataclass
class Recognizer:
    feature: str  # "wavelet" or "lbp"
    weights: FusionWeights
    block_size: int
    eigen: object
    classifier: object  # MlpModel or MinDistModel

    def features(self, faces):
        if self.feature == "wavelet":
            return np.array([wavelet_feature(f, self.weights) for f in faces])
        return np.array([lbp_feature(f, self.block_size) for f in faces])

    def predict(self, faces):
        z = project(self.eigen, self.features(faces))
        if isinstance(self.classifier, MlpModel):
            return mlp_predict(self.classifier, z)
        return min_distance_predict(self.classifier, z)

    def to_bytes(self):
        is_mlp = isinstance(self.classifier, MlpModel)
        header = {
            "feature": self.feature,
            "alpha": self.weights.alpha,
            "beta": self.weights.beta,
            "block_size": self.block_size,
            "classifier": "ann" if is_mlp else "mindist",
            "classes": [str(c) for c in self.classifier.classes],
        }
        raw = json.dumps(header, sort_keys=True).encode("utf-8")
        body = mlp_to_bytes(self.classifier) if is_mlp else min_distance_to_bytes(self.classifier)
        return PIPE_MAGIC + _binio.u32(len(raw)) + raw + eigen_model_to_bytes(self.eigen) + body

    @classmethod
    def from_bytes(cls, data):
        r = _binio.Reader(data)
        r.magic(PIPE_MAGIC)
        start = r.pos
        try:
            header = json.loads(r.take(r.u32()).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ParseError(f"bad recognizer header: {exc}", start) from None
        eigen = read_eigen_model(r)
        if header["classifier"] == "ann":
            clf = read_mlp(r, header["classes"])
        else:
            clf = read_min_distance(r)
        weights = FusionWeights(header["alpha"], header["beta"])
        return cls(header["feature"], weights, header["block_size"], eigen, clf)


def fit_recognizer(faces, labels, feature, classifier, k, weights=FusionWeights(0.5, 0.5),
                   mlp=None, block_size=8):
    """Fit eigenspace and classifier on the given (training) faces."""
    r = Recognizer(feature, weights, block_size, None, None)
    train = FeatureMatrix(r.features(faces), labels)
    r.eigen = fit_pca(train, k)
    z = FeatureMatrix(project(r.eigen, train.data), train.labels)
    if classifier == "ann":
        r.classifier = mlp_train(z, mlp) if mlp is not None else mlp_train(z)
    else:
        r.classifier = fit_min_distance(z)
    return r
