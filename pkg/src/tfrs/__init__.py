"""Thermal face recognition with Haar confidence-matrix and block-LBP features,
eigenface PCA, and MLP / minimum-distance classifiers."""

from .classify import (
    MinDistModel,
    MlpConfig,
    MlpModel,
    classify_min_distance,
    fit_min_distance,
    mlp_forward,
    mlp_gradient,
    mlp_predict,
    mlp_train,
)
from .eigen import EigenModel, FeatureMatrix, fit_pca, jacobi_eigh, project, split_train_test
from .errors import *  # noqa: F401,F403
from .harness import (
    DatasetManifest,
    ExperimentConfig,
    FaceSet,
    ResultsTable,
    emit_results,
    preprocess_all,
    recognition_rate,
    run_lbp_experiment,
    run_wavelet_experiment,
    scan_dataset,
    synth_dataset,
)
from .imageio import load_pnm, read_pnm, save_pnm, to_grayscale, write_pnm
from .lbp import block_features, lbp_code, lbp_image
from .pipeline import Recognizer, fit_recognizer
from .preprocess import (
    Centroid,
    Connectivity,
    EllipseSpec,
    binarize,
    centroid,
    crop_and_normalize,
    ellipse_mask,
    estimate_axes,
    extract_face,
    label_components,
    largest_component,
    mean_gray,
)
from .wavelet import (
    FusionWeights,
    SubbandSet,
    average_detail,
    confidence_matrix,
    dwt2_single,
    flatten,
    haar1d_full,
    haar1d_step,
    standard_decomposition,
    sweep_weights,
)

__version__ = "0.1.0"
