"""Result tables through the library and through the tfrs command."""

import subprocess
import sys
import tempfile
from pathlib import Path

from tfrs.classify import MlpConfig
from tfrs.harness import ExperimentConfig, emit_results, run_experiment, scan_dataset, synth_dataset

root = Path(tempfile.mkdtemp()) / "synth"
synth_dataset(1, 10, 12, root)
manifest = scan_dataset(root)

# Wavelet features, every (alpha, beta) row, ANN columns for k=10..50.
cfg = ExperimentConfig(feature="wavelet", classifier="both", mlp=MlpConfig(epochs=500))
print(emit_results(run_experiment(manifest, cfg, workers=4), "markdown").decode())

cfg = ExperimentConfig(feature="lbp", classifier="both", mlp=MlpConfig(epochs=500))
print(emit_results(run_experiment(manifest, cfg, workers=4), "markdown").decode())

# The command line does the same; output is byte-stable for a given seed.
cmd = [sys.executable, "-m", "tfrs.cli", "run", "--in", str(root), "--classifier", "mindist",
       "--mindist-k", "10", "--alpha-beta-sweep"]
print(subprocess.run(cmd, capture_output=True, text=True, check=True).stdout)
