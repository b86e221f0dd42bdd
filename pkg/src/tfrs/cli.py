"""``tfrs`` command line: synth, preprocess, run, eval.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

import argparse
import json
import logging
import sys
from dataclasses import fields, replace
from pathlib import Path

from .classify import MlpConfig
from .errors import DataError
from .harness import (
    ExperimentConfig,
    emit_results,
    load_faces,
    preprocess_all,
    recognition_rate,
    run_experiment,
    scan_dataset,
    synth_dataset,
)
from .imageio import save_pnm
from .pipeline import Recognizer, fit_recognizer
from .wavelet import FusionWeights

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("tfrs")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _add_mode(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--strict", dest="strict", action="store_true", default=True,
                   help="abort if any image fails preprocessing (default)")
    g.add_argument("--lenient", dest="strict", action="store_false",
                   help="drop failed images together with their train/test partner")


def build_parser():
    parser = _Parser(prog="tfrs", description="Thermal face recognition experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate a synthetic thermal-face dataset")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--subjects", type=int, default=10)
    p.add_argument("--per-subject", type=int, default=12)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("preprocess", help="write normalized 112x92 faces")
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--per-subject", type=int)
    p.add_argument("--workers", type=int, default=1)
    _add_mode(p)

    p = sub.add_parser("run", help="run an experiment and emit a results table")
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields")
    p.add_argument("--feature", choices=["wavelet", "lbp"])
    p.add_argument("--classifier", choices=["ann", "mindist", "both"])
    p.add_argument("--eigen", type=_int_list, help="eigenvector counts, e.g. 10,20,30,40,50")
    p.add_argument("--alpha-beta-sweep", dest="sweep", action="store_true", default=None)
    p.add_argument("--alpha", type=float, help="LL weight when not sweeping (beta = 1 - alpha)")
    p.add_argument("--mindist-k", type=int, help="eigenvectors for the minimum-distance column")
    p.add_argument("--hidden", type=_int_list, help="three hidden-layer widths")
    p.add_argument("--epochs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--per-subject", type=int)
    p.add_argument("--preprocessed", action="store_true", help="inputs are already 112x92 faces")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--save-model", type=Path, help="save the fitted recognizer (single-cell runs only)")
    _add_mode(p)

    p = sub.add_parser("eval", help="classify a dataset with a saved recognizer")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--split", choices=["all", "train", "test"], default="all")
    p.add_argument("--preprocessed", action="store_true")
    p.add_argument("--out", type=Path)
    p.add_argument("--workers", type=int, default=1)
    _add_mode(p)
    return parser


def _write(path, data):
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        path.write_bytes(data)


def _faces(args):
    manifest = scan_dataset(args.input, getattr(args, "per_subject", None))
    if args.preprocessed:
        return manifest, load_faces(manifest, args.workers)
    return manifest, preprocess_all(manifest, args.strict, args.workers)


def load_config(path):
    """ExperimentConfig from a JSON document; unknown keys are a usage error."""
    doc = json.loads(Path(path).read_text())
    known = {f.name for f in fields(ExperimentConfig)}
    extra = set(doc) - known
    if extra:
        raise UsageError(f"unknown config keys: {sorted(extra)}")
    if "mlp" in doc:
        mlp = dict(doc["mlp"])
        if "hidden" in mlp:
            mlp["hidden"] = tuple(mlp["hidden"])
        doc["mlp"] = MlpConfig(**mlp)
    if "eigen_counts" in doc:
        doc["eigen_counts"] = tuple(doc["eigen_counts"])
    return ExperimentConfig(**doc)


def config_from_args(args):
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    changes = {}
    if args.feature:
        changes["feature"] = args.feature
        if not args.config and not args.classifier and args.feature == "lbp":
            changes["classifier"] = "both"
    if args.classifier:
        changes["classifier"] = args.classifier
    if args.eigen:
        changes["eigen_counts"] = tuple(args.eigen)
    if args.sweep is not None:
        changes["sweep"] = True
    elif args.alpha is not None or not args.config:
        changes["sweep"] = False
    if args.alpha is not None:
        changes["alpha"] = args.alpha
    if args.mindist_k is not None:
        changes["mindist_k"] = args.mindist_k
    if args.seed is not None:
        changes["seed"] = args.seed
    mlp = {}
    if args.hidden:
        mlp["hidden"] = tuple(args.hidden)
    if args.epochs is not None:
        mlp["epochs"] = args.epochs
    if mlp:
        changes["mlp"] = replace(cfg.mlp, **mlp)
    return replace(cfg, **changes)


def cmd_synth(args):
    m = synth_dataset(args.seed, args.subjects, args.per_subject, args.out)
    log.info("wrote %d images for %d subjects to %s", len(m.rows), len(m.subjects), args.out)


def cmd_preprocess(args):
    manifest = scan_dataset(args.input, args.per_subject)
    fs = preprocess_all(manifest, args.strict, args.workers)
    rows = [r for i, r in enumerate(manifest.rows) if i not in set(fs.dropped)]
    for (label, path), face in zip(rows, fs.faces):
        dest = args.out / label / (Path(path).stem + ".pgm")
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_bytes(save_pnm(face))
    for path, err in fs.failures:
        log.warning("failed: %s: %s", path, err)


def cmd_run(args):
    cfg = config_from_args(args)
    if args.save_model:
        n_rows = len(cfg.weights) if cfg.feature == "wavelet" else 1
        n_cols = {"ann": len(cfg.eigen_counts), "mindist": 1, "both": len(cfg.eigen_counts) + 1}[cfg.classifier]
        if n_rows * n_cols != 1:
            raise UsageError("--save-model needs a single-cell run: one k, one classifier, no sweep")
    manifest, fs = _faces(args)
    table = run_experiment(fs, cfg, args.strict, args.workers)
    if cfg.feature == "lbp":
        table.row_labels = [manifest.name]
    _write(args.out, emit_results(table, args.format))
    if args.save_model:
        k = cfg.eigen_counts[0] if cfg.classifier == "ann" else cfg.mindist_k
        weights = cfg.weights[0]
        rec = fit_recognizer(fs.faces[0::2], fs.labels[0::2], cfg.feature, cfg.classifier, k,
                             weights=weights, mlp=replace(cfg.mlp, seed=cfg.seed), block_size=cfg.block_size)
        args.save_model.write_bytes(rec.to_bytes())


def cmd_eval(args):
    rec = Recognizer.from_bytes(args.model.read_bytes())
    manifest, fs = _faces(args)
    paths = [str(p) for i, (_, p) in enumerate(manifest.rows) if i not in set(fs.dropped)]
    sel = {"all": slice(None), "train": slice(0, None, 2), "test": slice(1, None, 2)}[args.split]
    faces, labels, paths = fs.faces[sel], fs.labels[sel], paths[sel]
    pred = rec.predict(faces)
    lines = ["path,actual,predicted"] + [f"{p},{a},{q}" for p, a, q in zip(paths, labels, pred)]
    _write(args.out, ("\n".join(lines) + "\n").encode("utf-8"))
    print(f"recognition rate: {recognition_rate(pred, labels):.2f}", file=sys.stderr)


COMMANDS = {"synth": cmd_synth, "preprocess": cmd_preprocess, "run": cmd_run, "eval": cmd_eval}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"tfrs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"tfrs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"tfrs: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
