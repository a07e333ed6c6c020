"""Batch command line: train, predict, benchmark, demo.

Exit codes: 0 on success, 1 for usage problems (bad flags, unreadable or
mismatched files), 2 for numeric failures during training (infeasible
program, cycling, singular covariance).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from .baselines import hinge_objective, train_lda, train_linear_svm
from .data import (DataError, Dataset, SHAPE_NAMES, apply_normalizer,
                   demo_gaussian_pair, drop_zero_variance, fit_normalizer,
                   gen_shape, load_csv)
from .discriminators import DiscriminatorError, fit_discriminator
from .evaluation import (BenchmarkConfig, EvalError, METHOD_NAMES, roc_auc,
                         report_to_csv, run_benchmark, summary_table)
from .kernel import KernelSpec, ktransform, median_pairwise_distance, \
    train_klcc
from .lcc import (DEFAULT_LAMBDA, DEFAULT_SIGMA, TrainingError, class_centers,
                  fqcc_epsilons, score, train_fqcc, train_lcc, transform)
from .lp import CyclingError, LpFormatError
from .model_io import (ModelIoError, SavedClassifier, load_classifier,
                       predict_saved, save_classifier)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2

GEN_DEFAULT_M = 300
GEN_DEFAULT_NOISE = 0.03
GEN_DEFAULT_M_PER_CLASS = 200
DEMO_BINS = 40

DISCRIMINATOR_FLAGS = {"dist": "dist", "1nn": "one_nn", "1sv": "one_sv"}


class UsageError(ValueError):
    """Bad flag combination or unusable input file."""


class _Parser(argparse.ArgumentParser):
    """argparse normally exits 2 on bad flags; this command reserves 2
    for numeric failures, so flag problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_gen_spec(text: str, seed: int) -> Dataset:
    """Build a synthetic dataset from "name" or "name:key=val,key=val".

    gaussian takes m_per_class; the planar shapes take m and noise.
    """
    name, _, tail = text.partition(":")
    name = name.strip()
    options: dict[str, float] = {}
    if tail.strip():
        for item in tail.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise UsageError(f"generator option {item!r} is not key=val")
            try:
                options[key.strip()] = float(value)
            except ValueError:
                raise UsageError(
                    f"generator option {key.strip()!r} has non-numeric "
                    f"value {value!r}") from None

    def take_int(key, default):
        raw = options.pop(key, default)
        if raw != int(raw):
            raise UsageError(f"generator option {key!r} must be an integer")
        return int(raw)

    if name == "gaussian":
        m_per_class = take_int("m_per_class", GEN_DEFAULT_M_PER_CLASS)
        if options:
            raise UsageError(
                f"unknown gaussian option(s): {', '.join(sorted(options))}")
        return demo_gaussian_pair(m_per_class=m_per_class, seed=seed)
    if name in SHAPE_NAMES:
        m = take_int("m", GEN_DEFAULT_M)
        noise = float(options.pop("noise", GEN_DEFAULT_NOISE))
        if options:
            raise UsageError(
                f"unknown {name} option(s): {', '.join(sorted(options))}")
        return gen_shape(name, m, noise, seed)
    raise UsageError(f"unknown generator {name!r}; choose from gaussian, "
                     + ", ".join(SHAPE_NAMES))


def _is_number(text: str) -> bool:
    try:
        float(text.strip())
    except ValueError:
        return False
    return True


def _load_dataset(args) -> Dataset:
    if args.data is not None:
        try:
            with open(args.data, newline="", encoding="utf-8") as fh:
                first = next(csv.reader(fh), None)
        except OSError as exc:
            raise UsageError(f"cannot read {args.data}: {exc}") from None
        has_header = bool(first) and any(c.strip() and not _is_number(c)
                                         for c in first)
        return load_csv(args.data, has_header=has_header)
    return parse_gen_spec(args.gen, args.seed)


def _out_path(out_dir: str, filename: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, filename)


def _parse_width(raw: str) -> float | None:
    if raw == "median":
        return None
    try:
        return float(raw)
    except ValueError:
        raise UsageError(
            f"--rbf-width must be a number or 'median', got {raw!r}") from None


# ------------------------------------------------------------------ train

def _fit(args, ready: Dataset):
    """Train the requested method; list the summary lines its model earns."""
    lam = args.lam
    sigma = DEFAULT_SIGMA if args.sigma is None else args.sigma
    lines = []
    if args.method == "lcc":
        model = train_lcc(ready, lam=DEFAULT_LAMBDA if lam is None else lam,
                          sigma=sigma)
        objective = (model.c_neg_hat - model.c_pos_hat
                     + model.lam * model.epsilons.sum())
        eps = model.epsilons
    elif args.method == "fqcc":
        model = train_fqcc(ready, lam=DEFAULT_LAMBDA if lam is None else lam,
                           sigma=sigma, seed=args.seed)
        objective = model.objective
        eps = fqcc_epsilons(ready.features, ready.labels, model.beta,
                            model.c_neg_hat, model.c_pos_hat, model.sigma)
    elif args.method == "klcc":
        kernel = args.kernel or "rbf"
        width = _parse_width(args.rbf_width)
        if kernel == "rbf" and width is None:
            width = median_pairwise_distance(ready.features)
        spec = KernelSpec(kernel, width if kernel == "rbf" else None)
        model = train_klcc(ready, spec,
                           lam=DEFAULT_LAMBDA if lam is None else lam,
                           sigma=sigma)
        objective = (model.c_neg_hat - model.c_pos_hat
                     + model.lam * model.epsilons.sum())
        eps = model.epsilons
        lines.append(f"kernel {spec.kind}"
                     + (f", width {spec.rbf_width:.6g}"
                        if spec.rbf_width is not None else ""))
    elif args.method == "lda":
        model = train_lda(ready, lambda_reg=0.5 if lam is None else lam)
        lines.append(f"shrinkage lambda_reg {model.lambda_reg:.6g}")
        return model, None, lines
    elif args.method == "svm":
        model = train_linear_svm(ready, lam=1.0 if lam is None else lam,
                                 seed=args.seed)
        objective = hinge_objective(ready, model.lam, model.weight,
                                    model.intercept)
        lines.append(f"objective {objective:.10g}")
        return model, None, lines
    else:
        raise UsageError(f"unknown method {args.method!r}; choose from "
                         + ", ".join(METHOD_NAMES))

    rule = None
    if args.discriminator is not None:
        project = transform if args.method == "lcc" else ktransform
        rule = fit_discriminator(DISCRIMINATOR_FLAGS[args.discriminator],
                                 project(model, ready.features),
                                 ready.labels, model)
        lines.append(f"discriminator {rule.kind} fitted on "
                     f"{ready.m} projected values")
    lines.insert(0, f"objective {objective:.10g}")
    lines.append(f"epsilons min/mean/max {eps.min():.6g} / {eps.mean():.6g}"
                 f" / {eps.max():.6g}")
    lines.append(f"center gap {model.c_pos_hat - model.c_neg_hat:.6g} "
                 f"(c_neg_hat {model.c_neg_hat:.6g}, "
                 f"c_pos_hat {model.c_pos_hat:.6g})")
    return model, rule, lines


def cmd_train(args) -> int:
    if args.discriminator is not None and args.method not in ("lcc", "klcc"):
        raise UsageError("--discriminator pairs with lcc or klcc only")
    data = _load_dataset(args)
    if data.m == 0:
        raise UsageError("training data is empty")
    pruned, kept = drop_zero_variance(data)
    norm = fit_normalizer(pruned)
    ready = apply_normalizer(norm, pruned)
    model, rule, lines = _fit(args, ready)
    saved = SavedClassifier(args.method, model, rule, norm, kept, data.n)
    path = _out_path(args.out, "model.txt")
    save_classifier(path, saved)
    labels, _ = predict_saved(saved, data.features)
    accuracy = float(np.mean(labels == data.labels))
    print(f"method {args.method}")
    print(f"trained on {data.m} instances, {ready.n} of {data.n} "
          "feature(s) kept")
    for line in lines:
        print(line)
    print(f"train accuracy {accuracy:.4f}")
    print(f"model written to {path}")
    return EXIT_OK


# ---------------------------------------------------------------- predict

def _read_matrix(path: str) -> np.ndarray:
    """Numeric CSV rows; a non-numeric first line is skipped as a header."""
    rows: list[list[float]] = []
    width = None
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    with fh:
        for line_no, cells in enumerate(csv.reader(fh), start=1):
            if not cells or all(c.strip() == "" for c in cells):
                continue
            try:
                parsed = [float(c) for c in cells]
            except ValueError:
                if width is None and not rows:
                    continue
                raise UsageError(
                    f"line {line_no}: non-numeric cell") from None
            if not all(np.isfinite(parsed)):
                raise UsageError(f"line {line_no}: non-finite value")
            if width is None:
                width = len(parsed)
            elif len(parsed) != width:
                raise UsageError(f"line {line_no}: expected {width} cells, "
                                 f"got {len(parsed)}")
            rows.append(parsed)
    if not rows:
        return np.zeros((0, 0))
    return np.array(rows, dtype=np.float64)


def cmd_predict(args) -> int:
    saved = load_classifier(args.model)
    matrix = _read_matrix(args.data)
    out_lines = ["label,score"]
    true_labels = None
    if matrix.size:
        feats = matrix
        expected = saved.original_n
        if expected is not None and matrix.shape[1] == expected + 1:
            tail = np.unique(matrix[:, -1])
            if set(tail) <= {-1.0, 1.0} or set(tail) <= {0.0, 1.0}:
                true_labels = np.where(matrix[:, -1] <= 0.0, -1, 1)
                feats = matrix[:, :-1]
        labels, scores = predict_saved(saved, feats)
        out_lines += [f"{int(l)},{float(s)!r}" for l, s in zip(labels, scores)]
    text = "\n".join(out_lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        report = sys.stderr
    else:
        path = _out_path(args.out, "predictions.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"predictions written to {path}")
        report = sys.stdout
    if true_labels is not None:
        accuracy = float(np.mean(labels == true_labels))
        print(f"accuracy {accuracy:.4f}", file=report)
    return EXIT_OK


# -------------------------------------------------------------- benchmark

def _benchmark_params(args, names) -> dict:
    params: dict = {}
    if args.sigma is not None:
        params["sigma"] = args.sigma
    if args.lam is not None:
        if set(names) & {"lcc", "fqcc", "klcc"}:
            params["lam"] = args.lam
        if "lda" in names:
            params["lambda_reg"] = args.lam
        if "svm" in names:
            params["svm_lambda"] = args.lam
    if args.kernel is not None:
        params["kernel"] = args.kernel
    if args.rbf_width != "median":
        params["rbf_width"] = _parse_width(args.rbf_width)
    if args.discriminator is not None:
        params["discriminator"] = DISCRIMINATOR_FLAGS[args.discriminator]
    return params


def cmd_benchmark(args) -> int:
    names = [n.strip() for n in args.method.split(",") if n.strip()]
    if not names:
        raise UsageError("--method needs at least one name")
    if len(set(names)) != len(names):
        raise UsageError("--method names must be distinct")
    for name in names:
        if name not in METHOD_NAMES:
            raise UsageError(f"unknown method {name!r}; choose from "
                             + ", ".join(METHOD_NAMES))
    data = _load_dataset(args)
    config = BenchmarkConfig(
        data=data, methods=tuple(names), runs=args.runs, seed=args.seed,
        reference="lcc" if "lcc" in names else names[0],
        procedure=args.procedure, folds=args.folds,
        params=_benchmark_params(args, names))
    report = run_benchmark(config)
    path = _out_path(args.out, "report.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_to_csv(report))
    print(summary_table(report))
    print(f"report written to {path}")
    return EXIT_OK


# ------------------------------------------------------------------- demo

def _histogram_rows(stage, values, labels):
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, DEMO_BINS + 1)
    neg, _ = np.histogram(values[labels == -1], bins=edges)
    pos, _ = np.histogram(values[labels == 1], bins=edges)
    return [f"{stage},{float(edges[i])!r},{float(edges[i + 1])!r},"
            f"{int(neg[i])},{int(pos[i])}" for i in range(DEMO_BINS)]


def cmd_demo(args) -> int:
    data = demo_gaussian_pair(seed=args.seed)
    norm = fit_normalizer(data)
    ready = apply_normalizer(norm, data)
    c_neg, c_pos = class_centers(ready)
    gap = c_pos - c_neg
    beta0 = gap / np.abs(gap).max()
    before = ready.features @ beta0
    model = train_lcc(ready)
    after = transform(model, ready.features)

    header = [
        "# two-Gaussian example: projected training values, 200 per class,"
        f" seed {args.seed}",
        "# 'before' projects z-scored features onto beta0 ="
        " (C_pos - C_neg) / max-norm(C_pos - C_neg),",
        "# i.e. the raw center difference scaled into the unit box;"
        " 'after' projects onto the trained coefficients",
        "stage,bin_left,bin_right,count_neg,count_pos",
    ]
    rows = (_histogram_rows("before", before, ready.labels)
            + _histogram_rows("after", after, ready.labels))
    hist_path = _out_path(args.out, "demo_histograms.csv")
    with open(hist_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(header + rows) + "\n")

    roc = roc_auc(score(model, ready.features), ready.labels)
    roc_path = _out_path(args.out, "demo_roc.csv")
    with open(roc_path, "w", encoding="utf-8") as fh:
        fh.write("fpr,tpr\n")
        fh.write("".join(f"{float(p[0])!r},{float(p[1])!r}\n"
                         for p in roc.curve))

    neg_max = float(after[ready.labels == -1].max())
    pos_min = float(after[ready.labels == 1].min())
    overlap = "yes" if neg_max >= pos_min else "no"
    print(f"center gap after training {model.c_pos_hat - model.c_neg_hat:.6g}")
    print(f"projected class supports overlap after training: {overlap} "
          f"(negative max {neg_max:.6g}, positive min {pos_min:.6g})")
    print(f"train AUC {roc.auc:.4f}")
    print(f"histograms written to {hist_path}")
    print(f"roc points written to {roc_path}")
    return EXIT_OK


# ------------------------------------------------------------------ wiring

def _add_data_flags(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--data", help="CSV file, label in the last column")
    group.add_argument("--gen", help="generator spec: gaussian[:m_per_class=N]"
                       " or one of " + "/".join(SHAPE_NAMES)
                       + "[:m=N,noise=X]")


def _add_hyper_flags(sub):
    sub.add_argument("--lambda", dest="lam", type=float, default=None,
                     help="the selected method's own lambda: slack weight for"
                     " lcc/fqcc/klcc, shrinkage for lda, regularization"
                     " for svm")
    sub.add_argument("--sigma", type=float, default=None,
                     help="slack floor / center-gap bound (negative)")
    sub.add_argument("--kernel", choices=("linear", "rbf"), default=None)
    sub.add_argument("--rbf-width", default="median",
                     help="RBF width, a number or 'median' (default)")
    sub.add_argument("--discriminator", choices=sorted(DISCRIMINATOR_FLAGS),
                     default=None,
                     help="replace the midpoint rule of lcc/klcc")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lcckit",
                     description="Train and evaluate centralization "
                     "classifiers in batch.")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    train = subs.add_parser("train", help="fit one method, write a model"
                            " file")
    _add_data_flags(train)
    train.add_argument("--method", required=True)
    _add_hyper_flags(train)
    train.add_argument("--seed", type=int, default=42)
    train.add_argument("--out", default=".")
    train.set_defaults(func=cmd_train)

    predict = subs.add_parser("predict", help="label a CSV with a saved"
                              " model")
    predict.add_argument("--model", required=True, help="model file from"
                         " train")
    predict.add_argument("--data", required=True,
                         help="feature CSV; an extra -1/+1 (or 0/1) last"
                         " column is scored for accuracy")
    predict.add_argument("--out", default=None,
                         help="directory for predictions.csv; omit to print")
    predict.set_defaults(func=cmd_predict)

    bench = subs.add_parser("benchmark", help="run an evaluation procedure")
    _add_data_flags(bench)
    bench.add_argument("--method", required=True,
                       help="comma-separated names from "
                       + ", ".join(METHOD_NAMES))
    _add_hyper_flags(bench)
    bench.add_argument("--runs", type=int, default=100)
    bench.add_argument("--procedure", type=int, choices=(1, 2), default=1)
    bench.add_argument("--folds", type=int, default=10)
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--out", default=".")
    bench.set_defaults(func=cmd_benchmark)

    demo = subs.add_parser("demo", help="regenerate the two-Gaussian"
                           " example CSVs")
    demo.add_argument("--seed", type=int, default=42)
    demo.add_argument("--out", default=".")
    demo.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, DataError, EvalError, ModelIoError,
            DiscriminatorError, LpFormatError, OSError) as exc:
        print(f"lcckit {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TrainingError, CyclingError, np.linalg.LinAlgError) as exc:
        print(f"lcckit {args.subcommand}: numeric failure: {exc}",
              file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
