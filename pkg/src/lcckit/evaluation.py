"""Benchmark machinery: stratified resampling, ROC/AUC, rank-sum
significance testing, and the two evaluation procedures used throughout
the numeric comparisons (repeated 70/30 splits with default parameters,
and per-method grid search over 10-fold cross validation).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .baselines import (
    DEFAULT_LDA_REG,
    DEFAULT_SVM_LAMBDA,
    lda_score,
    svm_score,
    train_lda,
    train_linear_svm,
)
from .data import (
    DataError,
    Dataset,
    apply_normalizer,
    drop_zero_variance,
    fit_normalizer,
    normalize_features,
    require_both_classes,
)
from .discriminators import (
    DEFAULT_H,
    KINDS,
    discriminator_score,
    fit_discriminator,
)
from .kernel import (
    KernelSpec,
    kscore,
    ktransform,
    median_pairwise_distance,
    train_klcc,
)
from .lcc import (
    DEFAULT_LAMBDA,
    DEFAULT_SIGMA,
    fqcc_score,
    score,
    train_fqcc,
    train_lcc,
    transform,
)

EXACT_RANK_SUM_LIMIT = 12
METHOD_NAMES = ("lcc", "fqcc", "klcc", "lda", "svm")

# fifteen values each, matching the published search ranges
GRID_SIGMA = tuple(-(2.0 ** e) for e in range(-7, 8))
GRID_LDA_REG = tuple((i + 1) / 15.0 for i in range(15))
GRID_SVM_LAMBDA = tuple(10.0 ** ((4 * i - 30) / 15.0) for i in range(15))


class EvalError(ValueError):
    """Bad evaluation configuration or unusable inputs."""


# ------------------------------------------------------------- resampling

def stratified_split(data: Dataset, train_fraction: float,
                     seed: int) -> tuple[Dataset, Dataset]:
    """Per-class split: floor(fraction * class size) rows go to training.

    Both returned datasets keep their rows in the original storage order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise EvalError(f"train_fraction must be in (0, 1), "
                        f"got {train_fraction}")
    require_both_classes(data, "stratified_split")
    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for label in (-1, 1):
        idx = np.nonzero(data.labels == label)[0]
        n_train = int(math.floor(train_fraction * idx.size))
        if n_train == 0 or n_train == idx.size:
            raise EvalError(
                f"class {label} with {idx.size} instances would leave an "
                f"empty train or test side at fraction {train_fraction}")
        picked = rng.permutation(idx.size)[:n_train]
        chosen = np.zeros(idx.size, dtype=bool)
        chosen[picked] = True
        train_idx.extend(idx[chosen])
        test_idx.extend(idx[~chosen])
    return data.take(np.sort(train_idx)), data.take(np.sort(test_idx))


def stratified_kfold(data: Dataset, k: int, seed: int) -> list[np.ndarray]:
    """k disjoint index arrays; per-class counts differ by at most one."""
    if k < 2:
        raise EvalError("k must be at least 2")
    require_both_classes(data, "stratified_kfold")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for label in (-1, 1):
        idx = np.nonzero(data.labels == label)[0]
        if idx.size < k:
            raise EvalError(f"class {label} has {idx.size} instances, "
                            f"fewer than k={k}")
        shuffled = idx[rng.permutation(idx.size)]
        for pos, row in enumerate(shuffled):
            folds[pos % k].append(int(row))
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


# ---------------------------------------------------------------- ROC/AUC

@dataclass(frozen=True)
class RocResult:
    """Area under the ROC curve plus the curve itself.

    curve rows are (false positive rate, true positive rate), one point
    per distinct score value, from (0, 0) to (1, 1).
    """

    auc: float
    curve: np.ndarray

    def __post_init__(self) -> None:
        if not 0.0 <= self.auc <= 1.0:
            raise EvalError(f"auc {self.auc} outside [0, 1]")
        frozen = np.array(np.asarray(self.curve, dtype=np.float64))
        frozen.setflags(write=False)
        object.__setattr__(self, "curve", frozen)


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j < values.size and values[order[j]] == values[order[i]]:
            j += 1
        ranks[order[i:j]] = (i + j + 1) / 2.0
        i = j
    return ranks


def roc_auc(scores, labels) -> RocResult:
    """Rank-statistic AUC (ties count one half) with a tie-grouped curve."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.ndim != 1 or scores.shape != labels.shape:
        raise EvalError("scores and labels must be 1-D and equally long")
    pos = labels == 1
    neg = labels == -1
    n_pos = int(pos.sum())
    n_neg = int(neg.sum())
    if n_pos == 0 or n_neg == 0:
        raise EvalError("roc_auc needs both classes present")
    ranks = _midranks(scores)
    auc = (ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)

    # sweep thresholds downward through the distinct scores
    order = np.argsort(-scores, kind="stable")
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < scores.size:
        j = i
        while j < scores.size and scores[order[j]] == scores[order[i]]:
            if labels[order[j]] == 1:
                tp += 1
            else:
                fp += 1
            j += 1
        points.append((fp / n_neg, tp / n_pos))
        i = j
    return RocResult(float(auc), np.array(points))


# ---------------------------------------------------------- rank-sum test

def _rank_sum_exact(pooled: np.ndarray, n_a: int, observed: float) -> float:
    n = pooled.size
    ranks = _midranks(pooled)
    mean = n_a * (n + 1) / 2.0
    shift = abs(observed - mean) - 1e-12
    hits = 0
    total = 0
    for combo in combinations(range(n), n_a):
        stat = float(ranks[list(combo)].sum())
        if abs(stat - mean) >= shift:
            hits += 1
        total += 1
    return hits / total


def rank_sum_test(a, b) -> float:
    """Two-sided rank-sum p-value for samples a and b.

    Exact enumeration of rank assignments when the pooled size is at
    most 12; beyond that a normal approximation with midrank tie
    correction and a 0.5 continuity correction.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise EvalError("rank_sum_test needs two nonempty samples")
    pooled = np.concatenate([a, b])
    ranks = _midranks(pooled)
    w = float(ranks[:a.size].sum())
    if pooled.size <= EXACT_RANK_SUM_LIMIT:
        return _rank_sum_exact(pooled, a.size, w)
    n_a, n_b, n = a.size, b.size, pooled.size
    mean = n_a * (n + 1) / 2.0
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float(((counts ** 3) - counts).sum()) / (n * (n - 1))
    variance = n_a * n_b / 12.0 * ((n + 1) - tie_term)
    if variance <= 0.0:
        return 1.0
    z = (abs(w - mean) - 0.5) / math.sqrt(variance)
    if z < 0.0:
        z = 0.0
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


# ----------------------------------------------------------- the methods

@dataclass(frozen=True)
class Method:
    """A named trainer plus a scorer oriented positive toward class +1."""

    name: str
    train: object   # Dataset, seed -> model
    score: object   # model, features (already normalized) -> scores
    param_name: str
    grid: tuple


def make_method(name: str, lam: float = DEFAULT_LAMBDA,
                sigma: float = DEFAULT_SIGMA, kernel: str = "rbf",
                rbf_width: float | None = None,
                discriminator: str | None = None,
                h: float = DEFAULT_H,
                lambda_reg: float = DEFAULT_LDA_REG,
                svm_lambda: float = DEFAULT_SVM_LAMBDA) -> Method:
    """Bind hyperparameters into a uniform train/score pair.

    discriminator (one of dist, one_nn, one_sv) replaces the plain
    midpoint score of the linear or kernel classifier with a rule
    fitted on the projected training values.
    """
    if discriminator is not None:
        if discriminator not in KINDS:
            raise EvalError(f"unknown discriminator {discriminator!r}")
        if name not in ("lcc", "klcc"):
            raise EvalError("discriminators pair with lcc or klcc only")

    if name == "lcc":
        if discriminator is None:
            def train(ds, seed, sigma=sigma, lam=lam):
                return train_lcc(ds, lam=lam, sigma=sigma)

            def scorer(model, feats):
                return score(model, feats)
        else:
            def train(ds, seed, sigma=sigma, lam=lam):
                model = train_lcc(ds, lam=lam, sigma=sigma)
                rule = fit_discriminator(discriminator,
                                         transform(model, ds.features),
                                         ds.labels, model, h=h)
                return (model, rule)

            def scorer(pair, feats):
                model, rule = pair
                return discriminator_score(rule, transform(model, feats))
        return Method(name, train, scorer, "sigma", GRID_SIGMA)

    if name == "fqcc":
        def train(ds, seed, sigma=sigma, lam=lam):
            return train_fqcc(ds, lam=lam, sigma=sigma, seed=seed)

        def scorer(model, feats):
            return fqcc_score(model, feats)
        return Method(name, train, scorer, "sigma", GRID_SIGMA)

    if name == "klcc":
        def spec_for(feats):
            if kernel == "rbf" and rbf_width is None:
                return KernelSpec("rbf", median_pairwise_distance(feats))
            if kernel == "rbf":
                return KernelSpec("rbf", rbf_width)
            return KernelSpec(kernel)

        if discriminator is None:
            def train(ds, seed, sigma=sigma, lam=lam):
                return train_klcc(ds, spec_for(ds.features),
                                  lam=lam, sigma=sigma)

            def scorer(model, feats):
                return kscore(model, feats)
        else:
            def train(ds, seed, sigma=sigma, lam=lam):
                model = train_klcc(ds, spec_for(ds.features),
                                   lam=lam, sigma=sigma)
                rule = fit_discriminator(discriminator,
                                         ktransform(model, ds.features),
                                         ds.labels, model, h=h)
                return (model, rule)

            def scorer(pair, feats):
                model, rule = pair
                return discriminator_score(rule, ktransform(model, feats))
        return Method(name, train, scorer, "sigma", GRID_SIGMA)

    if name == "lda":
        def train(ds, seed, lambda_reg=lambda_reg):
            return train_lda(ds, lambda_reg=lambda_reg)

        def scorer(model, feats):
            return lda_score(model, feats)
        return Method(name, train, scorer, "lambda_reg", GRID_LDA_REG)

    if name == "svm":
        def train(ds, seed, svm_lambda=svm_lambda):
            return train_linear_svm(ds, lam=svm_lambda, seed=seed)

        def scorer(model, feats):
            return svm_score(model, feats)
        return Method(name, train, scorer, "lambda", GRID_SVM_LAMBDA)

    raise EvalError(f"unknown method {name!r}; "
                    f"choose from {', '.join(METHOD_NAMES)}")


def _rebind(method: Method, value: float, base: dict) -> Method:
    """A copy of the method with its searched parameter set to value."""
    params = dict(base)
    params[{"sigma": "sigma", "lambda_reg": "lambda_reg",
            "lambda": "svm_lambda"}[method.param_name]] = value
    return make_method(method.name, **params)


# ------------------------------------------------------------ procedures

@dataclass(frozen=True)
class RunRecord:
    method: str
    run: int
    train_auc: float
    test_auc: float
    train_ms: float
    error: str | None = None


@dataclass(frozen=True)
class GridRecord:
    method: str
    param_name: str
    best_param: float
    best_auc: float
    fold_aucs: tuple


@dataclass(frozen=True)
class EvalReport:
    procedure: int
    reference: str
    records: tuple = ()
    p_train: dict = field(default_factory=dict)
    p_test: dict = field(default_factory=dict)
    p_time: dict = field(default_factory=dict)
    grid_records: tuple = ()
    ranks: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BenchmarkConfig:
    data: Dataset
    methods: tuple
    runs: int = 100
    train_fraction: float = 0.7
    seed: int = 42
    reference: str = "lcc"
    procedure: int = 1
    folds: int = 10
    params: dict = field(default_factory=dict)


def _prepare_split(data: Dataset, train_fraction: float, seed: int):
    """Split, then z-score both sides with training statistics only."""
    train, test = stratified_split(data, train_fraction, seed)
    norm = fit_normalizer(train)
    return apply_normalizer(norm, train), apply_normalizer(norm, test), norm


def _run_once(method: Method, train: Dataset, test: Dataset,
              run: int, seed: int) -> RunRecord:
    try:
        start = time.perf_counter()
        model = method.train(train, seed)
        ms = (time.perf_counter() - start) * 1000.0
        auc_tr = roc_auc(method.score(model, train.features),
                         train.labels).auc
        auc_te = roc_auc(method.score(model, test.features),
                         test.labels).auc
    except (DataError, EvalError, ValueError, RuntimeError,
            np.linalg.LinAlgError) as exc:
        return RunRecord(method.name, run, math.nan, math.nan, math.nan,
                         f"{type(exc).__name__}: {exc}")
    return RunRecord(method.name, run, auc_tr, auc_te, ms)


def _procedure_one(config: BenchmarkConfig, methods: list[Method]) -> EvalReport:
    records: list[RunRecord] = []
    for run in range(config.runs):
        run_seed = config.seed + run
        train, test, _ = _prepare_split(config.data, config.train_fraction,
                                        run_seed)
        for method in methods:
            records.append(_run_once(method, train, test, run, run_seed))

    def valid(name, attr):
        return np.array([getattr(r, attr) for r in records
                         if r.method == name and r.error is None])

    p_train: dict = {}
    p_test: dict = {}
    p_time: dict = {}
    names = [m.name for m in methods]
    if config.reference in names:
        ref_tr = valid(config.reference, "train_auc")
        ref_te = valid(config.reference, "test_auc")
        ref_ms = valid(config.reference, "train_ms")
        for name in names:
            if name == config.reference:
                continue
            tr, te, ms = (valid(name, "train_auc"), valid(name, "test_auc"),
                          valid(name, "train_ms"))
            if ref_tr.size and tr.size:
                p_train[name] = rank_sum_test(ref_tr, tr)
                p_test[name] = rank_sum_test(ref_te, te)
                p_time[name] = rank_sum_test(ref_ms, ms)
    return EvalReport(1, config.reference, tuple(records),
                      p_train, p_test, p_time)


def _ranks_from_scores(scores: dict) -> dict:
    """0-indexed descending ranks; tied values share the mean position."""
    names = sorted(scores, key=lambda n: -scores[n])
    ranks: dict = {}
    i = 0
    while i < len(names):
        j = i
        while j < len(names) and scores[names[j]] == scores[names[i]]:
            j += 1
        mean_rank = (i + j - 1) / 2.0
        for name in names[i:j]:
            ranks[name] = mean_rank
        i = j
    return ranks


def _procedure_two(config: BenchmarkConfig, methods: list[Method]) -> EvalReport:
    folds = stratified_kfold(config.data, config.folds, config.seed)
    all_idx = np.arange(config.data.m)
    grid_records = []
    for method in methods:
        best = None
        for value in method.grid:
            candidate = _rebind(method, value, config.params)
            fold_aucs = []
            for held in folds:
                mask = np.ones(config.data.m, dtype=bool)
                mask[held] = False
                train = config.data.take(all_idx[mask])
                test = config.data.take(held)
                norm = fit_normalizer(train)
                train = apply_normalizer(norm, train)
                test = apply_normalizer(norm, test)
                try:
                    model = candidate.train(train, config.seed)
                    auc = roc_auc(candidate.score(model, test.features),
                                  test.labels).auc
                except (DataError, EvalError, ValueError, RuntimeError,
                        np.linalg.LinAlgError):
                    auc = math.nan
                fold_aucs.append(auc)
            clean = [a for a in fold_aucs if not math.isnan(a)]
            mean_auc = sum(clean) / len(clean) if clean else -math.inf
            if best is None or mean_auc > best[0]:
                best = (mean_auc, value, tuple(fold_aucs))
        grid_records.append(GridRecord(method.name, method.param_name,
                                       best[1], best[0], best[2]))
    ranks = _ranks_from_scores({g.method: g.best_auc for g in grid_records})
    return EvalReport(2, config.reference, grid_records=tuple(grid_records),
                      ranks=ranks)


def run_benchmark(config: BenchmarkConfig) -> EvalReport:
    """Execute one of the two evaluation procedures on one dataset.

    Procedure 1 repeats stratified 70/30 splits with the configured
    parameters and records per-run train/test AUC and training wall
    time, plus rank-sum p-values of every method against the reference.
    Procedure 2 searches each method's parameter grid by k-fold cross
    validation and reports the best mean held-out AUC and method ranks.
    """
    if not config.methods:
        raise EvalError("need at least one method")
    if config.runs < 1:
        raise EvalError("runs must be at least 1")
    if config.procedure not in (1, 2):
        raise EvalError(f"unknown procedure {config.procedure}")
    data, _ = drop_zero_variance(config.data)
    cfg = BenchmarkConfig(data, config.methods, config.runs,
                          config.train_fraction, config.seed,
                          config.reference, config.procedure, config.folds,
                          config.params)
    methods = [make_method(name, **config.params) for name in config.methods]
    if config.procedure == 1:
        return _procedure_one(cfg, methods)
    return _procedure_two(cfg, methods)


def aggregate_ranks(per_dataset_ranks) -> dict:
    """Mean rank per method over several procedure-2 reports."""
    per_dataset_ranks = list(per_dataset_ranks)
    if not per_dataset_ranks:
        raise EvalError("no rank tables to aggregate")
    names = set(per_dataset_ranks[0])
    for table in per_dataset_ranks[1:]:
        if set(table) != names:
            raise EvalError("rank tables cover different methods")
    return {name: sum(t[name] for t in per_dataset_ranks)
            / len(per_dataset_ranks) for name in sorted(names)}


# -------------------------------------------------------------- reporting

def report_to_csv(report: EvalReport) -> str:
    """One row per method and run; procedure-2 reports list grid rows."""
    if report.procedure == 1:
        lines = ["method,run,train_auc,test_auc,train_ms,error"]
        for r in report.records:
            err = r.error if r.error else ""
            lines.append(f"{r.method},{r.run},{r.train_auc!r},"
                         f"{r.test_auc!r},{r.train_ms!r},{err}")
    else:
        lines = ["method,param_name,best_param,best_auc,rank"]
        for g in report.grid_records:
            lines.append(f"{g.method},{g.param_name},{g.best_param!r},"
                         f"{g.best_auc!r},{report.ranks[g.method]!r}")
    return "\n".join(lines) + "\n"


def _flag(p_value: float, ref_mean: float, other_mean: float,
          larger_is_better: bool) -> str:
    """Appendix-style marker for a method against the reference:
    '*' significantly worse, '+' significantly better, '-' neither."""
    if p_value >= 0.05:
        return "-"
    better = other_mean > ref_mean if larger_is_better \
        else other_mean < ref_mean
    return "+" if better else "*"


def summary_table(report: EvalReport) -> str:
    """Aligned text table of the report, with significance flags."""
    if report.procedure == 2:
        lines = [f"{'method':<8} {'parameter':<12} {'best value':>12} "
                 f"{'best AUC':>10} {'rank':>6}"]
        for g in sorted(report.grid_records,
                        key=lambda g: report.ranks[g.method]):
            lines.append(f"{g.method:<8} {g.param_name:<12} "
                         f"{g.best_param:>12.6g} {g.best_auc:>10.4f} "
                         f"{report.ranks[g.method]:>6.1f}")
        return "\n".join(lines) + "\n"

    names = []
    for r in report.records:
        if r.method not in names:
            names.append(r.method)

    def stats(name, attr):
        vals = np.array([getattr(r, attr) for r in report.records
                         if r.method == name and r.error is None])
        if vals.size == 0:
            return math.nan, math.nan
        return float(vals.mean()), float(vals.std())

    lines = [f"{'method':<8} {'train AUC':>16} {'test AUC':>16} "
             f"{'time ms':>12} {'failures':>9}"]
    for name in names:
        mt, st = stats(name, "train_auc")
        me, se = stats(name, "test_auc")
        mm, _ = stats(name, "train_ms")
        fails = sum(1 for r in report.records
                    if r.method == name and r.error is not None)
        if name == report.reference or name not in report.p_test:
            f_tr = f_te = f_ms = " "
        else:
            ref_tr = stats(report.reference, "train_auc")[0]
            ref_te = stats(report.reference, "test_auc")[0]
            ref_ms = stats(report.reference, "train_ms")[0]
            f_tr = _flag(report.p_train[name], ref_tr, mt, True)
            f_te = _flag(report.p_test[name], ref_te, me, True)
            f_ms = _flag(report.p_time[name], ref_ms, mm, False)
        lines.append(f"{name:<8} {mt:>7.4f}±{st:<6.4f}{f_tr} "
                     f"{me:>7.4f}±{se:<6.4f}{f_te} "
                     f"{mm:>10.1f}{f_ms} {fails:>9d}")
    return "\n".join(lines) + "\n"
