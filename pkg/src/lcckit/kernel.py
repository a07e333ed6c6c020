"""Kernelized centralization training.

The projection is expressed through per-instance coefficients,
beta = sum_i alpha_i x_i, so every quantity the linear program needs is a
kernel evaluation: the projected value of instance j is (K alpha)_j and a
projected class center is the mean of the class's Gram rows dotted with
alpha.  The resulting program has m + 1 rows and 2m variables
(alpha in [-1, 1]^m plus one slack per instance) and is solved by the same
simplex as the linear classifier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, Normalizer, require_both_classes
from .lcc import DEFAULT_LAMBDA, DEFAULT_SIGMA, TrainingError, _check_params
from .lp import LpProblem, solve

KERNEL_KINDS = ("linear", "rbf")


def _frozen(a) -> np.ndarray:
    out = np.array(np.asarray(a, dtype=np.float64))
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice: plain dot product or Gaussian with a width."""

    kind: str
    rbf_width: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise TrainingError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf":
            if self.rbf_width is None or not self.rbf_width > 0:
                raise TrainingError("rbf kernel needs a positive rbf_width")


def kernel_eval(spec: KernelSpec, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Kernel values between two stacks of rows: result is (len x, len z)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    z = np.atleast_2d(np.asarray(z, dtype=np.float64))
    if x.shape[1] != z.shape[1]:
        raise TrainingError("kernel arguments must share their width")
    if spec.kind == "linear":
        return x @ z.T
    sq = (np.sum(x * x, axis=1)[:, None] + np.sum(z * z, axis=1)[None, :]
          - 2.0 * (x @ z.T))
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-sq / (2.0 * spec.rbf_width ** 2))


def gram(spec: KernelSpec, features: np.ndarray) -> np.ndarray:
    return kernel_eval(spec, features, features)


def median_pairwise_distance(features: np.ndarray) -> float:
    """Median Euclidean distance over all row pairs; the usual width pick."""
    features = np.asarray(features, dtype=np.float64)
    m = features.shape[0]
    if m < 2:
        raise TrainingError("need at least two rows for a pairwise median")
    sq = (np.sum(features ** 2, axis=1)[:, None]
          + np.sum(features ** 2, axis=1)[None, :]
          - 2.0 * (features @ features.T))
    np.maximum(sq, 0.0, out=sq)
    upper = np.sqrt(sq[np.triu_indices(m, k=1)])
    width = float(np.median(upper))
    if width <= 0:
        raise TrainingError("median pairwise distance is zero; "
                            "the rows are (almost) all identical")
    return width


@dataclass(frozen=True)
class KernelLccModel:
    """Centralization classifier in a kernel feature space."""

    alphas: np.ndarray
    train_features: np.ndarray
    spec: KernelSpec
    c_neg_hat: float
    c_pos_hat: float
    l_hat: float
    lam: float
    sigma: float
    epsilons: np.ndarray
    normalizer: Normalizer | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", _frozen(self.alphas))
        object.__setattr__(self, "train_features", _frozen(self.train_features))
        object.__setattr__(self, "epsilons", _frozen(self.epsilons))


def assemble_klcc_lp(train: Dataset, spec: KernelSpec, lam: float,
                     sigma: float) -> LpProblem:
    """Instance rows plus the center-gap row, written over alpha.

    Exactly m + 1 rows and 2m variables.
    """
    _check_params(lam, sigma)
    require_both_classes(train, "assemble_klcc_lp")
    m = train.m
    K = gram(spec, train.features)
    k_neg = K[train.labels == -1].mean(axis=0)
    k_pos = K[train.labels == 1].mean(axis=0)
    midrow = (k_neg + k_pos) / 2.0

    c = np.concatenate([k_neg - k_pos, np.full(m, lam)])
    A = np.zeros((m + 1, 2 * m))
    A[:m, :m] = train.labels[:, None] * (midrow[None, :] - K)
    A[:m, m:] = -np.eye(m)
    A[m, :m] = k_neg - k_pos
    b = np.concatenate([np.zeros(m), [sigma]])
    lower = np.concatenate([np.full(m, -1.0), np.full(m, sigma)])
    upper = np.concatenate([np.full(m, 1.0), np.full(m, np.inf)])
    return LpProblem(c, A, ("<=",) * (m + 1), b, lower, upper)


def train_klcc(train: Dataset, spec: KernelSpec,
               lam: float = DEFAULT_LAMBDA, sigma: float = DEFAULT_SIGMA,
               normalizer: Normalizer | None = None) -> KernelLccModel:
    """Fit the kernel classifier by solving its linear program."""
    problem = assemble_klcc_lp(train, spec, lam, sigma)
    solution = solve(problem)
    if solution.status == "infeasible":
        raise TrainingError(
            "no coefficient vector separates the projected class centers "
            f"by |sigma|={-sigma:g}: classes have (near-)identical centers "
            "in the kernel space or |sigma| exceeds the attainable gap")
    if solution.status != "optimal":
        raise TrainingError(f"unexpected solver status {solution.status!r}")
    m = train.m
    alphas = solution.x[:m]
    epsilons = solution.x[m:]
    K = gram(spec, train.features)
    c_neg_hat = float(K[train.labels == -1].mean(axis=0) @ alphas)
    c_pos_hat = float(K[train.labels == 1].mean(axis=0) @ alphas)
    l_hat = (c_neg_hat + c_pos_hat) / 2.0
    return KernelLccModel(alphas, train.features, spec, c_neg_hat, c_pos_hat,
                          l_hat, float(lam), float(sigma), epsilons,
                          normalizer)


def ktransform(model: KernelLccModel, instance: np.ndarray) -> float | np.ndarray:
    """Projected value(s) of one instance or a stack of rows."""
    instance = np.asarray(instance, dtype=np.float64)
    scalar = instance.ndim == 1
    values = kernel_eval(model.spec, np.atleast_2d(instance),
                         model.train_features) @ model.alphas
    return float(values[0]) if scalar else values


def kscore(model: KernelLccModel, instance: np.ndarray) -> float | np.ndarray:
    s = ktransform(model, instance)
    return s - model.l_hat


def kpredict(model: KernelLccModel, instance: np.ndarray) -> int | np.ndarray:
    s = kscore(model, instance)
    if np.ndim(s):
        return np.where(np.asarray(s) < 0, -1, 1).astype(np.int64)
    return -1 if s < 0 else 1
