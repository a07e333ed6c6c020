"""Centralization classifiers: project to one dimension, separate by centers.

The linear variant (train_lcc) finds a projection beta in [-1, 1]^n that
pushes the two projected class centers apart while penalizing instances
that land on the wrong side of the midpoint threshold.  That search is a
linear program:

    minimize    (C_neg - C_pos) . beta  +  lam * sum_i eps_i
    subject to  y_i * (l - x_i) . beta  -  eps_i  <=  0      for every i
                (C_neg - C_pos) . beta  <=  sigma
                beta in [-1, 1]^n,  eps_i >= sigma

with l = (C_neg + C_pos) / 2 and sigma < 0.  eps_i above sigma flags an
instance inside the margin; eps_i above zero flags a misclassified one.

The quadratic variant (train_fqcc) scores sides by absolute distance to
each projected center instead of by the midpoint, which makes the problem
non-linear; it is minimized by projected subgradient descent with random
restarts.  Its per-instance slack has a closed form, so no explicit eps
variables are needed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .data import Dataset, Normalizer, require_both_classes
from .lp import LpProblem, LpSolution, solve

DEFAULT_LAMBDA = 2.0
DEFAULT_SIGMA = -0.01
FQCC_RESTARTS = 8
FQCC_ITERATIONS = 300


class TrainingError(RuntimeError):
    """Training could not produce a model for the given data/parameters."""


def _frozen(a) -> np.ndarray:
    out = np.asarray(a, dtype=np.float64)
    out = np.array(out)
    out.setflags(write=False)
    return out


def class_centers(data: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Mean feature vector per class: (center of -1, center of +1)."""
    require_both_classes(data, "class_centers")
    return (_frozen(data.features_of(-1).mean(axis=0)),
            _frozen(data.features_of(1).mean(axis=0)))


def _check_params(lam: float, sigma: float) -> None:
    if not lam > 0:
        raise TrainingError(f"lam must be positive, got {lam}")
    if not sigma < 0:
        raise TrainingError(f"sigma must be negative, got {sigma}")


def assemble_lcc_lp(train: Dataset, lam: float, sigma: float) -> LpProblem:
    """Build the separation LP: m instance rows plus one center-gap row.

    Variables are (beta_1..beta_n, eps_1..eps_m), so the program has
    exactly m + 1 rows and m + n columns.
    """
    _check_params(lam, sigma)
    require_both_classes(train, "assemble_lcc_lp")
    m, n = train.m, train.n
    center_neg, center_pos = class_centers(train)
    midpoint = (center_neg + center_pos) / 2.0

    c = np.concatenate([center_neg - center_pos, np.full(m, lam)])
    A = np.zeros((m + 1, n + m))
    # y_i (l - x_i) . beta - eps_i <= 0
    A[:m, :n] = train.labels[:, None] * (midpoint - train.features)
    A[:m, n:] = -np.eye(m)
    # projected center of -1 must sit at least |sigma| below that of +1
    A[m, :n] = center_neg - center_pos
    b = np.concatenate([np.zeros(m), [sigma]])
    relations = ("<=",) * (m + 1)
    lower = np.concatenate([np.full(n, -1.0), np.full(m, sigma)])
    upper = np.concatenate([np.full(n, 1.0), np.full(m, np.inf)])
    return LpProblem(c, A, relations, b, lower, upper)


@dataclass(frozen=True)
class LccModel:
    """A trained linear centralization classifier."""

    beta: np.ndarray
    c_neg_hat: float
    c_pos_hat: float
    l_hat: float
    lam: float
    sigma: float
    epsilons: np.ndarray
    normalizer: Normalizer | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _frozen(self.beta))
        object.__setattr__(self, "epsilons", _frozen(self.epsilons))


def transform(model: LccModel, instance: np.ndarray) -> float | np.ndarray:
    """Project one instance (or a stack of rows) through beta."""
    instance = np.asarray(instance, dtype=np.float64)
    if instance.shape[-1] != model.beta.shape[0]:
        raise ValueError(
            f"expected {model.beta.shape[0]} features, got {instance.shape[-1]}")
    return instance @ model.beta


def score(model: LccModel, instance: np.ndarray) -> float | np.ndarray:
    """Signed distance of the projection from the midpoint threshold."""
    return transform(model, instance) - model.l_hat


def predict(model: LccModel, instance: np.ndarray) -> int | np.ndarray:
    """-1 below the midpoint threshold, +1 at or above it."""
    s = score(model, instance)
    return np.where(np.asarray(s) < 0, -1, 1).astype(np.int64) if \
        np.ndim(s) else (-1 if s < 0 else 1)


def model_from_beta(train: Dataset, beta: np.ndarray, lam: float,
                    sigma: float, normalizer: Normalizer | None = None) -> LccModel:
    """The model a fixed projection implies: centers, threshold, slacks."""
    _check_params(lam, sigma)
    beta = np.asarray(beta, dtype=np.float64)
    center_neg, center_pos = class_centers(train)
    c_neg_hat = float(center_neg @ beta)
    c_pos_hat = float(center_pos @ beta)
    l_hat = (c_neg_hat + c_pos_hat) / 2.0
    projected = train.features @ beta
    epsilons = np.maximum(sigma, train.labels * (l_hat - projected))
    return LccModel(beta, c_neg_hat, c_pos_hat, l_hat, float(lam),
                    float(sigma), epsilons, normalizer)


def _infeasible_message(train: Dataset, sigma: float) -> str:
    center_neg, center_pos = class_centers(train)
    gap = float(np.abs(center_pos - center_neg).sum())
    return (f"no projection can separate the class centers by |sigma|={-sigma:g}: "
            f"classes have (near-)identical centers or |sigma| exceeds the "
            f"center gap bound (L1 gap {gap:g} < {-sigma:g})")


def train_lcc(train: Dataset, lam: float = DEFAULT_LAMBDA,
              sigma: float = DEFAULT_SIGMA,
              normalizer: Normalizer | None = None) -> LccModel:
    """Fit the linear centralization classifier by solving its LP."""
    problem = assemble_lcc_lp(train, lam, sigma)
    solution: LpSolution = solve(problem)
    if solution.status == "infeasible":
        raise TrainingError(_infeasible_message(train, sigma))
    if solution.status != "optimal":
        raise TrainingError(f"unexpected solver status {solution.status!r}")
    n = train.n
    beta = solution.x[:n]
    epsilons = solution.x[n:]
    center_neg, center_pos = class_centers(train)
    c_neg_hat = float(center_neg @ beta)
    c_pos_hat = float(center_pos @ beta)
    l_hat = (c_neg_hat + c_pos_hat) / 2.0
    return LccModel(beta, c_neg_hat, c_pos_hat, l_hat, float(lam),
                    float(sigma), epsilons, normalizer)


@dataclass(frozen=True)
class FqccModel:
    """A trained quadratic-criterion centralization classifier."""

    beta: np.ndarray
    c_neg_hat: float
    c_pos_hat: float
    lam: float
    sigma: float
    objective: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _frozen(self.beta))


def fqcc_epsilons(features: np.ndarray, labels: np.ndarray,
                  beta: np.ndarray, c_neg_hat: float, c_pos_hat: float,
                  sigma: float) -> np.ndarray:
    """Closed-form per-instance slack of the distance-based criterion."""
    projected = features @ beta
    violation = labels * (np.abs(projected - c_pos_hat)
                          - np.abs(projected - c_neg_hat))
    return np.maximum(sigma, violation)


def fqcc_objective(train: Dataset, beta: np.ndarray, lam: float,
                   sigma: float) -> float:
    center_neg, center_pos = class_centers(train)
    c_neg_hat = float(center_neg @ beta)
    c_pos_hat = float(center_pos @ beta)
    eps = fqcc_epsilons(train.features, train.labels, beta,
                        c_neg_hat, c_pos_hat, sigma)
    return float(-abs(c_neg_hat - c_pos_hat) + lam * eps.sum())


def _fqcc_subgradient(train: Dataset, beta: np.ndarray,
                      center_neg: np.ndarray, center_pos: np.ndarray,
                      lam: float, sigma: float) -> np.ndarray:
    projected = train.features @ beta
    c_neg_hat = float(center_neg @ beta)
    c_pos_hat = float(center_pos @ beta)
    grad = -np.sign(c_neg_hat - c_pos_hat) * (center_neg - center_pos)
    violation = train.labels * (np.abs(projected - c_pos_hat)
                                - np.abs(projected - c_neg_hat))
    active = violation > sigma
    if np.any(active):
        signs_pos = np.sign(projected[active] - c_pos_hat)
        signs_neg = np.sign(projected[active] - c_neg_hat)
        rows = train.labels[active, None] * (
            signs_pos[:, None] * (train.features[active] - center_pos)
            - signs_neg[:, None] * (train.features[active] - center_neg))
        grad = grad + lam * rows.sum(axis=0)
    return grad


def train_fqcc(train: Dataset, lam: float = DEFAULT_LAMBDA,
               sigma: float = DEFAULT_SIGMA, restarts: int = FQCC_RESTARTS,
               iterations: int = FQCC_ITERATIONS, seed: int = 0) -> FqccModel:
    """Fit the distance-based variant by multi-start projected subgradient.

    The first start is the clipped center difference; the rest are seeded
    uniform draws from the box.  The best iterate ever visited is returned,
    so more iterations can only improve the objective.
    """
    _check_params(lam, sigma)
    require_both_classes(train, "train_fqcc")
    if restarts < 1:
        raise TrainingError("restarts must be at least 1")
    if iterations < 1:
        raise TrainingError("iterations must be at least 1")
    center_neg, center_pos = class_centers(train)
    n = train.n
    rng = np.random.default_rng(seed)

    starts = [np.clip(center_pos - center_neg, -1.0, 1.0)]
    for _ in range(restarts - 1):
        starts.append(rng.uniform(-1.0, 1.0, n))

    best_beta = None
    best_value = np.inf
    for start in starts:
        beta = start.astype(np.float64)
        value = fqcc_objective(train, beta, lam, sigma)
        if value < best_value:
            best_value, best_beta = value, beta.copy()
        for t in range(iterations):
            grad = _fqcc_subgradient(train, beta, center_neg, center_pos,
                                     lam, sigma)
            norm = float(np.linalg.norm(grad))
            if norm < 1e-15:
                break
            step = 0.5 / (norm * np.sqrt(t + 1.0))
            beta = np.clip(beta - step * grad, -1.0, 1.0)
            value = fqcc_objective(train, beta, lam, sigma)
            if value < best_value:
                best_value, best_beta = value, beta.copy()

    c_neg_hat = float(center_neg @ best_beta)
    c_pos_hat = float(center_pos @ best_beta)
    return FqccModel(best_beta, c_neg_hat, c_pos_hat, float(lam),
                     float(sigma), best_value)


def fqcc_score(model: FqccModel, instance: np.ndarray) -> float | np.ndarray:
    """Positive when the projection sits closer to the +1 center."""
    instance = np.asarray(instance, dtype=np.float64)
    projected = instance @ model.beta
    return (np.abs(projected - model.c_neg_hat)
            - np.abs(projected - model.c_pos_hat))


def fqcc_predict(model: FqccModel, instance: np.ndarray) -> int | np.ndarray:
    """-1 when the projection is at least as close to the -1 center."""
    s = fqcc_score(model, instance)
    return np.where(np.asarray(s) <= 0, -1, 1).astype(np.int64) if \
        np.ndim(s) else (-1 if s <= 0 else 1)


def timed_train(trainer, *args, **kwargs):
    """(model, wall milliseconds) for any trainer in this package."""
    start = time.perf_counter()
    model = trainer(*args, **kwargs)
    return model, (time.perf_counter() - start) * 1000.0
