"""Independent brute-force oracles used to check the fast implementations.

Each oracle deliberately takes the dumbest correct route: vertex
enumeration for linear programs, pairwise counting for AUC, combination
enumeration for the rank-sum null, and grid refinement for the 1-D SVM.
None of them share code with the package under test.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def lp_brute_force(c, A, relations, b, lower, upper, tol=1e-9):
    """Minimize over a polytope by enumerating candidate vertices.

    Only sensible for small problems with finite box bounds.  Returns
    ("optimal", best_objective) or ("infeasible", None).
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    d = c.shape[0]

    planes = []
    for i in range(A.shape[0]):
        planes.append((A[i], b[i]))
    for j in range(d):
        unit = np.zeros(d)
        unit[j] = 1.0
        planes.append((unit, lower[j]))
        planes.append((unit.copy(), upper[j]))

    def feasible(x):
        if np.any(x < lower - tol) or np.any(x > upper + tol):
            return False
        for i in range(A.shape[0]):
            lhs = float(A[i] @ x)
            if relations[i] == "<=" and lhs > b[i] + tol:
                return False
            if relations[i] == ">=" and lhs < b[i] - tol:
                return False
        return True

    best = None
    for combo in itertools.combinations(range(len(planes)), d):
        mat = np.array([planes[k][0] for k in combo])
        rhs = np.array([planes[k][1] for k in combo])
        if abs(np.linalg.det(mat)) < 1e-12:
            continue
        x = np.linalg.solve(mat, rhs)
        if feasible(x):
            value = float(c @ x)
            if best is None or value < best:
                best = value
    if best is None:
        return "infeasible", None
    return "optimal", best


def random_box_lp(rng, max_vars=4, max_rows=6):
    """A random LP with finite box bounds, in raw-arrays form."""
    d = int(rng.integers(1, max_vars + 1))
    r = int(rng.integers(1, max_rows + 1))
    c = rng.normal(0.0, 2.0, d)
    A = rng.normal(0.0, 1.5, (r, d))
    b = rng.normal(0.0, 2.0, r)
    relations = tuple("<=" if rng.random() < 0.5 else ">=" for _ in range(r))
    lo = rng.uniform(-4.0, 0.0, d)
    hi = lo + rng.uniform(0.5, 6.0, d)
    return c, A, relations, b, lo, hi


def auc_brute_force(scores, labels):
    """Probability a random positive outscores a random negative,
    counting ties as one half."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == -1]
    total = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                total += 1.0
            elif sp == sn:
                total += 0.5
    return total / (len(pos) * len(neg))


def _midranks(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def rank_sum_exact(a, b):
    """Two-sided permutation p-value of the rank-sum statistic."""
    a = list(a)
    b = list(b)
    pooled = a + b
    n1 = len(a)
    total = len(pooled)
    ranks = _midranks(pooled)
    observed = sum(ranks[:n1])
    mean = n1 * (total + 1) / 2.0
    count = 0
    hits = 0
    for combo in itertools.combinations(range(total), n1):
        stat = sum(ranks[i] for i in combo)
        count += 1
        if abs(stat - mean) >= abs(observed - mean) - 1e-12:
            hits += 1
    return hits / count


def svm_1d_grid_oracle(values, labels, lam, stages=4, grid=201):
    """Best hinge objective found by nested grid refinement over (w, r)."""
    values = np.asarray(values, dtype=float)
    labels = np.asarray(labels, dtype=float)
    m = len(values)

    def objective(w, r):
        margins = 1.0 - labels * (w * values + r)
        return lam * w * w + np.maximum(0.0, margins).mean()

    # at any optimum lam * w^2 <= J(0, r*) <= 1, so |w| <= 1/sqrt(lam)
    w_span = 1.0 / math.sqrt(lam)
    vmax = float(np.max(np.abs(values))) if m else 1.0
    r_span = 1.0 + w_span * vmax
    w_lo, w_hi = -w_span, w_span
    r_lo, r_hi = -r_span, r_span
    best = (math.inf, 0.0, 0.0)
    for _ in range(stages):
        ws = np.linspace(w_lo, w_hi, grid)
        rs = np.linspace(r_lo, r_hi, grid)
        margins = 1.0 - labels[None, None, :] * (
            ws[:, None, None] * values[None, None, :] + rs[None, :, None])
        objs = lam * (ws ** 2)[:, None] + np.maximum(0.0, margins).mean(axis=2)
        k = np.unravel_index(int(np.argmin(objs)), objs.shape)
        if objs[k] < best[0]:
            best = (float(objs[k]), float(ws[k[0]]), float(rs[k[1]]))
        w_step = ws[1] - ws[0] if grid > 1 else 1.0
        r_step = rs[1] - rs[0] if grid > 1 else 1.0
        w_lo, w_hi = best[1] - 2 * w_step, best[1] + 2 * w_step
        r_lo, r_hi = best[2] - 2 * r_step, best[2] + 2 * r_step
    return best[0]
