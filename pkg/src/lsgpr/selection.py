"""Hyperparameter selection and statistical comparison.

Seeded k-fold cross-validation over a (m, lengthscale, noise) grid,
validation grid search for the localization parameter, an exact one-sided
Wilcoxon signed-rank test, and benchmark report assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.optimize
from scipy.stats import norm, rankdata

from lsgpr import global_gp, kernels, linalg, local_gp
from lsgpr.exceptions import NumericalError, SingularMatrixError
from lsgpr.kernels import CovKernelParams, LocalKernelSpec
from lsgpr.local_gp import BandwidthPolicy

# Grid defaults; lengthscale/noise factors scale data-derived quantities
# (median pairwise distance, target variance).
DEFAULT_GRID_M = (5, 10, 20, 50, 100, 200)
DEFAULT_LENGTHSCALE_FACTORS = (0.05, 0.1, 0.3, 1.0, 3.0)
DEFAULT_NOISE_FACTORS = (1e-4, 1e-3, 1e-2, 1e-1, 1.0)

# Exact Wilcoxon enumeration is used up to this effective sample size.
EXACT_WILCOXON_LIMIT = 20


def mse(predictions, targets) -> float:
    predictions = np.asarray(predictions, dtype=float).ravel()
    targets = np.asarray(targets, dtype=float).ravel()
    if predictions.size == 0:
        raise ValueError("mse of empty vectors is undefined")
    if predictions.size != targets.size:
        raise ValueError(
            f"length mismatch: {predictions.size} predictions, {targets.size} targets")
    return float(np.mean((predictions - targets) ** 2))


@dataclass(frozen=True)
class CVConfig:
    folds: int
    grid_m: tuple[int, ...]
    grid_lengthscale: tuple[float, ...]
    grid_noise: tuple[float, ...]
    seed: int

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError(f"need at least 2 folds, got {self.folds}")
        for name, grid in (("grid_m", self.grid_m),
                           ("grid_lengthscale", self.grid_lengthscale),
                           ("grid_noise", self.grid_noise)):
            if len(grid) == 0:
                raise ValueError(f"{name} must be non-empty")


@dataclass(frozen=True)
class GridCell:
    m: int
    lengthscale: float
    noise: float


@dataclass(frozen=True)
class CVScore:
    cell: GridCell
    score: float


@dataclass(frozen=True)
class CVResult:
    best: GridCell
    table: tuple[CVScore, ...]


def fold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    """Seeded permutation split into `folds` near-equal index blocks."""
    perm = np.random.default_rng(seed).permutation(n)
    return np.array_split(perm, folds)


def _rank_key(score: float, cell: GridCell):
    ordered = score if math.isfinite(score) else math.inf
    return (ordered, cell.m, -cell.lengthscale, -cell.noise)


def kfold_cv(X, y, config: CVConfig, factory) -> CVResult:
    """Mean validation MSE per grid cell across seeded folds; argmin wins.

    ``factory(cell)`` must return a predictor
    ``(train_X, train_y, query_X) -> predictions``.  Ties break toward
    smaller m, then larger lengthscale, then larger noise.
    """
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    n = X.shape[0]
    if config.folds > n:
        raise ValueError(f"{config.folds} folds but only {n} points")
    parts = fold_indices(n, config.folds, config.seed)
    splits = []
    for i, val_idx in enumerate(parts):
        train_idx = np.concatenate([p for j, p in enumerate(parts) if j != i])
        if val_idx.size == 0 or train_idx.size == 0:
            raise ValueError(f"fold {i} has an empty train or validation part")
        splits.append((train_idx, val_idx))

    table = []
    for m in config.grid_m:
        for ell in config.grid_lengthscale:
            for noise in config.grid_noise:
                cell = GridCell(m=m, lengthscale=ell, noise=noise)
                predictor = factory(cell)
                fold_scores = []
                for train_idx, val_idx in splits:
                    preds = predictor(X[train_idx], y[train_idx], X[val_idx])
                    fold_scores.append(mse(preds, y[val_idx]))
                table.append(CVScore(cell, float(np.mean(fold_scores))))
    best = min(table, key=lambda row: _rank_key(row.score, row.cell))
    return CVResult(best=best.cell, table=tuple(table))


@dataclass(frozen=True)
class GridScore:
    value: float
    score: float
    empty_neighborhoods: int


def grid_search_h(train_X, train_y, val_X, val_y, params: CovKernelParams,
                  noise: float, spec: LocalKernelSpec, grid,
                  mode: str = "m") -> tuple[float, tuple[GridScore, ...]]:
    """Validation-MSE argmin over a grid of bandwidths or neighbor counts.

    ``mode`` is "m" (min-neighbors grid) or "h" (fixed-bandwidth grid).
    Ties break toward the smallest grid value; empty-neighborhood
    predictions are counted per grid value in the score table.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    if mode not in ("m", "h"):
        raise ValueError(f"mode must be 'm' or 'h', got {mode!r}")
    val_y = np.asarray(val_y, dtype=float).ravel()
    table = []
    for value in sorted(grid):
        policy = (BandwidthPolicy.min_neighbors(int(value)) if mode == "m"
                  else BandwidthPolicy.fixed(float(value)))
        preds = local_gp.local_predict_batch(
            train_X, train_y, params, noise, spec, policy, val_X)
        means = np.array([p.mean for p in preds])
        empties = sum(1 for p in preds if p.empty_neighborhood)
        score = mse(means, val_y) if np.all(np.isfinite(means)) else math.inf
        table.append(GridScore(float(value), float(score), empties))
    best = min(table, key=lambda row: (row.score if math.isfinite(row.score)
                                       else math.inf, row.value))
    return best.value, tuple(table)


@dataclass(frozen=True)
class WilcoxonResult:
    pvalue: float
    n_effective: int
    degenerate: bool


def _exact_signed_rank_cdf(doubled_ranks: np.ndarray, observed: int) -> float:
    """P(W+ <= observed) by dynamic programming over sign patterns.

    Ranks arrive doubled so tied (half-integer) average ranks become
    integers; the distribution over all 2^n sign assignments is built by
    convolving one rank at a time.
    """
    total = int(np.sum(doubled_ranks))
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in doubled_ranks:
        r = int(r)
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:counts.size - r]
        counts = counts + shifted
    return float(np.sum(counts[:observed + 1]) / 2.0 ** doubled_ranks.size)


def wilcoxon_one_sided(a, b) -> WilcoxonResult:
    """One-sided Wilcoxon signed-rank test of "a < b" on paired samples.

    Differences of zero are dropped; tied absolute differences get average
    ranks.  The null distribution is exact (full enumeration via DP) up to
    20 effective pairs, and a tie-corrected normal approximation with
    continuity correction beyond.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size != b.size or a.size == 0:
        raise ValueError(f"need equal-length non-empty samples, got {a.size} and {b.size}")
    d = a - b
    d = d[d != 0]
    n = d.size
    if n == 0:
        return WilcoxonResult(pvalue=1.0, n_effective=0, degenerate=True)
    ranks = rankdata(np.abs(d))
    w_plus = float(np.sum(ranks[d > 0]))
    if n <= EXACT_WILCOXON_LIMIT:
        doubled = np.rint(2.0 * ranks).astype(int)
        observed = int(round(2.0 * w_plus))
        p = _exact_signed_rank_cdf(doubled, observed)
        return WilcoxonResult(pvalue=p, n_effective=n, degenerate=False)
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(np.abs(d), return_counts=True)
    var -= float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    z = (w_plus + 0.5 - mean) / math.sqrt(var)
    return WilcoxonResult(pvalue=float(norm.cdf(z)), n_effective=n,
                          degenerate=False)


@dataclass(frozen=True)
class BenchReport:
    """Per-split test MSEs by method, summary stats, and pairwise tests."""

    methods: tuple[str, ...]
    scores: dict[str, tuple[float, ...]]
    means: dict[str, float]
    sds: dict[str, float]
    pvalues: dict[tuple[str, str], WilcoxonResult]


def compute_report(scores: dict[str, list[float]]) -> BenchReport:
    """Summarize matched per-split MSEs; sd is population (divide by n).

    pvalues[(a, b)] tests "method a has lower MSE than method b".
    """
    methods = tuple(scores)
    if not methods:
        raise ValueError("no methods to report")
    lengths = {len(v) for v in scores.values()}
    if len(lengths) != 1:
        raise ValueError(f"methods have mismatched split counts: {lengths}")
    frozen = {m: tuple(float(v) for v in scores[m]) for m in methods}
    means = {m: float(np.mean(frozen[m])) for m in methods}
    sds = {m: float(np.std(frozen[m])) for m in methods}
    pvalues = {}
    for m1 in methods:
        for m2 in methods:
            if m1 != m2:
                pvalues[(m1, m2)] = wilcoxon_one_sided(frozen[m1], frozen[m2])
    return BenchReport(methods=methods, scores=frozen, means=means,
                       sds=sds, pvalues=pvalues)


def default_cv_config(X, y, folds: int = 3, seed: int = 0,
                      grid_m=None) -> CVConfig:
    """Data-scaled default grids: lengthscales around the median pairwise
    distance, noise around the target variance."""
    med = global_gp.median_pairwise_distance(X)
    var_y = float(np.var(np.asarray(y, dtype=float)))
    if var_y <= 0:
        var_y = 1.0
    return CVConfig(
        folds=folds,
        grid_m=tuple(grid_m) if grid_m is not None else DEFAULT_GRID_M,
        grid_lengthscale=tuple(f * med for f in DEFAULT_LENGTHSCALE_FACTORS),
        grid_noise=tuple(f * var_y for f in DEFAULT_NOISE_FACTORS),
        seed=seed)


def refine_kernel_params(X, y, params: CovKernelParams, noise: float,
                         spec: LocalKernelSpec, policy: BandwidthPolicy,
                         anchors=None, max_iter: int = 50,
                         seed: int = 0) -> tuple[CovKernelParams, float]:
    """Optional gradient refinement of kernel parameters at fixed bandwidth.

    Maximizes the summed local marginal log-likelihood over anchor points
    (a seeded subsample of at most 50 training inputs by default) with
    respect to (log lengthscale, log amplitude, log noise).  Neighborhoods
    are frozen at the initial parameters, so weights stay constant and the
    objective is smooth.  Never returns a worse objective than the input.
    """
    X = kernels._as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    if anchors is None:
        count = min(X.shape[0], 50)
        idx = np.random.default_rng(seed).permutation(X.shape[0])[:count]
        anchors = X[idx]
    anchors = kernels._as_matrix(anchors)

    neighborhoods = []
    for x0 in anchors:
        h = local_gp._resolve_bandwidth(X, x0, policy, spec)
        idx, weights = local_gp.select_neighbors(X, x0, h, spec)
        if idx.size:
            neighborhoods.append((X[idx], y[idx], weights))

    def value_and_grad(theta):
        p = replace(params, lengthscale=math.exp(theta[0]),
                    amplitude=math.exp(theta[1]))
        s2 = math.exp(theta[2])
        total = 0.0
        grad = np.zeros(3)
        for X_I, y_I, weights in neighborhoods:
            M = kernels.gram(p, X_I)
            K = M.copy()
            noise_diag = local_gp.noise_diagonal(weights, s2)
            M[np.diag_indices_from(M)] += noise_diag
            factor = linalg.cholesky(M)
            alpha = linalg.solve_psd(factor, y_I)
            Minv = linalg.solve_psd(factor, np.eye(y_I.size))
            total += (-0.5 * float(y_I @ alpha) - 0.5 * linalg.log_det(factor)
                      - 0.5 * y_I.size * global_gp.LOG_2PI)
            dK = global_gp._scaled_distance_grad(p, X_I, K)
            grad[0] += 0.5 * float(alpha @ dK @ alpha) - 0.5 * float(np.sum(Minv * dK))
            grad[1] += 0.5 * float(alpha @ K @ alpha) - 0.5 * float(np.sum(Minv * K))
            dN = noise_diag
            grad[2] += 0.5 * float(alpha**2 @ dN) - 0.5 * float(np.diag(Minv) @ dN)
        return total, grad

    theta0 = np.log([params.lengthscale, params.amplitude, noise])

    def objective(theta):
        if np.max(np.abs(theta)) > 50:
            return 1e25, np.zeros(3)
        try:
            value, grad = value_and_grad(theta)
        except (SingularMatrixError, NumericalError):
            return 1e25, np.zeros(3)
        if not (np.isfinite(value) and np.all(np.isfinite(grad))):
            return 1e25, np.zeros(3)
        return -value, -grad

    base_value, _ = value_and_grad(theta0)
    res = scipy.optimize.minimize(objective, theta0, jac=True,
                                  method="L-BFGS-B",
                                  options={"maxiter": max_iter})
    if np.isfinite(res.fun) and -res.fun > base_value:
        theta = res.x
        return (replace(params, lengthscale=math.exp(theta[0]),
                        amplitude=math.exp(theta[1])), math.exp(theta[2]))
    return params, noise
