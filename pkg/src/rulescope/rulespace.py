"""Rule-space geometry: interval vectors, density clustering, 2-D layout.

A rule with n feature intervals becomes a 2n-vector of normalized
(low, high) bounds. Density clustering estimates how many rule groups
exist, which in turn picks the neighborhood size for the nonlinear 2-D
layout. The layout is a fuzzy k-NN graph embedding: per-point adaptive
kernels give membership weights, and a force loop attracts graph
neighbors while pushing sampled non-neighbors apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import curve_fit

from .datasets import normalize_value
from .rules import DecisionRule


@dataclass
class RuleVector:
    rule_id: str
    coords: np.ndarray   # length 2n: (lo_norm, hi_norm) per feature


@dataclass(frozen=True)
class EmbeddingConfig:
    n_neighbors: int | None = None    # None: tuned from the density-cluster count
    min_dist: float = 0.1
    seed: int = 0
    dbscan_eps: float | None = None   # None: estimated from neighbor distances
    dbscan_min_pts: int = 4

    def __post_init__(self) -> None:
        if self.n_neighbors is not None and not 2 <= self.n_neighbors <= 100:
            raise ValueError("n_neighbors must lie in [2, 100]")
        if not 0.0 < self.min_dist < 1.0:
            raise ValueError("min_dist must lie in (0, 1)")
        if self.dbscan_eps is not None and self.dbscan_eps <= 0:
            raise ValueError("dbscan_eps must be positive")
        if self.dbscan_min_pts < 1:
            raise ValueError("dbscan_min_pts must be at least 1")


@dataclass
class EmbeddedPoint:
    rule_id: str
    x: float
    y: float
    cluster_label: int   # -1 marks density noise


def vectorize(rules: list[DecisionRule], bounds: list[tuple[float, float]]) -> list[RuleVector]:
    """Normalized (lo, hi) per feature; degenerate features map to (0.5, 0.5).

    Coordinates are clamped to [0, 1]: display rounding may nudge a bound
    slightly past the observed training range.
    """
    out = []
    for rule in rules:
        coords = np.empty(2 * len(bounds), dtype=np.float64)
        for f, (lo, hi) in enumerate(rule.intervals):
            coords[2 * f] = normalize_value(lo, bounds[f], clamp=True)
            coords[2 * f + 1] = normalize_value(hi, bounds[f], clamp=True)
        out.append(RuleVector(rule_id=rule.rule_id, coords=coords))
    return out


def _as_matrix(vectors) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        return np.asarray(vectors, dtype=np.float64)
    if len(vectors) and isinstance(vectors[0], RuleVector):
        return np.asarray([v.coords for v in vectors], dtype=np.float64)
    return np.asarray(vectors, dtype=np.float64)


def _chunked_distances(X: np.ndarray, start: int, stop: int) -> np.ndarray:
    """Euclidean distances of rows [start, stop) against all rows."""
    diff2 = (
        np.sum(X[start:stop] ** 2, axis=1)[:, None]
        - 2.0 * X[start:stop] @ X.T
        + np.sum(X ** 2, axis=1)[None, :]
    )
    np.maximum(diff2, 0.0, out=diff2)
    return np.sqrt(diff2)


def _neighbor_lists(X: np.ndarray, eps: float) -> list[np.ndarray]:
    """Indices within eps of each point, the point itself included."""
    n = len(X)
    out: list[np.ndarray] = []
    step = max(1, min(n, 2_000_000 // max(1, n)))
    for start in range(0, n, step):
        d = _chunked_distances(X, start, min(n, start + step))
        for r in range(d.shape[0]):
            out.append(np.nonzero(d[r] <= eps)[0])
    return out


def estimate_eps(vectors, min_pts: int = 4, sample_size: int = 500, seed: int = 0) -> float:
    """Median distance to the min_pts-th nearest neighbor over a point sample.

    Falls back to the smallest positive such distance when coincident rules
    drive the median to zero, and to a small constant when every sampled
    distance is zero.
    """
    X = _as_matrix(vectors)
    n = len(X)
    if n < 2:
        return 1.0
    if n > sample_size:
        rng = np.random.default_rng(seed)
        X = X[rng.choice(n, size=sample_size, replace=False)]
        n = sample_size
    k = min(min_pts, n - 1)
    d = _chunked_distances(X, 0, n)
    np.fill_diagonal(d, np.inf)
    kth = np.sort(d, axis=1)[:, k - 1]
    med = float(np.median(kth))
    if med > 0:
        return med
    positive = kth[kth > 0]
    if len(positive):
        return float(positive.min())
    return 1e-3


def dbscan(vectors, eps: float, min_pts: int = 4) -> tuple[np.ndarray, int]:
    """Density clustering; returns (labels, n_clusters) with -1 for noise.

    Core points are those with at least min_pts points (self included)
    within eps. Clusters are the connected components of the core points;
    a non-core point joins the cluster of its nearest core neighbor within
    eps, ties resolving to the smaller cluster label. Labels are assigned
    in order of each cluster's smallest point index, so permuting the input
    permutes labels but never changes the membership sets.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if min_pts < 1:
        raise ValueError("min_pts must be at least 1")
    X = _as_matrix(vectors)
    n = len(X)
    labels = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return labels, 0
    neighbors = _neighbor_lists(X, eps)
    core = np.asarray([len(nb) >= min_pts for nb in neighbors], dtype=bool)
    cluster = 0
    for i in range(n):
        if not core[i] or labels[i] != -1:
            continue
        labels[i] = cluster
        frontier = [i]
        while frontier:
            p = frontier.pop()
            for q in neighbors[p]:
                if core[q] and labels[q] == -1:
                    labels[q] = cluster
                    frontier.append(q)
        cluster += 1
    for i in range(n):
        if core[i] or len(neighbors[i]) == 0:
            continue
        core_nb = neighbors[i][core[neighbors[i]]]
        if len(core_nb) == 0:
            continue
        d = np.linalg.norm(X[core_nb] - X[i], axis=1)
        best = d.min()
        candidates = labels[core_nb[d == best]]
        labels[i] = int(candidates.min())
    return labels, cluster


def tune_neighbors(n_clusters: int) -> int:
    """Neighborhood size for the layout: the cluster count clamped to [2, 100]."""
    return max(2, min(100, n_clusters))


def _ab_params(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Fit the low-dimensional similarity curve 1 / (1 + a d^(2b)).

    The target is 1 inside min_dist and an exponential falloff beyond it.
    """
    xv = np.linspace(0, spread * 3, 300)
    yv = np.where(xv < min_dist, 1.0, np.exp(-(xv - min_dist) / spread))

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    (a, b), _ = curve_fit(curve, xv, yv, p0=(1.0, 1.0), maxfev=10_000)
    return float(a), float(b)


def _pca_init(X: np.ndarray) -> np.ndarray:
    centered = X - X.mean(axis=0)
    if not centered.any():
        return np.zeros((len(X), 2))
    u, s, vt = np.linalg.svd(centered, full_matrices=False)
    # pin component signs so the layout does not flip between runs
    for c in range(min(2, vt.shape[0])):
        j = int(np.argmax(np.abs(vt[c])))
        if vt[c, j] < 0:
            vt[c] = -vt[c]
            u[:, c] = -u[:, c]
    y = np.zeros((len(X), 2))
    take = min(2, u.shape[1])
    y[:, :take] = u[:, :take] * s[:take]
    return y


def _fuzzy_graph(X: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Directed k-NN membership weights, symmetrized by fuzzy union.

    Returns (heads, tails, weights) as a directed edge list that contains
    both orientations of every undirected edge.
    """
    n = len(X)
    idx = np.empty((n, k), dtype=np.int64)
    knn_d = np.empty((n, k), dtype=np.float64)
    step = max(1, min(n, 2_000_000 // max(1, n)))
    for start in range(0, n, step):
        d = _chunked_distances(X, start, min(n, start + step))
        for r in range(d.shape[0]):
            d[r, start + r] = np.inf
        part = np.argsort(d, axis=1, kind="stable")[:, :k]
        idx[start:start + d.shape[0]] = part
        knn_d[start:start + d.shape[0]] = np.take_along_axis(d, part, axis=1)

    rho = knn_d[:, 0]
    target = math.log2(k) if k > 1 else 1.0
    sigma = np.ones(n)
    shifted = np.maximum(knn_d - rho[:, None], 0.0)
    for i in range(n):
        row = shifted[i]
        if row.max() <= 0:
            continue
        lo, hi = 1e-6, 1e3
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            val = float(np.exp(-row / mid).sum())
            if abs(val - target) < 1e-5:
                break
            if val > target:
                hi = mid
            else:
                lo = mid
        sigma[i] = mid
    w = np.exp(-shifted / sigma[:, None])

    rows = np.repeat(np.arange(n), k)
    cols = idx.ravel()
    a = sparse.coo_matrix((w.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    sym = a + a.T - a.multiply(a.T)
    sym = sym.tocoo()
    keep = sym.data > 1e-12
    return sym.row[keep], sym.col[keep], sym.data[keep]


def layout(
    X: np.ndarray,
    n_neighbors: int,
    min_dist: float = 0.1,
    seed: int = 0,
    n_epochs: int | None = None,
) -> np.ndarray:
    """2-D coordinates for the rows of X; deterministic for a fixed seed.

    PCA seeds the global shape, then a force loop refines it: graph
    neighbors attract with their membership weight, and one weighted
    random repulsion fires per edge per epoch.
    """
    X = _as_matrix(X)
    n = len(X)
    if n == 0:
        return np.zeros((0, 2))
    if n == 1:
        return np.zeros((1, 2))
    k = max(1, min(n_neighbors, n - 1))
    heads, tails, w = _fuzzy_graph(X, k)
    rng = np.random.default_rng(seed)

    y = _pca_init(X)
    peak = np.abs(y).max()
    if peak > 0:
        y *= 10.0 / peak
    y += rng.normal(0.0, 1e-4, size=y.shape)

    a, b = _ab_params(min_dist)
    if n_epochs is None:
        n_epochs = 500 if n <= 500 else (300 if n <= 2000 else 200)
    w_norm = w / w.max()
    neg_rate = 5.0 if n <= 2000 else 3.0

    for epoch in range(n_epochs):
        alpha = 1.0 * (1.0 - epoch / n_epochs)
        diff = y[heads] - y[tails]
        d2 = np.sum(diff * diff, axis=1)
        pos = d2 > 0
        coef = np.zeros_like(d2)
        coef[pos] = (-2.0 * a * b * d2[pos] ** (b - 1.0)) / (a * d2[pos] ** b + 1.0)
        move = np.clip(coef[:, None] * diff, -4.0, 4.0) * (w_norm * alpha)[:, None]
        y[:, 0] += np.bincount(heads, weights=move[:, 0], minlength=n)
        y[:, 1] += np.bincount(heads, weights=move[:, 1], minlength=n)

        other = rng.integers(0, n, size=len(heads))
        diff = y[heads] - y[other]
        d2 = np.sum(diff * diff, axis=1)
        coef = (2.0 * b) / ((0.001 + d2) * (a * d2 ** b + 1.0))
        move = np.clip(coef[:, None] * diff, -4.0, 4.0) * (w_norm * alpha * neg_rate)[:, None]
        same = other == heads
        move[same] = 0.0
        y[:, 0] += np.bincount(heads, weights=move[:, 0], minlength=n)
        y[:, 1] += np.bincount(heads, weights=move[:, 1], minlength=n)

    return y


def embed(vectors: list[RuleVector], config: EmbeddingConfig) -> tuple[list[EmbeddedPoint], dict]:
    """Full pipeline: density clustering, neighborhood tuning, 2-D layout.

    Returns the embedded points plus the resolved settings actually used
    (eps, neighborhood size, cluster count).
    """
    X = _as_matrix(vectors)
    rule_ids = [v.rule_id for v in vectors]
    if len(X) == 0:
        return [], {"eps": None, "n_neighbors": None, "n_clusters": 0}
    eps = config.dbscan_eps if config.dbscan_eps is not None else estimate_eps(
        X, min_pts=config.dbscan_min_pts, seed=config.seed
    )
    labels, n_clusters = dbscan(X, eps, config.dbscan_min_pts)
    n_nb = config.n_neighbors if config.n_neighbors is not None else tune_neighbors(n_clusters)
    coords = layout(X, n_nb, min_dist=config.min_dist, seed=config.seed)
    points = [
        EmbeddedPoint(rule_id=rid, x=float(cx), y=float(cy), cluster_label=int(lb))
        for rid, (cx, cy), lb in zip(rule_ids, coords, labels)
    ]
    return points, {"eps": float(eps), "n_neighbors": int(n_nb), "n_clusters": int(n_clusters)}
