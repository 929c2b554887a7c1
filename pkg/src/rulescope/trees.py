"""CART decision trees with weighted Gini splitting and stable tie-breaking.

Trees are grown depth-first on row index arrays. Rows may repeat (bagging
passes a bootstrap multiset) and every row entry carries a weight (boosting
passes its per-instance weights). Split candidates are the midpoints between
consecutive distinct sorted values of a feature; equal-quality candidates
resolve to the lower feature index, then the lower threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MaxFeatures = int | str  # an int in [1, n] or the string "all"


@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 10
    min_samples_leaf: int = 1
    max_features: MaxFeatures = "all"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be at least 1")
        if isinstance(self.max_features, str):
            if self.max_features != "all":
                raise ValueError("max_features must be an int or 'all'")
        elif self.max_features < 1:
            raise ValueError("max_features must be at least 1")


@dataclass
class TreeNode:
    """One arena slot: a split (feature/threshold/children) or a leaf."""

    feature: int | None = None
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    class_counts: np.ndarray | None = None   # weighted counts, leaves only
    prediction: int = -1

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass
class DecisionTree:
    nodes: list[TreeNode]
    n_features: int
    n_classes: int
    params: TreeParams
    depth: int
    training_weights_used: np.ndarray | None = None  # per dataset row, length N

    def leaves(self) -> list[tuple[int, TreeNode]]:
        return [(i, nd) for i, nd in enumerate(self.nodes) if nd.is_leaf]

    def n_leaves(self) -> int:
        return sum(1 for nd in self.nodes if nd.is_leaf)


def gini(class_weights: np.ndarray) -> float:
    """Gini impurity sum(p_c * (1 - p_c)) of a weighted class count vector."""
    w = np.asarray(class_weights, dtype=np.float64)
    if (w < 0).any():
        raise ValueError("class weights must be non-negative")
    total = w.sum()
    if total <= 0:
        raise ValueError("gini of an empty weight vector is undefined")
    p = w / total
    return float(np.sum(p * (1.0 - p)))


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    rows: np.ndarray,
    weights: np.ndarray,
    feature_indices: np.ndarray,
    min_samples_leaf: int,
    n_classes: int,
) -> tuple[int, float, float] | None:
    """Exhaustive best (feature, threshold, gain) over the given features.

    Thresholds are midpoints of consecutive distinct sorted values; a row
    goes left iff value <= threshold. Gain is the weighted Gini decrease
    parent - (wl/w)*gini(left) - (wr/w)*gini(right). Candidates leaving
    fewer than min_samples_leaf row entries or zero weight on either side
    are skipped. Returns None when no candidate has strictly positive gain.
    """
    rows = np.asarray(rows)
    weights = np.asarray(weights, dtype=np.float64)
    labels = y[rows]
    n = len(rows)
    parent_counts = np.bincount(labels, weights=weights, minlength=n_classes)
    w_total = parent_counts.sum()
    if w_total <= 0:
        return None
    p = parent_counts / w_total
    parent_gini = float(np.sum(p * (1.0 - p)))

    best: tuple[int, float, float] | None = None
    for f in np.sort(np.asarray(feature_indices)):
        vals = X[rows, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        distinct = np.nonzero(sv[:-1] != sv[1:])[0]
        if len(distinct) == 0:
            continue
        thresholds = (sv[distinct] + sv[distinct + 1]) / 2.0
        onehot = np.zeros((n, n_classes), dtype=np.float64)
        onehot[np.arange(n), labels[order]] = weights[order]
        cum = np.cumsum(onehot, axis=0)
        left_counts = cum[distinct]                 # (k, C)
        right_counts = parent_counts - left_counts
        left_n = distinct + 1                       # row entries on each side
        right_n = n - left_n
        wl = left_counts.sum(axis=1)
        wr = w_total - wl
        valid = (
            (left_n >= min_samples_leaf)
            & (right_n >= min_samples_leaf)
            & (wl > 0)
            & (wr > 0)
        )
        if not valid.any():
            continue
        with np.errstate(invalid="ignore", divide="ignore"):
            pl = left_counts / wl[:, None]
            pr = right_counts / wr[:, None]
            gl = np.sum(pl * (1.0 - pl), axis=1)
            gr = np.sum(pr * (1.0 - pr), axis=1)
        gains = parent_gini - (wl / w_total) * gl - (wr / w_total) * gr
        gains[~valid] = -np.inf
        k = int(np.argmax(gains))
        gain = float(gains[k])
        if gain <= 0:
            continue
        if best is None or gain > best[2]:
            best = (int(f), float(thresholds[k]), gain)
    return best


def fit_tree(
    X: np.ndarray,
    y: np.ndarray,
    params: TreeParams,
    n_classes: int,
    rows: np.ndarray | None = None,
    weights: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> DecisionTree:
    """Grow a CART tree on the given row multiset.

    ``rows`` may contain repeated indices (bootstrap draws); ``weights``
    aligns with ``rows`` entry-for-entry, defaulting to 1. The feature
    subset examined at each node is resampled from the tree RNG, consumed
    in depth-first (left before right) order, so a fixed seed reproduces
    the tree exactly.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n_total, n_features = X.shape
    if rows is None:
        rows = np.arange(n_total)
    rows = np.asarray(rows, dtype=np.int64)
    if weights is None:
        weights = np.ones(len(rows), dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if len(weights) != len(rows):
        raise ValueError("weights must align with rows")
    if len(rows) == 0:
        raise ValueError("cannot fit a tree on zero rows")
    if rng is None:
        rng = np.random.default_rng(params.seed)

    if isinstance(params.max_features, int) and params.max_features > n_features:
        raise ValueError("max_features exceeds the feature count")
    k_features = n_features if params.max_features == "all" else int(params.max_features)

    nodes: list[TreeNode] = []
    depth_seen = 0

    def draw_features() -> np.ndarray:
        if k_features >= n_features:
            return np.arange(n_features)
        return np.sort(rng.permutation(n_features)[:k_features])

    def build(node_rows: np.ndarray, node_weights: np.ndarray, depth: int) -> int:
        nonlocal depth_seen
        depth_seen = max(depth_seen, depth)
        idx = len(nodes)
        nodes.append(TreeNode())
        counts = np.bincount(y[node_rows], weights=node_weights, minlength=n_classes)
        pure = int(np.count_nonzero(counts > 0)) <= 1
        split = None
        if depth < params.max_depth and not pure and len(node_rows) >= 2 * params.min_samples_leaf:
            feats = draw_features()
            split = best_split(
                X, y, node_rows, node_weights, feats,
                params.min_samples_leaf, n_classes,
            )
        if split is None:
            nodes[idx].class_counts = counts
            nodes[idx].prediction = int(np.argmax(counts))
            return idx
        f, thr, _ = split
        mask = X[node_rows, f] <= thr
        nodes[idx].feature = f
        nodes[idx].threshold = thr
        nodes[idx].left = build(node_rows[mask], node_weights[mask], depth + 1)
        nodes[idx].right = build(node_rows[~mask], node_weights[~mask], depth + 1)
        return idx

    build(rows, weights, 0)
    used = np.bincount(rows, weights=weights, minlength=n_total)
    return DecisionTree(
        nodes=nodes,
        n_features=n_features,
        n_classes=n_classes,
        params=params,
        depth=depth_seen,
        training_weights_used=used,
    )


def predict(tree: DecisionTree, x: np.ndarray) -> tuple[int, int]:
    """Route one instance to its leaf; returns (predicted class, leaf index)."""
    i = 0
    node = tree.nodes[0]
    while not node.is_leaf:
        i = node.left if x[node.feature] <= node.threshold else node.right
        node = tree.nodes[i]
    return node.prediction, i


def predict_many(tree: DecisionTree, X: np.ndarray) -> np.ndarray:
    """Predicted class for each row of X."""
    X = np.asarray(X, dtype=np.float64)
    out = np.empty(len(X), dtype=np.int64)
    for i, x in enumerate(X):
        out[i] = predict(tree, x)[0]
    return out


def leaf_assignments(tree: DecisionTree, X: np.ndarray) -> np.ndarray:
    """Leaf index reached by each row of X."""
    X = np.asarray(X, dtype=np.float64)
    out = np.empty(len(X), dtype=np.int64)
    for i, x in enumerate(X):
        out[i] = predict(tree, x)[1]
    return out


def tree_to_dict(tree: DecisionTree) -> dict:
    nodes = []
    for nd in tree.nodes:
        if nd.is_leaf:
            nodes.append({
                "counts": [float(c) for c in nd.class_counts],
                "prediction": nd.prediction,
            })
        else:
            nodes.append({
                "feature": nd.feature,
                "threshold": nd.threshold,
                "left": nd.left,
                "right": nd.right,
            })
    return {
        "nodes": nodes,
        "n_features": tree.n_features,
        "n_classes": tree.n_classes,
        "depth": tree.depth,
        "params": {
            "max_depth": tree.params.max_depth,
            "min_samples_leaf": tree.params.min_samples_leaf,
            "max_features": tree.params.max_features,
            "seed": tree.params.seed,
        },
        "training_weights_used": (
            None if tree.training_weights_used is None
            else [float(w) for w in tree.training_weights_used]
        ),
    }


def tree_from_dict(doc: dict) -> DecisionTree:
    nodes = []
    for rec in doc["nodes"]:
        if "counts" in rec:
            nodes.append(TreeNode(
                class_counts=np.asarray(rec["counts"], dtype=np.float64),
                prediction=int(rec["prediction"]),
            ))
        else:
            nodes.append(TreeNode(
                feature=int(rec["feature"]),
                threshold=float(rec["threshold"]),
                left=int(rec["left"]),
                right=int(rec["right"]),
            ))
    p = doc["params"]
    mf = p["max_features"]
    return DecisionTree(
        nodes=nodes,
        n_features=int(doc["n_features"]),
        n_classes=int(doc["n_classes"]),
        params=TreeParams(
            max_depth=int(p["max_depth"]),
            min_samples_leaf=int(p["min_samples_leaf"]),
            max_features=mf if mf == "all" else int(mf),
            seed=int(p["seed"]),
        ),
        depth=int(doc["depth"]),
        training_weights_used=(
            None if doc.get("training_weights_used") is None
            else np.asarray(doc["training_weights_used"], dtype=np.float64)
        ),
    )
