"""Impurity-decrease feature importance, per model and aggregated.

A split's contribution is (weighted samples at the node / weighted samples
at the root) times its Gini decrease, credited to the split feature. Tree
vectors are normalized to sum 1, combined into a model vector by a
stage-weighted mean, and model vectors aggregate into per-feature
distribution summaries across the active model set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import TrainedModel
from .trees import DecisionTree


@dataclass
class ImportanceTable:
    feature_names: list[str]
    per_algorithm: dict[str, dict[str, list[float]]]  # algo -> stat -> per-feature
    active_mean: list[float]
    all_mean: list[float]
    delta: list[float]            # active_mean - all_mean per feature
    display_order: list[int]      # feature indices, active_mean descending


def _node_counts(tree: DecisionTree) -> list[np.ndarray]:
    """Weighted class counts at every node, leaves summed upward."""
    counts: list[np.ndarray | None] = [None] * len(tree.nodes)

    def fill(idx: int) -> np.ndarray:
        node = tree.nodes[idx]
        if node.is_leaf:
            counts[idx] = node.class_counts.astype(np.float64)
        else:
            counts[idx] = fill(node.left) + fill(node.right)
        return counts[idx]

    fill(0)
    return counts


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts / total
    return float(np.sum(p * (1.0 - p)))


def tree_importance(tree: DecisionTree) -> np.ndarray | None:
    """Normalized per-feature Gini decrease; None for a splitless tree."""
    counts = _node_counts(tree)
    root_w = counts[0].sum()
    if root_w <= 0:
        return None
    imp = np.zeros(tree.n_features, dtype=np.float64)
    found = False
    for idx, node in enumerate(tree.nodes):
        if node.is_leaf:
            continue
        found = True
        w = counts[idx].sum()
        wl = counts[node.left].sum()
        wr = counts[node.right].sum()
        decrease = (
            _gini(counts[idx])
            - (wl / w) * _gini(counts[node.left])
            - (wr / w) * _gini(counts[node.right])
        )
        imp[node.feature] += (w / root_w) * decrease
    if not found:
        return None
    total = imp.sum()
    if total <= 0:
        return None
    return imp / total


def model_importance(model: TrainedModel, n_features: int) -> np.ndarray:
    """Stage-weighted mean of tree importances, renormalized to sum 1.

    Bagged models weight every tree equally. A model whose trees never
    split falls back to the uniform vector.
    """
    acc = np.zeros(n_features, dtype=np.float64)
    for tree, alpha in zip(model.trees, model.stage_weights):
        vec = tree_importance(tree)
        if vec is not None:
            acc += alpha * vec
    total = acc.sum()
    if total <= 0:
        return np.full(n_features, 1.0 / n_features)
    return acc / total


def aggregate_importance(
    models: list[TrainedModel],
    active_ids: list[str],
    feature_names: list[str],
) -> ImportanceTable:
    """Distribution summaries of model importances over the active set.

    Per algorithm (only those with active models): min, q1, median, q3,
    max and mean per feature. The delta column contrasts the active-set
    mean against the mean over the whole pool.
    """
    if not active_ids:
        raise ValueError("no active models")
    by_id = {m.model_id: m for m in models}
    unknown = [i for i in active_ids if i not in by_id]
    if unknown:
        raise ValueError(f"unknown model ids: {unknown}")
    n = len(feature_names)
    vectors = {m.model_id: model_importance(m, n) for m in models}
    active = [vectors[i] for i in active_ids]
    per_algorithm: dict[str, dict[str, list[float]]] = {}
    for algo in sorted({by_id[i].algorithm for i in active_ids}):
        rows = np.asarray([vectors[i] for i in active_ids if by_id[i].algorithm == algo])
        per_algorithm[algo] = {
            "min": rows.min(axis=0).tolist(),
            "q1": np.percentile(rows, 25, axis=0).tolist(),
            "median": np.percentile(rows, 50, axis=0).tolist(),
            "q3": np.percentile(rows, 75, axis=0).tolist(),
            "max": rows.max(axis=0).tolist(),
            "mean": rows.mean(axis=0).tolist(),
        }
    active_mean = np.asarray(active).mean(axis=0)
    all_mean = np.asarray(list(vectors.values())).mean(axis=0)
    order = np.lexsort((np.arange(n), -active_mean))
    return ImportanceTable(
        feature_names=list(feature_names),
        per_algorithm=per_algorithm,
        active_mean=active_mean.tolist(),
        all_mean=all_mean.tolist(),
        delta=(active_mean - all_mean).tolist(),
        display_order=[int(i) for i in order],
    )
