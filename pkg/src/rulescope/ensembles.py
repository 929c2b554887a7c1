"""Bagged and boosted CART ensembles over a shared tree implementation.

Bagging draws one bootstrap multiset (N draws with replacement) per tree and
votes uniformly. Boosting is the discrete multi-class exponential reweighting
scheme: stages are fit on the full sample under evolving instance weights and
vote with their stage weight alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .trees import (
    DecisionTree,
    TreeParams,
    fit_tree,
    predict,
    predict_many,
    tree_from_dict,
    tree_to_dict,
)

if TYPE_CHECKING:
    from .evaluation import ModelMetrics

ALGO_RF = "RF"
ALGO_AB = "AB"

# keeps stage scores finite when a stage reaches zero weighted error
ALPHA_CAP = math.log(1e12)


@dataclass(frozen=True)
class RfParams:
    n_estimators: int = 10
    max_depth: int = 10
    min_samples_leaf: int = 1
    max_features: int | str = "all"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be at least 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be at least 1")


@dataclass(frozen=True)
class AbParams:
    n_estimators: int = 10
    max_depth: int = 10
    min_samples_leaf: int = 1
    learning_rate: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be at least 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be at least 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


@dataclass
class TrainedModel:
    model_id: str
    algorithm: str                    # ALGO_RF or ALGO_AB
    trees: list[DecisionTree]
    stage_weights: list[float]        # all 1.0 for bagging
    params: RfParams | AbParams
    metrics: "ModelMetrics | None" = None
    active: bool = True

    def n_trees(self) -> int:
        return len(self.trees)

    def n_rules(self) -> int:
        return sum(t.n_leaves() for t in self.trees)


def stage_alpha(err: float, n_classes: int, learning_rate: float) -> float:
    """Stage weight for a weighted error rate under the multi-class scheme.

    alpha = learning_rate * (log((1 - err) / err) + log(C - 1)), with the
    log-odds term capped so a perfect stage keeps a finite score.
    """
    if not 0.0 <= err < 1.0:
        raise ValueError("err must lie in [0, 1)")
    if err == 0.0:
        odds = ALPHA_CAP
    else:
        odds = min(math.log((1.0 - err) / err), ALPHA_CAP)
    return learning_rate * (odds + math.log(n_classes - 1))


def fit_rf(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    params: RfParams,
    model_id: str = "RF0",
    rows: np.ndarray | None = None,
) -> TrainedModel:
    """Fit a bagged ensemble; tree t uses the RNG stream (seed, t)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if rows is None:
        rows = np.arange(len(X))
    rows = np.asarray(rows, dtype=np.int64)
    tree_params = TreeParams(
        max_depth=params.max_depth,
        min_samples_leaf=params.min_samples_leaf,
        max_features=params.max_features,
        seed=params.seed,
    )
    trees = []
    for t in range(params.n_estimators):
        rng = np.random.default_rng([params.seed, t])
        draws = rng.integers(0, len(rows), size=len(rows))
        boot = rows[draws]
        trees.append(fit_tree(X, y, tree_params, n_classes, rows=boot, rng=rng))
    return TrainedModel(
        model_id=model_id,
        algorithm=ALGO_RF,
        trees=trees,
        stage_weights=[1.0] * len(trees),
        params=params,
    )


def fit_ab(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    params: AbParams,
    model_id: str = "AB0",
    rows: np.ndarray | None = None,
) -> TrainedModel:
    """Fit a boosted ensemble of full-feature CART stages.

    Instance weights start uniform and are renormalized to sum 1 after every
    stage; misclassified instances are scaled by e^alpha. A stage with zero
    weighted error is kept (capped alpha) and ends training. A stage no
    better than chance (err >= 1 - 1/C) is discarded and ends training; if
    that happens on the first stage no usable model exists.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if rows is None:
        rows = np.arange(len(X))
    rows = np.asarray(rows, dtype=np.int64)
    labels = y[rows]
    w = np.full(len(rows), 1.0 / len(rows))
    tree_params = TreeParams(
        max_depth=params.max_depth,
        min_samples_leaf=params.min_samples_leaf,
        max_features="all",
        seed=params.seed,
    )
    trees: list[DecisionTree] = []
    alphas: list[float] = []
    for m in range(params.n_estimators):
        rng = np.random.default_rng([params.seed, m])
        tree = fit_tree(X, y, tree_params, n_classes, rows=rows, weights=w, rng=rng)
        preds = predict_many(tree, X[rows])
        mis = preds != labels
        err = float(w[mis].sum())
        if err >= 1.0 - 1.0 / n_classes:
            if not trees:
                raise ValueError("boosting failed to find a weak learner")
            break
        alpha = stage_alpha(err, n_classes, params.learning_rate)
        trees.append(tree)
        alphas.append(alpha)
        if err == 0.0:
            break
        w = w.copy()
        w[mis] *= math.exp(alpha)
        w /= w.sum()
    return TrainedModel(
        model_id=model_id,
        algorithm=ALGO_AB,
        trees=trees,
        stage_weights=alphas,
        params=params,
    )


def class_scores(model: TrainedModel, x: np.ndarray) -> np.ndarray:
    """Per-class vote mass: sum of stage weights of trees predicting the class."""
    scores = np.zeros(model.trees[0].n_classes, dtype=np.float64)
    for tree, alpha in zip(model.trees, model.stage_weights):
        scores[predict(tree, x)[0]] += alpha
    return scores


def predict_one(model: TrainedModel, x: np.ndarray) -> int:
    """Weighted-vote prediction; score ties resolve to the lowest class index."""
    return int(np.argmax(class_scores(model, x)))


def predict_rf(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    if model.algorithm != ALGO_RF:
        raise ValueError(f"expected a bagged model, got {model.algorithm}")
    return _predict_matrix(model, X)


def predict_ab(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    if model.algorithm != ALGO_AB:
        raise ValueError(f"expected a boosted model, got {model.algorithm}")
    return _predict_matrix(model, X)


def predict_model(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    return _predict_matrix(model, X)


def _predict_matrix(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    out = np.empty(len(X), dtype=np.int64)
    for i, x in enumerate(X):
        out[i] = predict_one(model, x)
    return out


def model_to_dict(model: TrainedModel) -> dict:
    from .evaluation import metrics_to_dict  # late import, avoids a cycle

    p = model.params
    params: dict = {
        "n_estimators": p.n_estimators,
        "max_depth": p.max_depth,
        "min_samples_leaf": p.min_samples_leaf,
        "seed": p.seed,
    }
    if isinstance(p, RfParams):
        params["max_features"] = p.max_features
    else:
        params["learning_rate"] = p.learning_rate
    return {
        "model_id": model.model_id,
        "algorithm": model.algorithm,
        "params": params,
        "stage_weights": [float(a) for a in model.stage_weights],
        "trees": [tree_to_dict(t) for t in model.trees],
        "metrics": None if model.metrics is None else metrics_to_dict(model.metrics),
        "active": model.active,
    }


def model_from_dict(doc: dict) -> TrainedModel:
    from .evaluation import metrics_from_dict

    p = doc["params"]
    if doc["algorithm"] == ALGO_RF:
        mf = p["max_features"]
        params: RfParams | AbParams = RfParams(
            n_estimators=int(p["n_estimators"]),
            max_depth=int(p["max_depth"]),
            min_samples_leaf=int(p["min_samples_leaf"]),
            max_features=mf if mf == "all" else int(mf),
            seed=int(p["seed"]),
        )
    elif doc["algorithm"] == ALGO_AB:
        params = AbParams(
            n_estimators=int(p["n_estimators"]),
            max_depth=int(p["max_depth"]),
            min_samples_leaf=int(p["min_samples_leaf"]),
            learning_rate=float(p["learning_rate"]),
            seed=int(p["seed"]),
        )
    else:
        raise ValueError(f"unknown algorithm {doc['algorithm']!r}")
    return TrainedModel(
        model_id=doc["model_id"],
        algorithm=doc["algorithm"],
        trees=[tree_from_dict(t) for t in doc["trees"]],
        stage_weights=[float(a) for a in doc["stage_weights"]],
        params=params,
        metrics=None if doc.get("metrics") is None else metrics_from_dict(doc["metrics"]),
        active=bool(doc.get("active", True)),
    )
