"""Cross-validated model scoring and model-to-model confusion deltas."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .ensembles import ALGO_AB, ALGO_RF, AbParams, RfParams, TrainedModel, fit_ab, fit_rf, predict_model


@dataclass
class ModelMetrics:
    accuracy: float
    precision_macro: float
    recall_macro: float
    overall_score: float
    per_class_fp: list[int]
    per_class_fn: list[int]
    cv_predictions: np.ndarray | None = None   # out-of-fold prediction per training row


def score_predictions(truths: np.ndarray, preds: np.ndarray, n_classes: int) -> ModelMetrics:
    """Accuracy, macro precision/recall and per-class FP/FN counts.

    A class that is never predicted contributes precision 0 to the macro
    average; a class absent from the truths contributes recall 0. The
    overall score is the exact arithmetic mean of the three totals.
    """
    truths = np.asarray(truths, dtype=np.int64)
    preds = np.asarray(preds, dtype=np.int64)
    if len(truths) != len(preds) or len(truths) == 0:
        raise ValueError("truths and predictions must be equal-length and non-empty")
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (truths, preds), 1)
    tp = np.diag(confusion).astype(np.float64)
    predicted = confusion.sum(axis=0).astype(np.float64)
    actual = confusion.sum(axis=1).astype(np.float64)
    precision = np.divide(tp, predicted, out=np.zeros(n_classes), where=predicted > 0)
    recall = np.divide(tp, actual, out=np.zeros(n_classes), where=actual > 0)
    accuracy = float(tp.sum() / len(truths))
    precision_macro = float(precision.mean())
    recall_macro = float(recall.mean())
    fp = (predicted - tp).astype(np.int64)
    fn = (actual - tp).astype(np.int64)
    return ModelMetrics(
        accuracy=accuracy,
        precision_macro=precision_macro,
        recall_macro=recall_macro,
        overall_score=(accuracy + precision_macro + recall_macro) / 3.0,
        per_class_fp=fp.tolist(),
        per_class_fn=fn.tolist(),
        cv_predictions=preds.copy(),
    )


def evaluate_cv(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    folds: list[tuple[np.ndarray, np.ndarray]],
    algorithm: str,
    params: RfParams | AbParams,
) -> ModelMetrics:
    """Out-of-fold metrics: fit one model per fold, predict its holdout.

    The concatenated holdout predictions cover every training row exactly
    once, so the metrics describe the whole training set.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    oof = np.full(len(y), -1, dtype=np.int64)
    for fit_idx, holdout_idx in folds:
        if algorithm == ALGO_RF:
            model = fit_rf(X, y, n_classes, params, rows=fit_idx)
        elif algorithm == ALGO_AB:
            model = fit_ab(X, y, n_classes, params, rows=fit_idx)
        else:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        oof[holdout_idx] = predict_model(model, X[holdout_idx])
    if (oof < 0).any():
        raise ValueError("folds do not cover every training row")
    return score_predictions(y, oof, n_classes)


_ID_RE = re.compile(r"^([A-Za-z]+)(\d+)$")


def model_sort_key(model: TrainedModel) -> tuple:
    """Ascending overall score; ties by algorithm then numeric id."""
    score = model.metrics.overall_score if model.metrics is not None else float("-inf")
    m = _ID_RE.match(model.model_id)
    if m:
        return (score, m.group(1), int(m.group(2)))
    return (score, model.model_id, 0)


def sort_models(models: list[TrainedModel]) -> list[TrainedModel]:
    return sorted(models, key=model_sort_key)


def confusion_transitions(models: list[TrainedModel]) -> list[dict]:
    """FP/FN deltas between score-adjacent models.

    Models are ordered ascending by overall score; entry i describes how the
    per-class false positives and false negatives change when moving from
    model i to model i+1 in that ordering.
    """
    ordered = sort_models([m for m in models if m.metrics is not None])
    out = []
    for a, b in zip(ordered, ordered[1:]):
        out.append({
            "from_id": a.model_id,
            "to_id": b.model_id,
            "delta_fp": [int(x - y) for x, y in zip(b.metrics.per_class_fp, a.metrics.per_class_fp)],
            "delta_fn": [int(x - y) for x, y in zip(b.metrics.per_class_fn, a.metrics.per_class_fn)],
        })
    return out


def metrics_to_dict(m: ModelMetrics) -> dict:
    return {
        "accuracy": m.accuracy,
        "precision_macro": m.precision_macro,
        "recall_macro": m.recall_macro,
        "overall_score": m.overall_score,
        "per_class_fp": list(m.per_class_fp),
        "per_class_fn": list(m.per_class_fn),
        "cv_predictions": None if m.cv_predictions is None else [int(p) for p in m.cv_predictions],
    }


def metrics_from_dict(doc: dict) -> ModelMetrics:
    return ModelMetrics(
        accuracy=float(doc["accuracy"]),
        precision_macro=float(doc["precision_macro"]),
        recall_macro=float(doc["recall_macro"]),
        overall_score=float(doc["overall_score"]),
        per_class_fp=[int(x) for x in doc["per_class_fp"]],
        per_class_fn=[int(x) for x in doc["per_class_fn"]],
        cv_predictions=(
            None if doc.get("cv_predictions") is None
            else np.asarray(doc["cv_predictions"], dtype=np.int64)
        ),
    )
