"""Random hyperparameter search with shared cross-validation folds.

Candidates are independent uniform draws from the search space (duplicates
allowed). Each is scored by out-of-fold CV and refit on the full training
set; batches come back sorted worst to best by overall score so callers can
number them in presentation order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .ensembles import ALGO_AB, ALGO_RF, AbParams, RfParams, fit_ab, fit_rf
from .evaluation import evaluate_cv, model_sort_key


@dataclass(frozen=True)
class SearchSpace:
    n_estimators: tuple[int, int] = (2, 20)
    max_depth: tuple[int, int] = (10, 25)
    min_samples_leaf: tuple[int, int] = (1, 10)
    max_features: tuple[int, int] | None = None     # bagging only, data dependent
    learning_rate: tuple[float, float] = (0.1, 0.4)  # boosting only

    def __post_init__(self) -> None:
        for name in ("n_estimators", "max_depth", "min_samples_leaf", "learning_rate"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name}: empty range ({lo}, {hi})")
        if self.max_features is not None and self.max_features[0] > self.max_features[1]:
            raise ValueError(f"max_features: empty range {self.max_features}")
        if self.n_estimators[0] < 1:
            raise ValueError("n_estimators must start at 1 or higher")
        if self.min_samples_leaf[0] < 1:
            raise ValueError("min_samples_leaf must start at 1 or higher")
        if self.learning_rate[0] <= 0:
            raise ValueError("learning_rate must be positive")


def default_space(n_features: int) -> SearchSpace:
    """The standard space, with the bagging feature-subset range bound to n.

    The subset size runs from ceil(sqrt(n)) up to n - 1 so bagged trees
    always drop at least one feature per node draw (degenerate for tiny n,
    where the range collapses to a single value).
    """
    if n_features < 1:
        raise ValueError("need at least one feature")
    hi = max(1, n_features - 1)
    lo = min(math.ceil(math.sqrt(n_features)), hi)
    return SearchSpace(max_features=(lo, hi))


def constrain_space(space: SearchSpace, limits: dict[str, tuple]) -> SearchSpace:
    """Narrow the space; every constraint must stay inside the current range."""
    updates = {}
    for name, (lo, hi) in limits.items():
        if not hasattr(space, name):
            raise ValueError(f"unknown search parameter {name!r}")
        current = getattr(space, name)
        if current is None:
            raise ValueError(f"{name} is not applicable here")
        if lo > hi:
            raise ValueError(f"{name}: empty constraint ({lo}, {hi})")
        if lo < current[0] or hi > current[1]:
            raise ValueError(
                f"{name}: constraint ({lo}, {hi}) exceeds the legal range {current}"
            )
        caster = float if name == "learning_rate" else int
        updates[name] = (caster(lo), caster(hi))
    return replace(space, **updates)


@dataclass(frozen=True)
class SearchRequest:
    algorithm: str
    iterations: int = 10
    space: SearchSpace = SearchSpace()
    seed: int = 0

    def __post_init__(self) -> None:
        if self.algorithm not in (ALGO_RF, ALGO_AB):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.algorithm == ALGO_RF and self.space.max_features is None:
            raise ValueError("bagging search needs a max_features range; use default_space(n)")


def sample_params(space: SearchSpace, algorithm: str, rng: np.random.Generator) -> RfParams | AbParams:
    """One uniform draw; integer ranges are inclusive on both ends."""
    n_estimators = int(rng.integers(space.n_estimators[0], space.n_estimators[1] + 1))
    max_depth = int(rng.integers(space.max_depth[0], space.max_depth[1] + 1))
    min_samples_leaf = int(rng.integers(space.min_samples_leaf[0], space.min_samples_leaf[1] + 1))
    seed = int(rng.integers(0, 2**31 - 1))
    if algorithm == ALGO_RF:
        if space.max_features is None:
            raise ValueError("max_features range is unset")
        max_features = int(rng.integers(space.max_features[0], space.max_features[1] + 1))
        return RfParams(
            n_estimators=n_estimators,
            max_depth=max_depth,
            min_samples_leaf=min_samples_leaf,
            max_features=max_features,
            seed=seed,
        )
    if algorithm == ALGO_AB:
        learning_rate = float(rng.uniform(space.learning_rate[0], space.learning_rate[1]))
        return AbParams(
            n_estimators=n_estimators,
            max_depth=max_depth,
            min_samples_leaf=min_samples_leaf,
            learning_rate=learning_rate,
            seed=seed,
        )
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_search(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    folds: list[tuple[np.ndarray, np.ndarray]],
    request: SearchRequest,
    max_workers: int = 4,
    progress=None,
) -> tuple[list, list[dict]]:
    """Evaluate `iterations` sampled candidates; returns (models, failures).

    Every successful candidate is refit on the full training data with its
    CV metrics attached. Candidates run in a small worker pool and are
    gathered by index, so results are deterministic for a fixed seed.
    Individual failures are recorded and skipped; if everything fails the
    search itself raises.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    rng = np.random.default_rng([request.seed, 1 if request.algorithm == ALGO_RF else 2])
    candidates = [sample_params(request.space, request.algorithm, rng)
                  for _ in range(request.iterations)]

    done = 0

    def evaluate(i: int):
        params = candidates[i]
        metrics = evaluate_cv(X, y, n_classes, folds, request.algorithm, params)
        if request.algorithm == ALGO_RF:
            model = fit_rf(X, y, n_classes, params)
        else:
            model = fit_ab(X, y, n_classes, params)
        model.metrics = metrics
        return model

    models = []
    failures: list[dict] = []
    with ThreadPoolExecutor(max_workers=min(max_workers, request.iterations)) as pool:
        futures = [pool.submit(evaluate, i) for i in range(request.iterations)]
        for i, fut in enumerate(futures):
            try:
                models.append(fut.result())
            except (ValueError, FloatingPointError) as exc:
                failures.append({
                    "candidate": i,
                    "params": repr(candidates[i]),
                    "error": str(exc),
                })
            done += 1
            if progress is not None:
                progress(done, request.iterations)
    if not models:
        detail = "; ".join(f["error"] for f in failures[:3])
        raise ValueError(f"all {request.iterations} search candidates failed: {detail}")
    models.sort(key=model_sort_key)
    return models, failures
