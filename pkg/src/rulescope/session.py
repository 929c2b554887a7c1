"""Analysis session: datasets, model pool, rule caches, agreement, export.

A Session owns one train/test split, a pool of trained models with shared
CV folds, the active-model subset, display filters, and everything derived
from those (rules, vectors, embedding, importance). Derived artifacts are
cached under a fingerprint of the state that produced them, so repeated
queries and idempotent activations never recompute.

All JSON payloads served over HTTP and written by the CLI are built here,
from the same code paths, and serialized through to_canonical_json so the
two surfaces emit byte-identical documents.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .contrast import ContrastReport, ContrastRequest, build_report
from .datasets import Dataset, SplitSpec, discretize_target, load_csv, make_folds, normalize_value, stratified_split
from .ensembles import ALGO_AB, ALGO_RF, TrainedModel, model_from_dict, model_to_dict, predict_one
from .evaluation import confusion_transitions, sort_models
from .importance import aggregate_importance
from .rules import (
    STATUS_HIDDEN,
    DecisionRule,
    RuleFilter,
    apply_filter,
    extract_rules,
    round_rule,
)
from .rulespace import EmbeddingConfig, embed, vectorize
from .search import SearchRequest, default_space, run_search

EXPORT_FORMAT = "rulescope-manual-decisions"


def to_canonical_json(payload) -> str:
    """The one serialization used for API responses and CLI output files."""
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


@dataclass
class ManualDecision:
    """A rule snapshot a user chose to keep for manual classification."""

    rule_id: str
    model_id: str
    algorithm: str
    predicted_class: str            # class name, not index
    support: int
    impurity: float
    features: list[dict]            # {"name", "min", "max"} per feature

    def matches(self, feature_names: list[str], x: np.ndarray) -> bool:
        by_name = {n: i for i, n in enumerate(feature_names)}
        for feat in self.features:
            f = by_name.get(feat["name"])
            if f is None:
                return False
            v = x[f]
            if v < feat["min"] or v > feat["max"]:
                return False
        return True


def conflict_flag(model_votes: np.ndarray, ground_truth: int) -> bool:
    """An instance is conflicted unless the vote is unanimous and correct.

    model_votes is the per-class count of active-model predictions. The
    majority class (ties to the lowest index) must equal the ground truth
    and collect every vote for the instance to count as agreed.
    """
    total = int(model_votes.sum())
    if total == 0:
        raise ValueError("no active model votes")
    majority = int(np.argmax(model_votes))
    unanimous = int(model_votes[majority]) == total
    return majority != ground_truth or not unanimous


@dataclass
class _Job:
    job_id: str
    algorithm: str
    total: int
    done: int = 0
    status: str = "running"            # running | done | failed
    model_ids: list[str] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    error: str | None = None
    thread: threading.Thread | None = None


class Session:
    def __init__(
        self,
        train: Dataset,
        test: Dataset,
        seed: int = 0,
        n_folds: int = 3,
        source: dict | None = None,
    ) -> None:
        if train.labels is None or test.labels is None:
            raise ValueError("session datasets must carry class labels")
        self.train = train
        self.test = test
        self.seed = seed
        self.n_folds = n_folds
        self.folds = make_folds(train, n_folds, seed=seed)
        self.source = source or {}
        self.models: dict[str, TrainedModel] = {}
        self.active_ids: list[str] = []
        self.counters = {ALGO_RF: 0, ALGO_AB: 0}
        self.min_support: int | None = None
        self.max_support: int | None = None
        self.max_impurity: float | None = None
        self.test_instance_index: int | None = None
        self.rounding_decimals: int = 15
        self.embedding_config = EmbeddingConfig(seed=seed)
        self.manual_decisions: list[ManualDecision] = []
        self.current_test_index: int = 0
        self.selections: dict[str, list[str]] = {"selected": [], "anchored": []}
        self._lock = threading.RLock()
        self._cache: dict[str, tuple[str, object]] = {}
        self._jobs: dict[str, _Job] = {}

    # ---------------------------------------------------------------- state

    def _filter(self) -> RuleFilter:
        x = None
        if self.test_instance_index is not None:
            x = self.test.instances[self.test_instance_index]
        return RuleFilter(
            min_support=self.min_support,
            max_support=self.max_support,
            max_impurity=self.max_impurity,
            test_instance=x,
        )

    def _rules_key(self) -> dict:
        return {"active": sorted(self.active_ids), "decimals": self.rounding_decimals}

    def _view_key(self) -> dict:
        cfg = self.embedding_config
        return {
            "rules": self._rules_key(),
            "filter": {
                "min_support": self.min_support,
                "max_support": self.max_support,
                "max_impurity": self.max_impurity,
                "test_instance": self.test_instance_index,
            },
            "embedding": {
                "n_neighbors": cfg.n_neighbors,
                "min_dist": cfg.min_dist,
                "seed": cfg.seed,
                "dbscan_eps": cfg.dbscan_eps,
                "dbscan_min_pts": cfg.dbscan_min_pts,
            },
        }

    def fingerprint(self) -> str:
        state = dict(self._view_key())
        state["pool"] = sorted(self.models)
        state["manual_decisions"] = len(self.manual_decisions)
        blob = json.dumps(state, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def _cached(self, kind: str, key: dict, compute):
        tag = json.dumps(key, sort_keys=True)
        hit = self._cache.get(kind)
        if hit is not None and hit[0] == tag:
            return hit[1]
        value = compute()
        self._cache[kind] = (tag, value)
        return value

    # --------------------------------------------------------------- models

    def _assign_ids(self, models: list[TrainedModel]) -> list[TrainedModel]:
        """Number a batch worst-to-best, continuing the per-algorithm counter."""
        for model in models:   # already sorted ascending by score
            algo = model.algorithm
            self.counters[algo] += 1
            model.model_id = f"{algo}{self.counters[algo]}"
            self.models[model.model_id] = model
        return models

    def train_initial_pool(self, iterations: int = 10) -> None:
        """Populate the pool: one search batch per algorithm, all active."""
        with self._lock:
            for algo in (ALGO_RF, ALGO_AB):
                request = SearchRequest(
                    algorithm=algo,
                    iterations=iterations,
                    space=default_space(self.train.n_features),
                    seed=self.seed,
                )
                models, failures = run_search(
                    self.train.instances, self.train.labels, self.train.n_classes,
                    self.folds, request,
                )
                if not models:
                    raise ValueError(f"initial {algo} search produced no models: {failures}")
                self._assign_ids(models)
            self.active_ids = sorted(self.models)

    def set_active(self, ids: list[str]) -> str:
        """Replace the active set; returns the new state fingerprint.

        Re-activating the current set is a no-op that keeps every cache.
        """
        with self._lock:
            if not ids:
                raise ValueError("at least one model must stay active")
            unknown = [i for i in ids if i not in self.models]
            if unknown:
                raise KeyError(f"unknown model ids: {unknown}")
            new = sorted(set(ids))
            if new != sorted(self.active_ids):
                self.active_ids = new
            for model in self.models.values():
                model.active = model.model_id in set(new)
            return self.fingerprint()

    def set_filters(
        self,
        min_support: int | None = "keep",
        max_support: int | None = "keep",
        max_impurity: float | None = "keep",
        test_instance: int | None = "keep",
        decimals: int | None = None,
    ) -> None:
        """Update sticky display filters; 'keep' leaves a setting untouched."""
        with self._lock:
            if min_support != "keep":
                self.min_support = min_support
            if max_support != "keep":
                self.max_support = max_support
            if max_impurity != "keep":
                self.max_impurity = max_impurity
            if test_instance != "keep":
                if test_instance is not None and not 0 <= test_instance < self.test.n_instances:
                    raise IndexError(f"test instance {test_instance} out of range")
                self.test_instance_index = test_instance
            if decimals is not None:
                if not 0 <= decimals <= 15:
                    raise ValueError("decimals must lie in [0, 15]")
                self.rounding_decimals = decimals
            self._filter()   # validates the combination

    def set_embedding_config(self, **kwargs) -> EmbeddingConfig:
        with self._lock:
            cfg = self.embedding_config
            fields = {
                "n_neighbors": cfg.n_neighbors,
                "min_dist": cfg.min_dist,
                "seed": cfg.seed,
                "dbscan_eps": cfg.dbscan_eps,
                "dbscan_min_pts": cfg.dbscan_min_pts,
            }
            for k, v in kwargs.items():
                if k not in fields:
                    raise ValueError(f"unknown embedding setting {k!r}")
                fields[k] = v
            self.embedding_config = EmbeddingConfig(**fields)
            return self.embedding_config

    # ---------------------------------------------------------------- rules

    def rules(self) -> list[DecisionRule]:
        """Extracted rules of the active models, display rounding applied."""
        with self._lock:
            def compute():
                out: list[DecisionRule] = []
                for mid in sorted(self.active_ids):
                    out.extend(extract_rules(self.models[mid], self.train))
                if self.rounding_decimals < 15:
                    out = [round_rule(r, self.rounding_decimals) for r in out]
                return out
            return self._cached("rules", self._rules_key(), compute)

    def rule_statuses(self) -> dict[str, str]:
        with self._lock:
            flt = self._filter()
            key = self._view_key()
            return self._cached("statuses", key, lambda: apply_filter(self.rules(), flt))

    def rule_vectors(self) -> dict[str, np.ndarray]:
        with self._lock:
            def compute():
                vecs = vectorize(self.rules(), self.train.feature_bounds)
                return {v.rule_id: v.coords for v in vecs}
            return self._cached("vectors", self._rules_key(), compute)

    def embedding(self) -> tuple[list, dict]:
        """Embedded points for the non-hidden rules, plus resolved settings."""
        with self._lock:
            def compute():
                statuses = self.rule_statuses()
                rules = [r for r in self.rules() if statuses[r.rule_id] != STATUS_HIDDEN]
                vecs = vectorize(rules, self.train.feature_bounds)
                return embed(vecs, self.embedding_config)
            return self._cached("embedding", self._view_key(), compute)

    def importance(self):
        with self._lock:
            key = {"active": sorted(self.active_ids), "pool": sorted(self.models)}
            return self._cached(
                "importance",
                key,
                lambda: aggregate_importance(
                    list(self.models.values()), sorted(self.active_ids), self.train.feature_names
                ),
            )

    # ------------------------------------------------------------ agreement

    def _active_models(self) -> list[TrainedModel]:
        return [self.models[i] for i in sorted(self.active_ids)]

    def agreement(self, test_index: int) -> dict:
        """Vote breakdown and conflict flag for one test instance."""
        with self._lock:
            if not 0 <= test_index < self.test.n_instances:
                raise IndexError(f"test instance {test_index} out of range")
            if not self.active_ids:
                raise ValueError("no active models")
            x = self.test.instances[test_index]
            C = self.test.n_classes
            rf_votes = np.zeros(C, dtype=np.int64)
            ab_votes = np.zeros(C, dtype=np.int64)
            for model in self._active_models():
                c = predict_one(model, x)
                (rf_votes if model.algorithm == ALGO_RF else ab_votes)[c] += 1
            md_votes = np.zeros(C, dtype=np.int64)
            name_to_idx = {n: i for i, n in enumerate(self.test.class_names)}
            for dec in self.manual_decisions:
                if dec.matches(self.test.feature_names, x):
                    idx = name_to_idx.get(dec.predicted_class)
                    if idx is not None:
                        md_votes[idx] += 1
            model_votes = rf_votes + ab_votes
            gt = int(self.test.labels[test_index])
            majority = int(np.argmax(model_votes))
            self.current_test_index = test_index
            return {
                "test_index": test_index,
                "ground_truth": gt,
                "ground_truth_name": self.test.class_names[gt],
                "rf_votes": rf_votes.tolist(),
                "ab_votes": ab_votes.tolist(),
                "md_votes": md_votes.tolist(),
                "majority": majority,
                "majority_name": self.test.class_names[majority],
                "unanimous": bool(model_votes[majority] == model_votes.sum()),
                "conflict": conflict_flag(model_votes, gt),
            }

    def list_conflicts(self) -> list[int]:
        """Indices of conflicted test instances, ascending."""
        with self._lock:
            keep = self.current_test_index
            try:
                return [
                    i for i in range(self.test.n_instances)
                    if self.agreement(i)["conflict"]
                ]
            finally:
                self.current_test_index = keep

    # --------------------------------------------------------------- export

    def export_manual_decisions(self, rule_ids: list[str]) -> dict:
        """Snapshot the given rules as a manual-decision document.

        The entries append to the session's manual-decision list, so they
        immediately count as md votes in agreement views.
        """
        with self._lock:
            if not rule_ids:
                raise ValueError("no rules selected for export")
            by_id = {r.rule_id: r for r in self.rules()}
            unknown = [i for i in rule_ids if i not in by_id]
            if unknown:
                raise KeyError(f"unknown rule ids: {unknown}")
            decisions = []
            for rid in rule_ids:
                rule = by_id[rid]
                decisions.append(ManualDecision(
                    rule_id=rule.rule_id,
                    model_id=rule.model_id,
                    algorithm=rule.algorithm,
                    predicted_class=self.train.class_names[rule.predicted_class],
                    support=rule.support,
                    impurity=rule.impurity,
                    features=[
                        {"name": name, "min": float(lo), "max": float(hi)}
                        for name, (lo, hi) in zip(self.train.feature_names, rule.intervals)
                    ],
                ))
            self.manual_decisions.extend(decisions)
            return manual_decisions_to_doc(decisions, self.train.class_names)

    def import_manual_decisions(self, doc: dict) -> int:
        """Load a previously exported document; returns how many were added."""
        with self._lock:
            decisions = manual_decisions_from_doc(doc)
            self.manual_decisions.extend(decisions)
            return len(decisions)

    # --------------------------------------------------------------- search

    def run_search_sync(self, request: SearchRequest, progress=None) -> tuple[list[str], list[dict]]:
        """Search, add the new models to the pool (inactive), return their ids."""
        models, failures = run_search(
            self.train.instances, self.train.labels, self.train.n_classes,
            self.folds, request, progress=progress,
        )
        with self._lock:
            for model in models:
                model.active = False
            self._assign_ids(models)
            return [m.model_id for m in models], failures

    def start_search_job(self, request: SearchRequest) -> str:
        with self._lock:
            job_id = f"job-{len(self._jobs) + 1}"
            job = _Job(job_id=job_id, algorithm=request.algorithm, total=request.iterations)
            self._jobs[job_id] = job

        def work():
            try:
                ids, failures = self.run_search_sync(
                    request, progress=lambda done, total: setattr(job, "done", done)
                )
                job.model_ids = ids
                job.failures = failures
                job.done = job.total
                job.status = "done"
            except Exception as exc:     # noqa: BLE001 - reported to the client
                job.status = "failed"
                job.error = str(exc)

        job.thread = threading.Thread(target=work, daemon=True)
        job.thread.start()
        return job_id

    def job_status(self, job_id: str) -> dict:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise KeyError(f"unknown search job {job_id!r}")
            return {
                "job_id": job.job_id,
                "algorithm": job.algorithm,
                "status": job.status,
                "progress": {"done": job.done, "total": job.total},
                "model_ids": list(job.model_ids),
                "failures": list(job.failures),
                "error": job.error,
            }

    # ------------------------------------------------------------- payloads

    def models_payload(self) -> dict:
        with self._lock:
            ordered = sort_models(list(self.models.values()))
            entries = []
            for m in ordered:
                met = m.metrics
                entry = {
                    "id": m.model_id,
                    "algorithm": m.algorithm,
                    "params": _params_dict(m),
                    "metrics": {
                        "accuracy": met.accuracy,
                        "precision_macro": met.precision_macro,
                        "recall_macro": met.recall_macro,
                        "overall_score": met.overall_score,
                        "accuracy_pct": round(met.accuracy * 100, 1),
                        "precision_pct": round(met.precision_macro * 100, 1),
                        "recall_pct": round(met.recall_macro * 100, 1),
                        "overall_pct": round(met.overall_score * 100, 1),
                        "per_class_fp": list(met.per_class_fp),
                        "per_class_fn": list(met.per_class_fn),
                    },
                    "n_trees": m.n_trees(),
                    "n_rules": m.n_rules(),
                    "active": m.model_id in set(self.active_ids),
                }
                entries.append(entry)
            return {
                "models": entries,
                "transitions": confusion_transitions(list(self.models.values())),
                "active_ids": sorted(self.active_ids),
                "class_names": list(self.train.class_names),
                "fingerprint": self.fingerprint(),
            }

    def importance_payload(self) -> dict:
        with self._lock:
            table = self.importance()
            return {
                "feature_names": table.feature_names,
                "per_algorithm": table.per_algorithm,
                "active_mean": table.active_mean,
                "all_mean": table.all_mean,
                "delta": table.delta,
                "display_order": table.display_order,
                "fingerprint": self.fingerprint(),
            }

    def rules_payload(self) -> dict:
        with self._lock:
            rules = self.rules()
            statuses = self.rule_statuses()
            vectors = self.rule_vectors()
            entries = []
            for r in rules:
                entries.append({
                    "rule_id": r.rule_id,
                    "model_id": r.model_id,
                    "algorithm": r.algorithm,
                    "predicted_class": r.predicted_class,
                    "predicted_class_name": self.train.class_names[r.predicted_class],
                    "intervals": [[float(lo), float(hi)] for lo, hi in r.intervals],
                    "intervals_normalized": [
                        [float(vectors[r.rule_id][2 * f]), float(vectors[r.rule_id][2 * f + 1])]
                        for f in range(self.train.n_features)
                    ],
                    "support": r.support,
                    "class_counts": list(r.class_counts),
                    "impurity": r.impurity,
                    "status": statuses[r.rule_id],
                })
            supports = [r.support for r in rules]
            hist, edges = np.histogram(supports, bins=20) if supports else (np.zeros(0), np.zeros(1))
            n_visible = sum(1 for s in statuses.values() if s == "visible")
            n_dimmed = sum(1 for s in statuses.values() if s == "dimmed")
            return {
                "rules": entries,
                "counts": {
                    "total": len(rules),
                    "visible": n_visible,
                    "dimmed": n_dimmed,
                    "hidden": len(rules) - n_visible - n_dimmed,
                },
                "support_histogram": {
                    "edges": [float(e) for e in edges],
                    "counts": [int(c) for c in hist],
                },
                "filter": {
                    "min_support": self.min_support,
                    "max_support": self.max_support,
                    "max_impurity": self.max_impurity,
                    "test_instance": self.test_instance_index,
                    "rounding_decimals": self.rounding_decimals,
                },
                "feature_names": list(self.train.feature_names),
                "class_names": list(self.train.class_names),
                "fingerprint": self.fingerprint(),
            }

    def embedding_payload(self) -> dict:
        with self._lock:
            points, info = self.embedding()
            statuses = self.rule_statuses()
            by_id = {r.rule_id: r for r in self.rules()}
            entries = []
            for p in points:
                r = by_id[p.rule_id]
                entries.append({
                    "rule_id": p.rule_id,
                    "x": p.x,
                    "y": p.y,
                    "cluster_label": p.cluster_label,
                    "model_id": r.model_id,
                    "algorithm": r.algorithm,
                    "predicted_class": r.predicted_class,
                    "predicted_class_name": self.train.class_names[r.predicted_class],
                    "support": r.support,
                    "impurity": r.impurity,
                    "status": statuses[p.rule_id],
                })
            cfg = self.embedding_config
            return {
                "points": entries,
                "resolved": info,
                "config": {
                    "n_neighbors": cfg.n_neighbors,
                    "min_dist": cfg.min_dist,
                    "seed": cfg.seed,
                    "dbscan_eps": cfg.dbscan_eps,
                    "dbscan_min_pts": cfg.dbscan_min_pts,
                },
                "class_names": list(self.train.class_names),
                "fingerprint": self.fingerprint(),
            }

    def contrast_payload(self, req: ContrastRequest) -> dict:
        with self._lock:
            vectors = self.rule_vectors()
            report = build_report(req, vectors)
            self.selections = {
                "selected": list(req.selected),
                "anchored": list(req.anchored),
            }
            def fmt_intervals(vals):
                return [None if v is None else [float(v[0]), float(v[1])] for v in vals]
            return {
                "ranked_features": [
                    {
                        "feature": f,
                        "name": self.train.feature_names[f],
                        "score": score,
                    }
                    for f, score in report.ranked_features
                ],
                "group_intervals": {k: fmt_intervals(v) for k, v in report.group_intervals.items()},
                "comparison": (
                    None if report.comparison is None
                    else [[[float(a), float(b)] for a, b in feats] for feats in report.comparison]
                ),
                "bins": report.bins,
                "mode": report.mode,
                "feature_names": list(self.train.feature_names),
                "fingerprint": self.fingerprint(),
            }

    def conflicts_payload(self) -> dict:
        with self._lock:
            return {
                "conflicts": self.list_conflicts(),
                "n_test": self.test.n_instances,
                "fingerprint": self.fingerprint(),
            }

    def dataset_meta_payload(self) -> dict:
        with self._lock:
            def norm_rows(ds: Dataset):
                rows = []
                for x in ds.instances:
                    rows.append([
                        normalize_value(float(v), self.train.feature_bounds[f], clamp=True)
                        for f, v in enumerate(x)
                    ])
                return rows
            return {
                "feature_names": list(self.train.feature_names),
                "class_names": list(self.train.class_names),
                "n_train": self.train.n_instances,
                "n_test": self.test.n_instances,
                "n_features": self.train.n_features,
                "train_bounds": [[float(a), float(b)] for a, b in self.train.feature_bounds],
                "train_normalized": norm_rows(self.train),
                "train_labels": [int(l) for l in self.train.labels],
                "test_normalized": norm_rows(self.test),
                "test_raw": [[float(v) for v in row] for row in self.test.instances],
                "test_labels": [int(l) for l in self.test.labels],
                "source": dict(self.source),
                "seed": self.seed,
                "n_folds": self.n_folds,
                "fingerprint": self.fingerprint(),
            }

    # ------------------------------------------------------------- persist

    def to_dict(self) -> dict:
        with self._lock:
            return {
                "format": "rulescope-session",
                "version": 1,
                "seed": self.seed,
                "n_folds": self.n_folds,
                "source": dict(self.source),
                "train": _dataset_to_dict(self.train),
                "test": _dataset_to_dict(self.test),
                "models": [model_to_dict(m) for m in self.models.values()],
                "active_ids": sorted(self.active_ids),
                "counters": dict(self.counters),
                "filter": {
                    "min_support": self.min_support,
                    "max_support": self.max_support,
                    "max_impurity": self.max_impurity,
                    "test_instance": self.test_instance_index,
                    "rounding_decimals": self.rounding_decimals,
                },
                "embedding_config": {
                    "n_neighbors": self.embedding_config.n_neighbors,
                    "min_dist": self.embedding_config.min_dist,
                    "seed": self.embedding_config.seed,
                    "dbscan_eps": self.embedding_config.dbscan_eps,
                    "dbscan_min_pts": self.embedding_config.dbscan_min_pts,
                },
                "manual_decisions": [
                    {
                        "rule_id": d.rule_id,
                        "model_id": d.model_id,
                        "algorithm": d.algorithm,
                        "predicted_class": d.predicted_class,
                        "support": d.support,
                        "impurity": d.impurity,
                        "features": d.features,
                    }
                    for d in self.manual_decisions
                ],
                "current_test_index": self.current_test_index,
                "selections": dict(self.selections),
            }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(to_canonical_json(self.to_dict()))

    @classmethod
    def from_dict(cls, doc: dict) -> "Session":
        if doc.get("format") != "rulescope-session":
            raise ValueError("not a session document")
        session = cls(
            train=_dataset_from_dict(doc["train"]),
            test=_dataset_from_dict(doc["test"]),
            seed=int(doc["seed"]),
            n_folds=int(doc["n_folds"]),
            source=doc.get("source", {}),
        )
        for mdoc in doc["models"]:
            model = model_from_dict(mdoc)
            session.models[model.model_id] = model
        session.active_ids = [str(i) for i in doc["active_ids"]]
        session.counters = {k: int(v) for k, v in doc["counters"].items()}
        flt = doc["filter"]
        session.min_support = flt["min_support"]
        session.max_support = flt["max_support"]
        session.max_impurity = flt["max_impurity"]
        session.test_instance_index = flt["test_instance"]
        session.rounding_decimals = int(flt["rounding_decimals"])
        ec = doc["embedding_config"]
        session.embedding_config = EmbeddingConfig(
            n_neighbors=ec["n_neighbors"],
            min_dist=float(ec["min_dist"]),
            seed=int(ec["seed"]),
            dbscan_eps=ec["dbscan_eps"],
            dbscan_min_pts=int(ec["dbscan_min_pts"]),
        )
        session.manual_decisions = [
            ManualDecision(
                rule_id=d["rule_id"],
                model_id=d["model_id"],
                algorithm=d["algorithm"],
                predicted_class=d["predicted_class"],
                support=int(d["support"]),
                impurity=float(d["impurity"]),
                features=list(d["features"]),
            )
            for d in doc.get("manual_decisions", [])
        ]
        session.current_test_index = int(doc.get("current_test_index", 0))
        session.selections = doc.get("selections", {"selected": [], "anchored": []})
        return session

    @classmethod
    def load(cls, path: str | Path) -> "Session":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _params_dict(model: TrainedModel) -> dict:
    p = model.params
    out = {
        "n_estimators": p.n_estimators,
        "max_depth": p.max_depth,
        "min_samples_leaf": p.min_samples_leaf,
        "seed": p.seed,
    }
    if model.algorithm == ALGO_RF:
        out["max_features"] = p.max_features
    else:
        out["learning_rate"] = p.learning_rate
    return out


def _dataset_to_dict(ds: Dataset) -> dict:
    return {
        "feature_names": list(ds.feature_names),
        "instances": [[float(v) for v in row] for row in ds.instances],
        "labels": None if ds.labels is None else [int(l) for l in ds.labels],
        "class_names": list(ds.class_names),
        "target_values": None if ds.target_values is None else [float(v) for v in ds.target_values],
        "feature_bounds": [[float(a), float(b)] for a, b in ds.feature_bounds],
    }


def _dataset_from_dict(doc: dict) -> Dataset:
    return Dataset(
        feature_names=list(doc["feature_names"]),
        instances=np.asarray(doc["instances"], dtype=np.float64),
        labels=None if doc["labels"] is None else np.asarray(doc["labels"], dtype=np.int64),
        class_names=list(doc["class_names"]),
        target_values=(
            None if doc.get("target_values") is None
            else np.asarray(doc["target_values"], dtype=np.float64)
        ),
        feature_bounds=[(float(a), float(b)) for a, b in doc["feature_bounds"]],
    )


def manual_decisions_to_doc(decisions: list[ManualDecision], class_names: list[str]) -> dict:
    return {
        "format": EXPORT_FORMAT,
        "version": 1,
        "class_names": list(class_names),
        "decisions": [
            {
                "rule_id": d.rule_id,
                "model_id": d.model_id,
                "algorithm": d.algorithm,
                "predicted_class": d.predicted_class,
                "support": d.support,
                "impurity": d.impurity,
                "features": [
                    {"name": f["name"], "min": float(f["min"]), "max": float(f["max"])}
                    for f in d.features
                ],
            }
            for d in decisions
        ],
    }


def manual_decisions_from_doc(doc: dict) -> list[ManualDecision]:
    if doc.get("format") != EXPORT_FORMAT:
        raise ValueError("not a manual-decision document")
    return [
        ManualDecision(
            rule_id=d["rule_id"],
            model_id=d["model_id"],
            algorithm=d["algorithm"],
            predicted_class=d["predicted_class"],
            support=int(d["support"]),
            impurity=float(d["impurity"]),
            features=[
                {"name": f["name"], "min": float(f["min"]), "max": float(f["max"])}
                for f in d["features"]
            ],
        )
        for d in doc["decisions"]
    ]


def build_session(
    data_path: str | Path,
    target: str,
    bins: int | None = None,
    seed: int = 0,
    train_fraction: float = 0.9,
    n_folds: int = 3,
    iterations: int = 10,
) -> Session:
    """Load a CSV, split, and train the initial model pool."""
    ds = load_csv(data_path, target)
    if ds.labels is None:
        if bins is None:
            raise ValueError(
                "target column is numeric; pass the number of bins to discretize it"
            )
        ds = discretize_target(ds, bins)
    train, test = stratified_split(ds, SplitSpec(train_fraction=train_fraction, seed=seed))
    session = Session(
        train, test, seed=seed, n_folds=n_folds,
        source={
            "path": str(data_path),
            "target": target,
            "bins": bins,
            "train_fraction": train_fraction,
        },
    )
    session.train_initial_pool(iterations=iterations)
    return session
