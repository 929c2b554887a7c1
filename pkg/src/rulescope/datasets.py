"""Tabular data loading, target discretization and stratified partitioning."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class Dataset:
    """A fixed table of numeric features with an optional class target.

    ``labels`` is None while the target is still a raw numeric column; call
    :func:`discretize_target` to turn it into ordinal classes. Class indices
    always index into ``class_names``.
    """

    feature_names: list[str]
    instances: np.ndarray          # shape (N, n), float64
    labels: np.ndarray | None      # shape (N,), int, or None before discretization
    class_names: list[str]
    target_values: np.ndarray | None = None   # raw numeric target, kept until discretized
    feature_bounds: list[tuple[float, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.instances = np.asarray(self.instances, dtype=np.float64)
        if self.instances.ndim != 2:
            raise ValueError("instances must be a 2-d array")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if len(self.labels) != len(self.instances):
                raise ValueError("labels length does not match instance count")
        if not self.feature_bounds:
            self.feature_bounds = observed_bounds(self.instances)

    @property
    def n_instances(self) -> int:
        return int(self.instances.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.instances.shape[1])

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_counts(self) -> np.ndarray:
        if self.labels is None:
            raise ValueError("dataset has no class labels yet")
        return np.bincount(self.labels, minlength=self.n_classes)

    def subset(self, indices: np.ndarray) -> "Dataset":
        """New Dataset holding the given rows; feature bounds are recomputed."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            feature_names=list(self.feature_names),
            instances=self.instances[idx].copy(),
            labels=None if self.labels is None else self.labels[idx].copy(),
            class_names=list(self.class_names),
            target_values=None if self.target_values is None else self.target_values[idx].copy(),
        )


@dataclass(frozen=True)
class SplitSpec:
    """Parameters of the train/test partition."""

    train_fraction: float = 0.9
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie strictly between 0 and 1")


def observed_bounds(instances: np.ndarray) -> list[tuple[float, float]]:
    """Per-feature (min, max) actually present in the data."""
    if len(instances) == 0:
        return [(0.0, 0.0)] * instances.shape[1]
    mins = instances.min(axis=0)
    maxs = instances.max(axis=0)
    return [(float(lo), float(hi)) for lo, hi in zip(mins, maxs)]


def normalize_value(x: float, bounds: tuple[float, float], clamp: bool = False) -> float:
    """Map x into [0, 1] relative to bounds; degenerate bounds map to 0.5."""
    lo, hi = bounds
    if hi <= lo:
        return 0.5
    v = (x - lo) / (hi - lo)
    if clamp:
        v = min(1.0, max(0.0, v))
    return float(v)


def load_csv(path: str | Path, target: str) -> Dataset:
    """Load a CSV with a header row into a Dataset.

    All non-target columns must parse as finite floats. A target column whose
    cells all parse as floats is kept numeric (labels stay None); anything
    else is treated as categorical with classes in first-appearance order.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise ValueError(f"{path}: duplicate column names {dupes}")
        if target not in header:
            raise ValueError(f"{path}: target column {target!r} not found in header {header}")
        t_col = header.index(target)
        feature_names = [h for i, h in enumerate(header) if i != t_col]
        rows: list[list[float]] = []
        raw_target: list[str] = []
        for line_no, record in enumerate(reader, start=2):
            if not record or all(cell.strip() == "" for cell in record):
                continue
            if len(record) != len(header):
                raise ValueError(
                    f"{path}:{line_no}: expected {len(header)} cells, got {len(record)}"
                )
            vals = []
            for i, cell in enumerate(record):
                if i == t_col:
                    raw_target.append(cell.strip())
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    raise ValueError(
                        f"{path}:{line_no}: column {header[i]!r} has non-numeric cell {cell!r}"
                    ) from None
                if not np.isfinite(v):
                    raise ValueError(
                        f"{path}:{line_no}: column {header[i]!r} has non-finite cell {cell!r}"
                    )
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    instances = np.asarray(rows, dtype=np.float64)

    numeric = True
    target_floats = []
    for cell in raw_target:
        try:
            v = float(cell)
        except ValueError:
            numeric = False
            break
        if not np.isfinite(v):
            raise ValueError(f"{path}: target column contains non-finite value {cell!r}")
        target_floats.append(v)
    if numeric:
        return Dataset(
            feature_names=feature_names,
            instances=instances,
            labels=None,
            class_names=[],
            target_values=np.asarray(target_floats, dtype=np.float64),
        )
    seen: dict[str, int] = {}
    labels = np.empty(len(raw_target), dtype=np.int64)
    for i, cell in enumerate(raw_target):
        if cell not in seen:
            seen[cell] = len(seen)
        labels[i] = seen[cell]
    return Dataset(
        feature_names=feature_names,
        instances=instances,
        labels=labels,
        class_names=list(seen.keys()),
    )


def discretize_target(ds: Dataset, bins: int) -> Dataset:
    """Equal-width binning of a numeric target into ordered classes.

    Bin b covers [min + b*w, min + (b+1)*w) with w = (max - min) / bins;
    the global maximum lands in the top bin. Classes are named
    Level-1 .. Level-<bins> from low to high target value.
    """
    if ds.target_values is None:
        raise ValueError("dataset target is already categorical")
    if bins < 2:
        raise ValueError("bins must be at least 2")
    t = ds.target_values
    lo, hi = float(t.min()), float(t.max())
    if hi <= lo:
        raise ValueError("target is constant, cannot discretize")
    width = (hi - lo) / bins
    labels = np.minimum(((t - lo) / width).astype(np.int64), bins - 1)
    return Dataset(
        feature_names=list(ds.feature_names),
        instances=ds.instances.copy(),
        labels=labels,
        class_names=[f"Level-{b + 1}" for b in range(bins)],
        target_values=t.copy(),
    )


def bin_edges(ds: Dataset, bins: int) -> list[float]:
    """Interior edges of the equal-width target binning (length bins - 1)."""
    if ds.target_values is None:
        raise ValueError("dataset target is already categorical")
    t = ds.target_values
    lo, hi = float(t.min()), float(t.max())
    width = (hi - lo) / bins
    return [lo + width * (b + 1) for b in range(bins - 1)]


def _train_counts_per_class(counts: np.ndarray, fraction: float) -> np.ndarray:
    """Largest-remainder apportioning of the train quota across classes.

    Every class train count stays within one instance of count * fraction and
    the totals add up to round-half-up(N * fraction).
    """
    exact = counts * fraction
    base = np.floor(exact).astype(np.int64)
    total = int(np.floor(counts.sum() * fraction + 0.5))
    short = total - int(base.sum())
    if short > 0:
        remainders = exact - base
        # ties go to the lower class index
        order = np.lexsort((np.arange(len(counts)), -remainders))
        for c in order[:short]:
            base[c] += 1
    return base


def stratified_split(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Class-stratified train/test partition, deterministic under the seed.

    Row order within each side preserves the original dataset order.
    """
    if ds.labels is None:
        raise ValueError("discretize or load a categorical target before splitting")
    counts = ds.class_counts()
    if (counts < 2).any():
        small = [ds.class_names[c] for c in np.nonzero(counts < 2)[0]]
        raise ValueError(f"every class needs at least 2 members; too small: {small}")
    train_quota = _train_counts_per_class(counts, spec.train_fraction)
    rng = np.random.default_rng(spec.seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for c in range(ds.n_classes):
        members = np.nonzero(ds.labels == c)[0]
        perm = rng.permutation(len(members))
        chosen = members[perm[: train_quota[c]]]
        rest = members[perm[train_quota[c]:]]
        train_idx.extend(chosen.tolist())
        test_idx.extend(rest.tolist())
    return ds.subset(np.sort(train_idx)), ds.subset(np.sort(test_idx))


def make_folds(ds: Dataset, folds: int, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified cross-validation folds over a labelled dataset.

    Returns (fit_indices, holdout_indices) pairs. Holdouts are disjoint and
    cover every row, per-class spread differs by at most one between folds,
    and overall holdout sizes differ by at most one. Requires
    folds <= smallest class count.
    """
    if ds.labels is None:
        raise ValueError("dataset has no class labels yet")
    if folds < 2:
        raise ValueError("folds must be at least 2")
    counts = ds.class_counts()
    smallest = int(counts[counts > 0].min())
    if folds > smallest:
        raise ValueError(
            f"folds={folds} exceeds the smallest class count {smallest}"
        )
    rng = np.random.default_rng([seed, folds])
    assignment = np.empty(ds.n_instances, dtype=np.int64)
    fold_totals = np.zeros(folds, dtype=np.int64)
    for c in range(ds.n_classes):
        members = np.nonzero(ds.labels == c)[0]
        if len(members) == 0:
            continue
        members = members[rng.permutation(len(members))]
        base = len(members) // folds
        extra = len(members) % folds
        # spread the remainder over the currently smallest folds
        sizes = np.full(folds, base, dtype=np.int64)
        order = np.lexsort((np.arange(folds), fold_totals))
        for f in order[:extra]:
            sizes[f] += 1
        pos = 0
        for f in range(folds):
            assignment[members[pos: pos + sizes[f]]] = f
            pos += sizes[f]
        fold_totals += sizes
    out = []
    everything = np.arange(ds.n_instances)
    for f in range(folds):
        holdout = everything[assignment == f]
        fit = everything[assignment != f]
        out.append((fit, holdout))
    return out
