"""Contrastive analysis: which features separate a rule group from the rest.

Each rule contributes one value per feature, the midpoint of its normalized
interval. Binned midpoint distributions of the selected group and of the
remaining rules are compared by cross entropy: features where the selected
group concentrates in bins the rest rarely occupies score highest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SMOOTHING = 1e-9

MODE_OVERLAP = "overlap"
MODE_DIFFERENCE = "difference"

Interval = tuple[float, float]


@dataclass(frozen=True)
class ContrastRequest:
    selected: tuple[str, ...]
    universe: tuple[str, ...]
    bins: int = 10
    mode: str = MODE_OVERLAP
    anchored: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.bins < 2:
            raise ValueError("bins must be at least 2")
        if self.mode not in (MODE_OVERLAP, MODE_DIFFERENCE):
            raise ValueError(f"mode must be {MODE_OVERLAP!r} or {MODE_DIFFERENCE!r}")


@dataclass
class ContrastReport:
    ranked_features: list[tuple[int, float]]          # (feature, score), best first
    group_intervals: dict[str, list[Interval | None]]  # per group, per feature
    comparison: list[list[Interval]] | None            # per feature, when anchored
    bins: int = 10
    mode: str = MODE_OVERLAP


def _midpoints(ids, vectors: dict[str, np.ndarray], feature: int) -> np.ndarray:
    lo = np.asarray([vectors[r][2 * feature] for r in ids])
    hi = np.asarray([vectors[r][2 * feature + 1] for r in ids])
    return (lo + hi) / 2.0


def _smoothed_hist(values: np.ndarray, bins: int) -> np.ndarray:
    counts, _ = np.histogram(values, bins=bins, range=(0.0, 1.0))
    p = counts.astype(np.float64) / counts.sum()
    p = p + SMOOTHING
    return p / p.sum()


def rank_features(
    selected,
    universe,
    vectors: dict[str, np.ndarray],
    bins: int = 10,
) -> list[tuple[int, float]]:
    """Features sorted by cross entropy H(p_selected, p_rest), best first.

    Ties resolve to the lower feature index. The selection must be a proper
    nonempty subset of the universe so both distributions exist.
    """
    selected = list(selected)
    rest = [r for r in universe if r not in set(selected)]
    if not selected:
        raise ValueError("selection is empty")
    if not rest:
        raise ValueError("selection covers the whole universe, nothing to contrast")
    missing = [r for r in list(selected) + rest if r not in vectors]
    if missing:
        raise ValueError(f"unknown rule ids: {missing[:5]}")
    n_features = len(vectors[selected[0]]) // 2
    scores = []
    for f in range(n_features):
        p_sel = _smoothed_hist(_midpoints(selected, vectors, f), bins)
        p_rest = _smoothed_hist(_midpoints(rest, vectors, f), bins)
        scores.append((f, float(-np.sum(p_sel * np.log(p_rest)))))
    scores.sort(key=lambda fs: (-fs[1], fs[0]))
    return scores


def group_interval(ids, feature: int, vectors: dict[str, np.ndarray]) -> Interval | None:
    """Intersection of the group's normalized intervals; None when empty."""
    ids = list(ids)
    if not ids:
        raise ValueError("group is empty")
    lo = max(vectors[r][2 * feature] for r in ids)
    hi = min(vectors[r][2 * feature + 1] for r in ids)
    if lo > hi:
        return None
    return (float(lo), float(hi))


def intersect_intervals(a: Interval | None, b: Interval | None) -> Interval | None:
    if a is None or b is None:
        return None
    lo = max(a[0], b[0])
    hi = min(a[1], b[1])
    if lo > hi:
        return None
    return (lo, hi)


def difference_intervals(a: Interval | None, b: Interval | None) -> list[Interval]:
    """Symmetric difference as 0, 1 or 2 intervals (zero-length pieces dropped)."""
    if a is None and b is None:
        return []
    if a is None:
        return [b]
    if b is None:
        return [a]
    shared = intersect_intervals(a, b)
    if shared is None:
        return sorted([a, b])
    lo_all = min(a[0], b[0])
    hi_all = max(a[1], b[1])
    pieces = []
    if lo_all < shared[0]:
        pieces.append((lo_all, shared[0]))
    if hi_all > shared[1]:
        pieces.append((shared[1], hi_all))
    return pieces


def compare_groups(
    anchored,
    selected,
    vectors: dict[str, np.ndarray],
    mode: str = MODE_OVERLAP,
) -> list[list[Interval]]:
    """Per-feature overlap or symmetric difference of two groups' intervals."""
    if mode not in (MODE_OVERLAP, MODE_DIFFERENCE):
        raise ValueError(f"mode must be {MODE_OVERLAP!r} or {MODE_DIFFERENCE!r}")
    anchored = list(anchored)
    selected = list(selected)
    if not anchored or not selected:
        raise ValueError("both groups must be nonempty")
    n_features = len(vectors[anchored[0]]) // 2
    out: list[list[Interval]] = []
    for f in range(n_features):
        ia = group_interval(anchored, f, vectors)
        ib = group_interval(selected, f, vectors)
        if mode == MODE_OVERLAP:
            shared = intersect_intervals(ia, ib)
            out.append([] if shared is None else [shared])
        else:
            out.append(difference_intervals(ia, ib))
    return out


def build_report(req: ContrastRequest, vectors: dict[str, np.ndarray]) -> ContrastReport:
    """Ranked features plus group intervals, and a comparison when anchored."""
    ranked = rank_features(req.selected, req.universe, vectors, bins=req.bins)
    n_features = len(next(iter(vectors.values()))) // 2
    groups = {
        "selected": [group_interval(req.selected, f, vectors) for f in range(n_features)],
    }
    comparison = None
    if req.anchored:
        groups["anchored"] = [group_interval(req.anchored, f, vectors) for f in range(n_features)]
        comparison = compare_groups(req.anchored, req.selected, vectors, mode=req.mode)
    return ContrastReport(
        ranked_features=ranked,
        group_intervals=groups,
        comparison=comparison,
        bins=req.bins,
        mode=req.mode,
    )
