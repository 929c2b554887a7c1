"""Interval rules: one per leaf per tree, plus display rounding and filtering.

A rule is the conjunction of the half-space constraints along a
root-to-leaf path, expressed as one closed interval per feature. Features
the path never tests keep the full observed training range, so every rule
is a complete axis-aligned box and matching is a simple containment test.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext

import numpy as np

from .datasets import Dataset
from .ensembles import TrainedModel
from .trees import DecisionTree, leaf_assignments

STATUS_VISIBLE = "visible"
STATUS_DIMMED = "dimmed"
STATUS_HIDDEN = "hidden"

MAX_ROUND_DECIMALS = 15


@dataclass
class DecisionRule:
    rule_id: str                    # "<model_id>:<tree_index>:<leaf_index>"
    model_id: str
    algorithm: str
    tree_index: int
    leaf_index: int
    predicted_class: int
    intervals: list[tuple[float, float]]   # closed [lo, hi] per feature
    support: int                    # training instances routed to the leaf
    covered_instances: list[int]    # their row indices in the training set
    class_counts: list[int]         # unweighted class counts of the covered rows
    impurity: float                 # Gini impurity of those counts


@dataclass(frozen=True)
class RuleFilter:
    min_support: int | None = None
    max_support: int | None = None
    max_impurity: float | None = None
    test_instance: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.min_support is not None and self.min_support < 0:
            raise ValueError("min_support must be non-negative")
        if (
            self.min_support is not None
            and self.max_support is not None
            and self.max_support < self.min_support
        ):
            raise ValueError("max_support must be >= min_support")
        if self.max_impurity is not None and self.max_impurity < 0:
            raise ValueError("max_impurity must be non-negative")


def _tree_paths(tree: DecisionTree, bounds: list[tuple[float, float]]) -> dict[int, list[tuple[float, float]]]:
    """Map leaf index -> interval box accumulated along its path."""
    out: dict[int, list[tuple[float, float]]] = {}

    def walk(idx: int, lo: list[float], hi: list[float]) -> None:
        node = tree.nodes[idx]
        if node.is_leaf:
            out[idx] = list(zip(lo, hi))
            return
        f, t = node.feature, node.threshold
        left_hi = hi.copy()
        left_hi[f] = min(left_hi[f], t)
        walk(node.left, lo, left_hi)
        right_lo = lo.copy()
        right_lo[f] = max(right_lo[f], t)
        walk(node.right, right_lo, hi)

    walk(0, [b[0] for b in bounds], [b[1] for b in bounds])
    return out


def _counts_gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts / total
    return float(np.sum(p * (1.0 - p)))


def extract_rules(model: TrainedModel, train: Dataset) -> list[DecisionRule]:
    """Every leaf of every tree as a rule, ordered by (tree, leaf index).

    Support and class counts come from routing the full training set through
    the tree (unweighted), so they are comparable across bagged and boosted
    models regardless of how each tree was fit.
    """
    if train.labels is None:
        raise ValueError("training dataset has no class labels")
    rules: list[DecisionRule] = []
    for t_idx, tree in enumerate(model.trees):
        boxes = _tree_paths(tree, train.feature_bounds)
        routed = leaf_assignments(tree, train.instances)
        for leaf_idx in sorted(boxes):
            member_rows = np.nonzero(routed == leaf_idx)[0]
            counts = np.bincount(train.labels[member_rows], minlength=train.n_classes)
            rules.append(DecisionRule(
                rule_id=f"{model.model_id}:{t_idx}:{leaf_idx}",
                model_id=model.model_id,
                algorithm=model.algorithm,
                tree_index=t_idx,
                leaf_index=leaf_idx,
                predicted_class=tree.nodes[leaf_idx].prediction,
                intervals=boxes[leaf_idx],
                support=int(len(member_rows)),
                covered_instances=member_rows.tolist(),
                class_counts=counts.tolist(),
                impurity=_counts_gini(counts),
            ))
    return rules


def _directed_round(x: float, decimals: int, up: bool) -> float:
    """Round to a decimal grid point, never crossing x in the shrink direction.

    Operates on repr(x), the shortest decimal string that round-trips to x.
    A float already produced by this function re-parses to a grid decimal,
    so quantizing it again is the identity; that makes the operation
    idempotent without any tolerance tricks.
    """
    x = float(x)
    if not np.isfinite(x):
        return x
    exp = Decimal(1).scaleb(-decimals)
    rounding = ROUND_CEILING if up else ROUND_FLOOR
    with localcontext() as ctx:
        ctx.prec = 400  # covers the full float64 range at any grid
        return float(Decimal(repr(x)).quantize(exp, rounding=rounding))


def round_rule(rule: DecisionRule, decimals: int) -> DecisionRule:
    """Widen every interval outward onto a decimal grid.

    Lower bounds round down and upper bounds round up, so the rounded rule
    matches a superset of what the exact rule matches. decimals beyond
    15 leave the rule unchanged.
    """
    if decimals < 0:
        raise ValueError("decimals must be non-negative")
    if decimals > MAX_ROUND_DECIMALS:
        return replace(rule, intervals=list(rule.intervals))
    rounded = [
        (_directed_round(lo, decimals, up=False), _directed_round(hi, decimals, up=True))
        for lo, hi in rule.intervals
    ]
    return replace(rule, intervals=rounded)


def rule_matches(rule: DecisionRule, x: np.ndarray) -> bool:
    """Closed-interval containment over every feature."""
    for f, (lo, hi) in enumerate(rule.intervals):
        v = x[f]
        if v < lo or v > hi:
            return False
    return True


def apply_filter(rules: list[DecisionRule], flt: RuleFilter) -> dict[str, str]:
    """Status per rule id: hidden by support bounds or test-instance mismatch,
    dimmed above the impurity cap, visible otherwise."""
    statuses: dict[str, str] = {}
    for rule in rules:
        if flt.min_support is not None and rule.support < flt.min_support:
            statuses[rule.rule_id] = STATUS_HIDDEN
            continue
        if flt.max_support is not None and rule.support > flt.max_support:
            statuses[rule.rule_id] = STATUS_HIDDEN
            continue
        if flt.test_instance is not None and not rule_matches(rule, flt.test_instance):
            statuses[rule.rule_id] = STATUS_HIDDEN
            continue
        if flt.max_impurity is not None and rule.impurity > flt.max_impurity:
            statuses[rule.rule_id] = STATUS_DIMMED
            continue
        statuses[rule.rule_id] = STATUS_VISIBLE
    return statuses


def rule_to_dict(rule: DecisionRule) -> dict:
    return {
        "rule_id": rule.rule_id,
        "model_id": rule.model_id,
        "algorithm": rule.algorithm,
        "tree_index": rule.tree_index,
        "leaf_index": rule.leaf_index,
        "predicted_class": rule.predicted_class,
        "intervals": [[float(lo), float(hi)] for lo, hi in rule.intervals],
        "support": rule.support,
        "covered_instances": list(rule.covered_instances),
        "class_counts": list(rule.class_counts),
        "impurity": rule.impurity,
    }


def rule_from_dict(doc: dict) -> DecisionRule:
    return DecisionRule(
        rule_id=doc["rule_id"],
        model_id=doc["model_id"],
        algorithm=doc["algorithm"],
        tree_index=int(doc["tree_index"]),
        leaf_index=int(doc["leaf_index"]),
        predicted_class=int(doc["predicted_class"]),
        intervals=[(float(lo), float(hi)) for lo, hi in doc["intervals"]],
        support=int(doc["support"]),
        covered_instances=[int(i) for i in doc["covered_instances"]],
        class_counts=[int(c) for c in doc["class_counts"]],
        impurity=float(doc["impurity"]),
    )
