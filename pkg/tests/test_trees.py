"""CART internals against brute-force oracles."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_split, gini_reference
from rulescope.trees import (
    DecisionTree,
    TreeParams,
    best_split,
    fit_tree,
    gini,
    leaf_assignments,
    predict,
    tree_from_dict,
    tree_to_dict,
)


class TestGini:
    def test_pure_is_zero(self):
        assert gini(np.array([5.0, 0.0])) == 0.0

    def test_even_binary_is_half(self):
        assert gini(np.array([3.0, 3.0])) == pytest.approx(0.5, abs=1e-15)

    def test_matches_reference_on_random_counts(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            c = rng.integers(1, 6)
            counts = rng.integers(0, 50, size=c).astype(float)
            if counts.sum() == 0:
                counts[0] = 1
            assert gini(counts) == pytest.approx(gini_reference(counts), abs=1e-12)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            gini(np.array([1.0, -1.0]))

    def test_rejects_empty_mass(self):
        with pytest.raises(ValueError):
            gini(np.array([0.0, 0.0]))


def _random_problem(rng, n_max=30, n_features=1, classes=3):
    n = int(rng.integers(2, n_max + 1))
    X = rng.integers(0, 8, size=(n, n_features)).astype(float)
    y = rng.integers(0, classes, size=n)
    return X, y


class TestBestSplitOracle:
    def test_exact_match_1d_200_datasets(self):
        rng = np.random.default_rng(7)
        rows_checked = 0
        for _ in range(200):
            X, y = _random_problem(rng, n_max=30, n_features=1)
            msl = int(rng.integers(1, 4))
            rows = np.arange(len(X))
            w = np.ones(len(X))
            got = best_split(X, y, rows, w, np.array([0]), msl, 3)
            want = brute_force_split(X, y, rows, w, [0], msl, 3)
            assert got == want
            rows_checked += 1
        assert rows_checked == 200

    def test_exact_match_multifeature(self):
        rng = np.random.default_rng(11)
        for _ in range(150):
            X, y = _random_problem(rng, n_max=20, n_features=3)
            msl = int(rng.integers(1, 3))
            rows = np.arange(len(X))
            w = np.ones(len(X))
            feats = np.arange(3)
            got = best_split(X, y, rows, w, feats, msl, 3)
            want = brute_force_split(X, y, rows, w, feats, msl, 3)
            assert got == want

    def test_exact_match_with_repeated_rows(self):
        # bagging passes multisets; the oracle sees the same multiset
        rng = np.random.default_rng(3)
        for _ in range(100):
            X, y = _random_problem(rng, n_max=15, n_features=2)
            rows = rng.integers(0, len(X), size=len(X) + 5)
            w = np.ones(len(rows))
            got = best_split(X, y, rows, w, np.arange(2), 2, 3)
            want = brute_force_split(X, y, rows, w, [0, 1], 2, 3)
            assert got == want

    def test_constant_feature_gives_none(self):
        X = np.ones((6, 1))
        y = np.array([0, 1, 0, 1, 0, 1])
        assert best_split(X, y, np.arange(6), np.ones(6), np.array([0]), 1, 2) is None

    def test_pure_node_gives_none(self):
        X = np.arange(6, dtype=float).reshape(-1, 1)
        y = np.zeros(6, dtype=int)
        assert best_split(X, y, np.arange(6), np.ones(6), np.array([0]), 1, 2) is None

    def test_threshold_is_midpoint(self):
        X = np.array([[1.0], [3.0]])
        y = np.array([0, 1])
        f, t, g = best_split(X, y, np.arange(2), np.ones(2), np.array([0]), 1, 2)
        assert (f, t) == (0, 2.0)
        assert g == pytest.approx(0.5, abs=1e-15)

    def test_tie_prefers_lower_feature(self):
        # identical columns: both features give the same gain
        X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        y = np.array([0, 0, 1, 1])
        f, t, _ = best_split(X, y, np.arange(4), np.ones(4), np.arange(2), 1, 2)
        assert f == 0
        assert t == 1.5

    def test_tie_prefers_lower_threshold(self):
        # symmetric labels: thresholds 0.5 and 2.5 give equal gain
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([1, 0, 0, 1])
        got = best_split(X, y, np.arange(4), np.ones(4), np.array([0]), 1, 2)
        want = brute_force_split(X, y, np.arange(4), np.ones(4), [0], 1, 2)
        assert got == want

    def test_min_samples_leaf_blocks_edges(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([1, 0, 0, 0])
        # msl=2 forbids the 1-vs-3 split at 0.5 that msl=1 would pick
        f1 = best_split(X, y, np.arange(4), np.ones(4), np.array([0]), 1, 2)
        f2 = best_split(X, y, np.arange(4), np.ones(4), np.array([0]), 2, 2)
        assert f1[1] == 0.5
        assert f2 is None or f2[1] != 0.5

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=120, deadline=None)
    def test_property_matches_oracle(self, seed):
        rng = np.random.default_rng(seed)
        X, y = _random_problem(rng, n_max=12, n_features=2, classes=2)
        rows = np.arange(len(X))
        w = np.ones(len(X))
        got = best_split(X, y, rows, w, np.arange(2), 1, 2)
        want = brute_force_split(X, y, rows, w, [0, 1], 1, 2)
        assert got == want


def _routed_leaf_sizes(tree: DecisionTree, X, rows):
    leaves = leaf_assignments(tree, X[rows])
    return np.bincount(leaves, minlength=len(tree.nodes))


class TestFitTree:
    def test_depth_limit(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(200, 4))
        y = rng.integers(0, 3, size=200)
        tree = fit_tree(X, y, TreeParams(max_depth=3), 3)
        assert tree.depth <= 3

    def test_min_samples_leaf_respected(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(120, 3))
        y = rng.integers(0, 2, size=120)
        tree = fit_tree(X, y, TreeParams(max_depth=8, min_samples_leaf=5), 2)
        sizes = _routed_leaf_sizes(tree, X, np.arange(len(X)))
        for i, node in enumerate(tree.nodes):
            if node.is_leaf:
                assert sizes[i] >= 5

    def test_leaf_counts_match_routing(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(80, 3))
        y = rng.integers(0, 3, size=80)
        tree = fit_tree(X, y, TreeParams(max_depth=6), 3)
        leaves = leaf_assignments(tree, X)
        for i, node in enumerate(tree.nodes):
            if not node.is_leaf:
                continue
            members = np.nonzero(leaves == i)[0]
            counts = np.bincount(y[members], minlength=3).astype(float)
            assert np.array_equal(node.class_counts, counts)

    def test_prediction_is_argmax_lowest_index(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(60, 2))
        y = rng.integers(0, 3, size=60)
        tree = fit_tree(X, y, TreeParams(max_depth=4), 3)
        for node in tree.nodes:
            if node.is_leaf:
                c = node.class_counts
                assert node.prediction == int(np.argmax(c))

    def test_predict_agrees_with_manual_walk(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(100, 3))
        y = rng.integers(0, 2, size=100)
        tree = fit_tree(X, y, TreeParams(max_depth=5), 2)
        for x in X[:25]:
            i = 0
            while not tree.nodes[i].is_leaf:
                nd = tree.nodes[i]
                i = nd.left if x[nd.feature] <= nd.threshold else nd.right
            cls, leaf = predict(tree, x)
            assert leaf == i
            assert cls == tree.nodes[i].prediction

    def test_pure_data_is_single_leaf(self):
        X = np.arange(10, dtype=float).reshape(-1, 1)
        y = np.ones(10, dtype=int)
        tree = fit_tree(X, y, TreeParams(max_depth=5), 2)
        assert len(tree.nodes) == 1
        assert tree.nodes[0].prediction == 1

    def test_seed_reproduces_tree(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(100, 5))
        y = rng.integers(0, 3, size=100)
        p = TreeParams(max_depth=6, max_features=2, seed=17)
        t1 = fit_tree(X, y, p, 3, rng=np.random.default_rng(17))
        t2 = fit_tree(X, y, p, 3, rng=np.random.default_rng(17))
        assert tree_to_dict(t1) == tree_to_dict(t2)

    def test_weighted_fit_prediction_uses_weights(self):
        # two rows, class 1 carries four times the weight
        X = np.array([[0.0], [0.0]])
        y = np.array([0, 1])
        tree = fit_tree(X, y, TreeParams(max_depth=2), 2,
                        rows=np.array([0, 1]), weights=np.array([1.0, 4.0]))
        assert len(tree.nodes) == 1
        assert tree.nodes[0].prediction == 1

    def test_bootstrap_multiset_counts_entries(self):
        # min_samples_leaf counts row entries, so a repeated row satisfies it
        X = np.array([[0.0], [1.0]])
        y = np.array([0, 1])
        rows = np.array([0, 0, 0, 1, 1, 1])
        tree = fit_tree(X, y, TreeParams(max_depth=2, min_samples_leaf=3), 2, rows=rows)
        assert len(tree.nodes) == 3

    def test_max_features_validation(self):
        X = np.zeros((4, 2))
        y = np.array([0, 1, 0, 1])
        with pytest.raises(ValueError, match="max_features"):
            fit_tree(X, y, TreeParams(max_features=5), 2)

    def test_round_trip_serialization(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(50, 3))
        y = rng.integers(0, 2, size=50)
        tree = fit_tree(X, y, TreeParams(max_depth=4, min_samples_leaf=2), 2)
        clone = tree_from_dict(tree_to_dict(tree))
        assert tree_to_dict(clone) == tree_to_dict(tree)
        for x in X[:10]:
            assert predict(clone, x) == predict(tree, x)
