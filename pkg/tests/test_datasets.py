"""Loading, binning, splitting, folds."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rulescope.datasets import (
    Dataset,
    SplitSpec,
    _train_counts_per_class,
    bin_edges,
    discretize_target,
    load_csv,
    make_folds,
    normalize_value,
    observed_bounds,
    stratified_split,
)

# Frozen expectations for the bundled wellbeing table.
HAPPINESS_ROWS = 156
HAPPINESS_EDGES = (4.4917, 6.1303)
HAPPINESS_SIZES = (35, 79, 42)  # Level-1, Level-2, Level-3
HAPPINESS_TRAIN = (31, 71, 38)


def _toy(tmp_path, text, name="toy.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_happiness_shape(self, happiness_raw):
        assert happiness_raw.n_instances == HAPPINESS_ROWS
        assert happiness_raw.n_features == 6
        assert happiness_raw.labels is None
        assert happiness_raw.target_values is not None
        assert happiness_raw.feature_names[0] == "GDP per capita"

    def test_numeric_target_values(self, happiness_raw):
        tv = happiness_raw.target_values
        assert float(np.min(tv)) == pytest.approx(2.853)
        assert float(np.max(tv)) == pytest.approx(7.769)

    def test_categorical_target_first_appearance(self, tmp_path):
        p = _toy(tmp_path, "a,b,label\n1,2,yes\n3,4,no\n5,6,yes\n")
        ds = load_csv(p, "label")
        assert ds.class_names == ["yes", "no"]
        assert ds.labels.tolist() == [0, 1, 0]
        assert ds.target_values is None

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_csv(tmp_path / "nope.csv", "y")

    def test_missing_target_column(self, tmp_path):
        p = _toy(tmp_path, "a,b\n1,2\n")
        with pytest.raises(ValueError, match="target column"):
            load_csv(p, "y")

    def test_duplicate_header(self, tmp_path):
        p = _toy(tmp_path, "a,a,y\n1,2,0\n")
        with pytest.raises(ValueError, match="duplicate"):
            load_csv(p, "y")

    def test_bad_cell_reports_line(self, tmp_path):
        p = _toy(tmp_path, "a,y\n1,0\noops,1\n")
        with pytest.raises(ValueError, match=r"toy\.csv:3"):
            load_csv(p, "y")

    def test_non_finite_cell_rejected(self, tmp_path):
        p = _toy(tmp_path, "a,y\ninf,0\n")
        with pytest.raises(ValueError):
            load_csv(p, "y")

    def test_empty_file(self, tmp_path):
        p = _toy(tmp_path, "")
        with pytest.raises(ValueError, match="empty"):
            load_csv(p, "y")


class TestDiscretize:
    def test_happiness_edges(self, happiness_raw):
        edges = bin_edges(happiness_raw, 3)
        assert edges[0] == pytest.approx(HAPPINESS_EDGES[0], abs=5e-4)
        assert edges[1] == pytest.approx(HAPPINESS_EDGES[1], abs=5e-4)

    def test_happiness_class_sizes(self, happiness):
        assert happiness.class_names == ["Level-1", "Level-2", "Level-3"]
        assert tuple(happiness.class_counts().tolist()) == HAPPINESS_SIZES

    def test_edge_and_max_semantics(self):
        # edges at 1.0 and 2.0: interior edges go to the upper bin, the
        # global max is clipped into the top bin
        ds = Dataset(["x"], np.zeros((4, 1)), None, [], target_values=np.array([0.0, 1.0, 2.0, 3.0]))
        out = discretize_target(ds, 3)
        assert out.labels.tolist() == [0, 1, 2, 2]
        exact = discretize_target(
            Dataset(["x"], np.zeros((3, 1)), None, [], target_values=np.array([0.0, 1.5, 3.0])), 2
        )
        assert exact.labels.tolist() == [0, 1, 1]

    def test_constant_target_rejected(self):
        ds = Dataset(["x"], np.zeros((3, 1)), None, [], target_values=np.array([2.0, 2.0, 2.0]))
        with pytest.raises(ValueError, match="constant"):
            discretize_target(ds, 2)

    def test_bins_validation(self, happiness_raw):
        with pytest.raises(ValueError):
            discretize_target(happiness_raw, 1)

    def test_rebinning_discretized_target_allowed(self, happiness):
        again = discretize_target(happiness, 2)
        assert again.n_classes == 2

    def test_categorical_target_rejected(self, tmp_path):
        p = _toy(tmp_path, "a,label\n1,yes\n2,no\n")
        ds = load_csv(p, "label")
        with pytest.raises(ValueError, match="categorical"):
            discretize_target(ds, 2)


class TestNormalize:
    def test_midpoint(self):
        assert normalize_value(5.0, (0.0, 10.0)) == 0.5

    def test_degenerate_bounds(self):
        assert normalize_value(3.0, (3.0, 3.0)) == 0.5

    def test_clamp(self):
        assert normalize_value(20.0, (0.0, 10.0), clamp=True) == 1.0
        assert normalize_value(-5.0, (0.0, 10.0), clamp=True) == 0.0
        assert normalize_value(20.0, (0.0, 10.0), clamp=False) == 2.0

    def test_observed_bounds(self):
        X = np.array([[1.0, -2.0], [3.0, 0.0]])
        assert observed_bounds(X) == [(1.0, 3.0), (-2.0, 0.0)]


class TestTrainCounts:
    def test_happiness_apportioning(self):
        counts = np.array(HAPPINESS_SIZES)
        got = _train_counts_per_class(counts, 0.9)
        assert got.tolist() == list(HAPPINESS_TRAIN)
        assert got.sum() == 140

    def test_remainder_tie_goes_to_lower_class(self):
        # both classes have remainder 0.5; total quota floor(10*0.5+0.5)=5
        got = _train_counts_per_class(np.array([5, 5]), 0.5)
        assert got.tolist() == [3, 2]

    @given(
        counts=st.lists(st.integers(min_value=0, max_value=60), min_size=1, max_size=6),
        frac=st.floats(min_value=0.05, max_value=0.95),
    )
    @settings(max_examples=200, deadline=None)
    def test_apportioning_invariants(self, counts, frac):
        counts = np.array(counts)
        got = _train_counts_per_class(counts, frac)
        assert got.sum() == int(np.floor(counts.sum() * frac + 0.5))
        assert np.all(got >= 0)
        assert np.all(got <= counts)
        # per-class deviation from the exact fraction stays under one row
        assert np.all(np.abs(got - counts * frac) < 1.0)


class TestStratifiedSplit:
    def test_happiness_140_16(self, happiness_split):
        train, test = happiness_split
        assert train.n_instances == 140
        assert test.n_instances == 16
        assert tuple(train.class_counts().tolist()) == HAPPINESS_TRAIN

    def test_sides_disjoint_and_cover(self, happiness):
        train, test = stratified_split(happiness, SplitSpec(0.9, 7))
        joined = np.vstack([train.instances, test.instances])
        assert joined.shape[0] == happiness.n_instances
        # every original row appears exactly once across the two sides
        orig = happiness.instances[np.lexsort(happiness.instances.T)]
        got = joined[np.lexsort(joined.T)]
        assert np.array_equal(orig, got)

    def test_deterministic_per_seed(self, happiness):
        a1, b1 = stratified_split(happiness, SplitSpec(0.9, 3))
        a2, b2 = stratified_split(happiness, SplitSpec(0.9, 3))
        assert np.array_equal(a1.instances, a2.instances)
        assert np.array_equal(b1.labels, b2.labels)

    def test_needs_labels(self, happiness_raw):
        with pytest.raises(ValueError):
            stratified_split(happiness_raw, SplitSpec(0.9, 0))

    def test_tiny_class_rejected(self):
        ds = Dataset(
            ["x"], np.arange(5, dtype=float).reshape(-1, 1),
            np.array([0, 0, 0, 0, 1]), ["a", "b"],
        )
        with pytest.raises(ValueError, match="at least 2"):
            stratified_split(ds, SplitSpec(0.9, 0))

    def test_fraction_validation(self):
        with pytest.raises(ValueError):
            SplitSpec(train_fraction=1.0)
        with pytest.raises(ValueError):
            SplitSpec(train_fraction=0.0)


class TestMakeFolds:
    def test_happiness_fold_sizes(self, happiness_split):
        train, _ = happiness_split
        folds = make_folds(train, 3, seed=42)
        sizes = sorted(len(hold) for _, hold in folds)
        assert sizes == [46, 47, 47]

    def test_holdouts_partition_rows(self, happiness_split):
        train, _ = happiness_split
        folds = make_folds(train, 3, seed=1)
        seen = np.concatenate([hold for _, hold in folds])
        assert sorted(seen.tolist()) == list(range(train.n_instances))
        for fit, hold in folds:
            assert not set(fit.tolist()) & set(hold.tolist())
            assert len(fit) + len(hold) == train.n_instances

    def test_per_class_spread_at_most_one(self, happiness_split):
        train, _ = happiness_split
        folds = make_folds(train, 3, seed=9)
        for c in range(train.n_classes):
            members = np.nonzero(train.labels == c)[0]
            per_fold = [len(np.intersect1d(hold, members)) for _, hold in folds]
            assert max(per_fold) - min(per_fold) <= 1

    def test_too_many_folds_rejected(self, happiness_split):
        train, _ = happiness_split
        with pytest.raises(ValueError, match="smallest class"):
            make_folds(train, 99, seed=0)

    def test_folds_validation(self, happiness_split):
        train, _ = happiness_split
        with pytest.raises(ValueError):
            make_folds(train, 1, seed=0)
