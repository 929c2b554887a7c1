"""Random hyperparameter search: spaces, sampling, and batch evaluation."""

import numpy as np
import pytest

from rulescope.datasets import Dataset, make_folds
from rulescope.ensembles import ALGO_AB, ALGO_RF, AbParams, RfParams, model_to_dict
from rulescope.search import (
    SearchRequest,
    SearchSpace,
    constrain_space,
    default_space,
    run_search,
    sample_params,
)


def _separable_problem(seed=0):
    """A tiny two-class problem every candidate can fit."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.0, 1.0, size=(60, 3))
    y = (X[:, 0] > 0.5).astype(np.int64)
    ds = Dataset(["a", "b", "c"], X, y, ["lo", "hi"])
    folds = make_folds(ds, 2, seed=seed)
    return X, y, folds


class TestSearchSpace:
    def test_defaults(self):
        space = SearchSpace()
        assert space.n_estimators == (2, 20)
        assert space.max_depth == (10, 25)
        assert space.min_samples_leaf == (1, 10)
        assert space.max_features is None
        assert space.learning_rate == (0.1, 0.4)

    @pytest.mark.parametrize("kwargs", [
        {"n_estimators": (5, 2)},
        {"max_depth": (25, 10)},
        {"min_samples_leaf": (9, 3)},
        {"max_features": (4, 1)},
        {"learning_rate": (0.4, 0.1)},
    ])
    def test_empty_ranges_rejected(self, kwargs):
        with pytest.raises(ValueError, match="empty range"):
            SearchSpace(**kwargs)

    def test_lower_bounds_enforced(self):
        with pytest.raises(ValueError, match="n_estimators"):
            SearchSpace(n_estimators=(0, 5))
        with pytest.raises(ValueError, match="min_samples_leaf"):
            SearchSpace(min_samples_leaf=(0, 5))
        with pytest.raises(ValueError, match="learning_rate"):
            SearchSpace(learning_rate=(0.0, 0.4))


class TestDefaultSpace:
    @pytest.mark.parametrize("n, expected", [
        (1, (1, 1)),
        (2, (1, 1)),   # ceil(sqrt(2)) = 2 collapses onto hi = 1
        (3, (2, 2)),
        (4, (2, 3)),
        (6, (3, 5)),   # the wellbeing survey width
        (16, (4, 15)),
        (100, (10, 99)),
    ])
    def test_feature_subset_range(self, n, expected):
        assert default_space(n).max_features == expected

    def test_other_ranges_untouched(self):
        space = default_space(6)
        base = SearchSpace()
        assert space.n_estimators == base.n_estimators
        assert space.max_depth == base.max_depth
        assert space.min_samples_leaf == base.min_samples_leaf
        assert space.learning_rate == base.learning_rate

    def test_needs_a_feature(self):
        with pytest.raises(ValueError, match="at least one feature"):
            default_space(0)


class TestConstrainSpace:
    def test_narrows_named_ranges(self):
        space = constrain_space(default_space(6), {
            "n_estimators": (5, 10),
            "max_depth": (12, 20),
            "max_features": (3, 4),
        })
        assert space.n_estimators == (5, 10)
        assert space.max_depth == (12, 20)
        assert space.max_features == (3, 4)
        assert space.min_samples_leaf == (1, 10)

    def test_casts_to_the_range_type(self):
        space = constrain_space(default_space(6), {
            "max_depth": (12.0, 20.0),  # floats in, ints out
            "learning_rate": (0.2, 0.3),
        })
        assert space.max_depth == (12, 20)
        assert all(isinstance(v, int) for v in space.max_depth)
        assert space.learning_rate == (0.2, 0.3)
        assert all(isinstance(v, float) for v in space.learning_rate)

    def test_unknown_parameter(self):
        with pytest.raises(ValueError, match="unknown search parameter"):
            constrain_space(default_space(6), {"depth": (12, 20)})

    def test_empty_constraint(self):
        with pytest.raises(ValueError, match="empty constraint"):
            constrain_space(default_space(6), {"max_depth": (20, 12)})

    def test_must_stay_inside_the_legal_range(self):
        with pytest.raises(ValueError, match="exceeds the legal range"):
            constrain_space(default_space(6), {"max_depth": (3, 5)})
        with pytest.raises(ValueError, match="exceeds the legal range"):
            constrain_space(default_space(6), {"max_depth": (12, 30)})

    def test_unset_range_is_not_constrainable(self):
        with pytest.raises(ValueError, match="not applicable"):
            constrain_space(SearchSpace(), {"max_features": (1, 2)})

    def test_original_space_is_untouched(self):
        base = default_space(6)
        constrain_space(base, {"max_depth": (12, 20)})
        assert base.max_depth == (10, 25)


class TestSearchRequest:
    def test_unknown_algorithm(self):
        with pytest.raises(ValueError, match="unknown algorithm"):
            SearchRequest(algorithm="GBM", space=default_space(6))

    def test_iterations_floor(self):
        with pytest.raises(ValueError, match="iterations"):
            SearchRequest(algorithm=ALGO_AB, iterations=0)

    def test_bagging_needs_a_feature_range(self):
        with pytest.raises(ValueError, match="max_features"):
            SearchRequest(algorithm=ALGO_RF)

    def test_boosting_does_not(self):
        SearchRequest(algorithm=ALGO_AB)  # no raise


def _assert_within(params, space, algorithm):
    assert space.n_estimators[0] <= params.n_estimators <= space.n_estimators[1]
    assert space.max_depth[0] <= params.max_depth <= space.max_depth[1]
    assert space.min_samples_leaf[0] <= params.min_samples_leaf <= space.min_samples_leaf[1]
    assert 0 <= params.seed < 2**31 - 1
    if algorithm == ALGO_RF:
        assert isinstance(params, RfParams)
        assert space.max_features[0] <= params.max_features <= space.max_features[1]
    else:
        assert isinstance(params, AbParams)
        assert space.learning_rate[0] <= params.learning_rate <= space.learning_rate[1]


class TestSampleParams:
    CONSTRAINT_SETS = [
        {},
        {"n_estimators": (4, 4)},
        {"max_depth": (12, 14), "min_samples_leaf": (2, 6)},
        {"n_estimators": (10, 20), "max_features": (3, 4)},
        {"learning_rate": (0.2, 0.3)},
    ]

    @pytest.mark.parametrize("algorithm", [ALGO_RF, ALGO_AB])
    @pytest.mark.parametrize("limits", CONSTRAINT_SETS)
    def test_containment_100_candidates(self, algorithm, limits):
        if algorithm == ALGO_AB and "max_features" in limits:
            pytest.skip("feature subsets are a bagging knob")
        space = constrain_space(default_space(6), limits)
        rng = np.random.default_rng(7)
        for _ in range(100):
            _assert_within(sample_params(space, algorithm, rng), space, algorithm)

    def test_degenerate_ranges_pin_the_value(self):
        space = constrain_space(default_space(6), {
            "n_estimators": (7, 7),
            "max_depth": (13, 13),
            "min_samples_leaf": (4, 4),
            "max_features": (5, 5),
        })
        rng = np.random.default_rng(0)
        for _ in range(20):
            params = sample_params(space, ALGO_RF, rng)
            assert (params.n_estimators, params.max_depth) == (7, 13)
            assert (params.min_samples_leaf, params.max_features) == (4, 5)

    def test_same_rng_state_same_draws(self):
        space = default_space(6)
        a = [sample_params(space, ALGO_AB, np.random.default_rng(3)) for _ in range(1)]
        b = [sample_params(space, ALGO_AB, np.random.default_rng(3)) for _ in range(1)]
        assert a == b

    def test_unknown_algorithm(self):
        with pytest.raises(ValueError, match="unknown algorithm"):
            sample_params(default_space(6), "XG", np.random.default_rng(0))

    def test_bagging_requires_feature_range(self):
        with pytest.raises(ValueError, match="max_features"):
            sample_params(SearchSpace(), ALGO_RF, np.random.default_rng(0))


class TestRunSearch:
    def test_identical_seeds_identical_model_sets(self):
        X, y, folds = _separable_problem()
        request = SearchRequest(algorithm=ALGO_RF, iterations=6,
                                space=default_space(3), seed=11)
        first, _ = run_search(X, y, 2, folds, request)
        second, _ = run_search(X, y, 2, folds, request)
        assert len(first) == len(second) == 6
        for a, b in zip(first, second):
            assert model_to_dict(a) == model_to_dict(b)

    def test_different_seeds_differ(self):
        X, y, folds = _separable_problem()
        space = default_space(3)
        one, _ = run_search(X, y, 2, folds,
                            SearchRequest(algorithm=ALGO_AB, iterations=5,
                                          space=space, seed=1))
        two, _ = run_search(X, y, 2, folds,
                            SearchRequest(algorithm=ALGO_AB, iterations=5,
                                          space=space, seed=2))
        assert [model_to_dict(m) for m in one] != [model_to_dict(m) for m in two]

    def test_batch_is_sorted_worst_to_best(self):
        X, y, folds = _separable_problem(seed=5)
        request = SearchRequest(algorithm=ALGO_RF, iterations=8,
                                space=default_space(3), seed=4)
        models, _ = run_search(X, y, 2, folds, request)
        scores = [m.metrics.overall_score for m in models]
        assert scores == sorted(scores)

    def test_metrics_attached_and_algorithm_stamped(self):
        X, y, folds = _separable_problem()
        request = SearchRequest(algorithm=ALGO_AB, iterations=3,
                                space=default_space(3), seed=9)
        models, failures = run_search(X, y, 2, folds, request)
        assert failures == []
        for model in models:
            assert model.algorithm == ALGO_AB
            assert model.metrics is not None
            assert 0.0 <= model.metrics.overall_score <= 1.0

    def test_candidate_containment_survives_the_run(self):
        X, y, folds = _separable_problem()
        space = constrain_space(default_space(3), {
            "n_estimators": (3, 5), "max_depth": (11, 12),
        })
        request = SearchRequest(algorithm=ALGO_RF, iterations=6,
                                space=space, seed=2)
        models, _ = run_search(X, y, 2, folds, request)
        for model in models:
            assert 3 <= model.params.n_estimators <= 5
            assert 11 <= model.params.max_depth <= 12
            assert len(model.trees) == model.params.n_estimators

    def test_partial_failures_are_collected(self):
        # Ten separable rows, five per class. A leaf floor of five or less
        # admits the perfect 5/5 split; anything higher forces a root leaf,
        # whose weighted error is exactly 1/2, and boosting gives up. The
        # floor is drawn from (1, 10) so a batch mixes both outcomes.
        X = np.arange(10, dtype=np.float64).reshape(-1, 1)
        y = np.array([0] * 5 + [1] * 5, dtype=np.int64)
        folds = [(np.arange(10), np.arange(10))]
        request = SearchRequest(algorithm=ALGO_AB, iterations=12, seed=0)
        models, failures = run_search(X, y, 2, folds, request)
        assert len(models) + len(failures) == 12
        assert models and failures
        for failure in failures:
            assert set(failure) == {"candidate", "params", "error"}
            assert "weak learner" in failure["error"]

    def test_all_failures_raise(self):
        X = np.zeros((8, 2))
        y = np.array([0, 1] * 4, dtype=np.int64)
        folds = [(np.arange(8), np.arange(8))]
        request = SearchRequest(algorithm=ALGO_AB, iterations=4, seed=0)
        with pytest.raises(ValueError, match="all 4 search candidates failed"):
            run_search(X, y, 2, folds, request)

    def test_progress_callback_counts_up(self):
        X, y, folds = _separable_problem()
        seen = []
        request = SearchRequest(algorithm=ALGO_RF, iterations=4,
                                space=default_space(3), seed=3)
        run_search(X, y, 2, folds, request,
                   progress=lambda done, total: seen.append((done, total)))
        assert seen == [(1, 4), (2, 4), (3, 4), (4, 4)]
