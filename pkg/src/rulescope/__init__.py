"""rulescope: interval-rule extraction and analysis for tree ensembles.

Trains bagged and boosted CART ensembles on tabular data, turns every
root-to-leaf path into an interval rule over the input features, and offers
evaluation, rule-space embedding, contrastive feature ranking, per-instance
agreement analysis, hyperparameter search, a JSON HTTP service and a CLI on
top of that rule pool.
"""

__version__ = "0.1.0"

from .datasets import Dataset, SplitSpec, discretize_target, load_csv, make_folds, stratified_split
from .trees import DecisionTree, TreeParams, best_split, fit_tree, gini, predict
from .ensembles import (
    ALGO_AB,
    ALGO_RF,
    AbParams,
    RfParams,
    TrainedModel,
    fit_ab,
    fit_rf,
    predict_ab,
    predict_model,
    predict_rf,
)
from .evaluation import ModelMetrics, confusion_transitions, evaluate_cv, sort_models
from .rules import DecisionRule, RuleFilter, apply_filter, extract_rules, round_rule, rule_matches
from .rulespace import EmbeddedPoint, EmbeddingConfig, RuleVector, dbscan, embed, tune_neighbors, vectorize
from .contrast import ContrastReport, ContrastRequest, compare_groups, group_interval, rank_features
from .importance import ImportanceTable, aggregate_importance, model_importance
from .search import SearchRequest, SearchSpace, default_space, run_search, sample_params
from .session import Session, build_session

__all__ = [name for name in dir() if not name.startswith("_")]
