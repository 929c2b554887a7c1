/** Payload shapes served by the rulescope HTTP API, mirrored field for field. */

export type Interval = [number, number];

export interface ModelMetrics {
  accuracy: number;
  precision_macro: number;
  recall_macro: number;
  overall_score: number;
  accuracy_pct: number;
  precision_pct: number;
  recall_pct: number;
  overall_pct: number;
  per_class_fp: number[];
  per_class_fn: number[];
}

export interface ModelRow {
  id: string;
  algorithm: "RF" | "AB";
  params: Record<string, number>;
  metrics: ModelMetrics;
  n_trees: number;
  n_rules: number;
  active: boolean;
}

export interface Transition {
  from_id: string;
  to_id: string;
  delta_fp: number[];
  delta_fn: number[];
}

export interface ModelsPayload {
  models: ModelRow[];
  active_ids: string[];
  class_names: string[];
  transitions: Transition[];
  fingerprint: string;
}

export interface ImportancePayload {
  feature_names: string[];
  active_mean: number[];
  all_mean: number[];
  delta: number[];
  display_order: number[];
  per_algorithm: Record<string, AlgorithmImportance>;
  fingerprint: string;
}

/** Five-number summary plus mean of one algorithm's per-tree importance,
 * each statistic an array over features. */
export interface AlgorithmImportance {
  min: number[];
  q1: number[];
  median: number[];
  q3: number[];
  max: number[];
  mean: number[];
}

export type RuleStatus = "visible" | "dimmed" | "hidden";

export interface RuleRow {
  rule_id: string;
  model_id: string;
  algorithm: string;
  predicted_class: number;
  predicted_class_name: string;
  intervals: Interval[];
  intervals_normalized: Interval[];
  support: number;
  impurity: number;
  class_counts: number[];
  status: RuleStatus;
}

export interface RuleFilter {
  min_support: number | null;
  max_support: number | null;
  max_impurity: number | null;
  test_instance: number | null;
  rounding_decimals: number;
}

export interface RulesPayload {
  rules: RuleRow[];
  counts: { total: number; visible: number; dimmed: number; hidden: number };
  support_histogram: { edges: number[]; counts: number[] };
  filter: RuleFilter;
  feature_names: string[];
  class_names: string[];
  fingerprint: string;
}

export interface EmbeddingPoint {
  rule_id: string;
  x: number;
  y: number;
  cluster_label: number;
  model_id: string;
  algorithm: string;
  predicted_class: number;
  predicted_class_name: string;
  support: number;
  impurity: number;
  status: RuleStatus;
}

export interface EmbeddingConfig {
  n_neighbors: number | null;
  min_dist: number;
  seed: number;
  dbscan_eps: number | null;
  dbscan_min_pts: number;
}

export interface EmbeddingPayload {
  points: EmbeddingPoint[];
  config: EmbeddingConfig;
  resolved: { eps: number; n_neighbors: number; n_clusters: number };
  class_names: string[];
  fingerprint: string;
}

export interface RankedFeature {
  feature: number;
  name: string;
  score: number;
}

export type ContrastMode = "overlap" | "difference";

export interface ContrastPayload {
  ranked_features: RankedFeature[];
  group_intervals: Record<string, (Interval | null)[]>;
  comparison: Interval[][] | null;
  bins: number;
  mode: ContrastMode;
  feature_names: string[];
  fingerprint: string;
}

export interface AgreementPayload {
  test_index: number;
  ground_truth: number;
  ground_truth_name: string;
  rf_votes: number[];
  ab_votes: number[];
  md_votes: number[];
  majority: number;
  majority_name: string;
  unanimous: boolean;
  conflict: boolean;
  fingerprint: string;
}

export interface ConflictsPayload {
  conflicts: number[];
  n_test: number;
  fingerprint: string;
}

export interface ExportedDecision {
  rule_id: string;
  model_id: string;
  algorithm: string;
  predicted_class: string;
  support: number;
  impurity: number;
  features: { name: string; min: number; max: number }[];
}

export interface ExportPayload {
  format: string;
  version: number;
  class_names: string[];
  decisions: ExportedDecision[];
}

export interface DatasetMeta {
  feature_names: string[];
  class_names: string[];
  n_train: number;
  n_test: number;
  n_features: number;
  n_folds: number;
  seed: number;
  source: { path: string; target: string; bins: number; train_fraction: number };
  train_bounds: Interval[];
  train_normalized: number[][];
  test_normalized: number[][];
  test_raw: number[][];
  train_labels: number[];
  test_labels: number[];
  fingerprint: string;
}

export interface SearchJob {
  job_id: string;
  algorithm: "RF" | "AB";
  status: "running" | "done" | "failed";
  progress: { done: number; total: number };
  model_ids: string[];
  failures: unknown[];
  error: string | null;
}

export interface ContrastRequestBody {
  selected: string[];
  anchored?: string[];
  universe?: string[];
  bins?: number;
  mode?: ContrastMode;
}

export interface SearchRequestBody {
  algorithm: "RF" | "AB";
  iterations?: number;
  constraints?: Record<string, [number, number]>;
  seed?: number;
}

export interface RuleQuery {
  min_support?: number;
  max_support?: number;
  max_impurity?: number;
  test_instance?: number;
  decimals?: number;
  clear?: boolean;
}
