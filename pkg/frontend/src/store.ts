/** Session store shared by all panels.
 *
 * Holds the latest payload per endpoint plus the purely local selection
 * state (lasso set, anchored set, contrast controls). Mutations go through
 * the API and then re-fetch every payload the change can move, so panels
 * always render one consistent server view; the session fingerprint carried
 * by each payload is surfaced for display and for staleness checks.
 */

import type { ApiClient } from "./api.js";
import type {
  AgreementPayload,
  ConflictsPayload,
  ContrastMode,
  ContrastPayload,
  ContrastRequestBody,
  DatasetMeta,
  EmbeddingConfig,
  EmbeddingPayload,
  ExportPayload,
  ImportancePayload,
  ModelsPayload,
  RuleQuery,
  RulesPayload,
  SearchJob,
  SearchRequestBody,
} from "./types.js";

export type Topic =
  | "meta"
  | "models"
  | "importance"
  | "rules"
  | "embedding"
  | "agreement"
  | "conflicts"
  | "contrast"
  | "selection"
  | "fingerprint";

type FilterName = "min_support" | "max_support" | "max_impurity" | "test_instance";

const FILTER_NAMES: FilterName[] = [
  "min_support",
  "max_support",
  "max_impurity",
  "test_instance",
];

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class Store {
  meta!: DatasetMeta;
  models!: ModelsPayload;
  importance!: ImportancePayload;
  rules!: RulesPayload;
  embedding!: EmbeddingPayload;
  agreement!: AgreementPayload;
  conflicts!: ConflictsPayload;
  contrast: ContrastPayload | null = null;

  selection: string[] = [];
  anchored: string[] = [];
  bins = 10;
  mode: ContrastMode = "overlap";

  fingerprint = "";
  pollIntervalMs = 400;

  private listeners = new Map<Topic, Set<() => void>>();

  constructor(readonly api: ApiClient) {}

  subscribe(topic: Topic, listener: () => void): () => void {
    let set = this.listeners.get(topic);
    if (!set) {
      set = new Set();
      this.listeners.set(topic, set);
    }
    set.add(listener);
    return () => set.delete(listener);
  }

  private notify(topic: Topic): void {
    for (const listener of this.listeners.get(topic) ?? []) listener();
  }

  private adopt(fingerprint: string | undefined): void {
    if (fingerprint && fingerprint !== this.fingerprint) {
      this.fingerprint = fingerprint;
      this.notify("fingerprint");
    }
  }

  async init(): Promise<void> {
    const [meta, models, importance, rules, embedding, conflicts, agreement] =
      await Promise.all([
        this.api.datasetMeta(),
        this.api.models(),
        this.api.importance(),
        this.api.rules(),
        this.api.embedding(),
        this.api.conflicts(),
        this.api.agreement(0),
      ]);
    this.meta = meta;
    this.models = models;
    this.importance = importance;
    this.rules = rules;
    this.embedding = embedding;
    this.conflicts = conflicts;
    this.agreement = agreement;
    this.adopt(models.fingerprint);
    for (const topic of [
      "meta",
      "models",
      "importance",
      "rules",
      "embedding",
      "conflicts",
      "agreement",
    ] as Topic[]) {
      this.notify(topic);
    }
  }

  async refresh(...topics: Exclude<Topic, "selection" | "contrast" | "fingerprint">[]): Promise<void> {
    await Promise.all(topics.map((topic) => this.load(topic)));
  }

  private async load(topic: Topic): Promise<void> {
    switch (topic) {
      case "meta":
        this.meta = await this.api.datasetMeta();
        this.adopt(this.meta.fingerprint);
        break;
      case "models":
        this.models = await this.api.models();
        this.adopt(this.models.fingerprint);
        break;
      case "importance":
        this.importance = await this.api.importance();
        this.adopt(this.importance.fingerprint);
        break;
      case "rules":
        this.rules = await this.api.rules();
        this.adopt(this.rules.fingerprint);
        break;
      case "embedding":
        this.embedding = await this.api.embedding();
        this.adopt(this.embedding.fingerprint);
        break;
      case "agreement":
        this.agreement = await this.api.agreement(this.agreement?.test_index ?? 0);
        this.adopt(this.agreement.fingerprint);
        break;
      case "conflicts":
        this.conflicts = await this.api.conflicts();
        this.adopt(this.conflicts.fingerprint);
        break;
      default:
        return;
    }
    this.notify(topic);
  }

  /** Activation toggle: the active set drives importance, rules, and the
   * embedding, so all three re-fetch after the POST. */
  async setActive(ids: string[]): Promise<void> {
    this.models = await this.api.setActive(ids);
    this.adopt(this.models.fingerprint);
    this.notify("models");
    await this.refresh("importance", "rules", "embedding");
  }

  /** Merge a filter change into the server's sticky filter state. Passing
   * null clears a filter, which the API only supports via clear=true plus a
   * re-send of everything that should survive. */
  async updateFilters(patch: Partial<Record<FilterName, number | null>>): Promise<void> {
    const current = this.rules.filter;
    const target: Record<FilterName, number | null> = {
      min_support: patch.min_support !== undefined ? patch.min_support : current.min_support,
      max_support: patch.max_support !== undefined ? patch.max_support : current.max_support,
      max_impurity: patch.max_impurity !== undefined ? patch.max_impurity : current.max_impurity,
      test_instance:
        patch.test_instance !== undefined ? patch.test_instance : current.test_instance,
    };
    const clearing = FILTER_NAMES.some(
      (name) => target[name] === null && current[name] !== null,
    );
    const query: RuleQuery = {};
    if (clearing) query.clear = true;
    for (const name of FILTER_NAMES) {
      const value = target[name];
      if (value !== null && (clearing || value !== current[name])) {
        query[name] = value;
      }
    }
    this.rules = await this.api.rules(query);
    this.adopt(this.rules.fingerprint);
    this.notify("rules");
    await this.refresh("embedding");
  }

  async setDecimals(decimals: number): Promise<void> {
    this.rules = await this.api.rules({ decimals });
    this.adopt(this.rules.fingerprint);
    this.notify("rules");
  }

  async setEmbeddingConfig(config: Partial<EmbeddingConfig>): Promise<void> {
    this.embedding = await this.api.setEmbeddingConfig(config);
    this.adopt(this.embedding.fingerprint);
    this.notify("embedding");
  }

  async gotoInstance(testIndex: number): Promise<void> {
    this.agreement = await this.api.agreement(testIndex);
    this.adopt(this.agreement.fingerprint);
    this.notify("agreement");
  }

  /** A completed lasso issues exactly one contrast request carrying the
   * lassoed rule ids (plus the anchored set in comparison mode). */
  async lasso(ruleIds: string[]): Promise<void> {
    this.selection = [...ruleIds];
    this.notify("selection");
    if (this.selection.length === 0) {
      this.contrast = null;
      this.notify("contrast");
      return;
    }
    await this.requestContrast();
  }

  private async requestContrast(): Promise<void> {
    const body: ContrastRequestBody = {
      selected: [...this.selection],
      bins: this.bins,
      mode: this.mode,
    };
    if (this.anchored.length > 0) body.anchored = [...this.anchored];
    this.contrast = await this.api.contrast(body);
    this.adopt(this.contrast.fingerprint);
    this.notify("contrast");
  }

  async setBins(bins: number): Promise<void> {
    this.bins = bins;
    if (this.selection.length > 0) await this.requestContrast();
  }

  async setMode(mode: ContrastMode): Promise<void> {
    this.mode = mode;
    if (this.selection.length > 0) await this.requestContrast();
  }

  anchorSelection(): void {
    if (this.selection.length === 0) return;
    this.anchored = [...this.selection];
    this.notify("selection");
  }

  detachAnchor(): void {
    this.anchored = [];
    this.notify("selection");
  }

  /** Export the current selection; returns the parsed document and the
   * exact response text for download. Registering manual decisions moves
   * the agreement view, so both vote payloads re-fetch. */
  async exportSelection(): Promise<{ doc: ExportPayload; text: string }> {
    const result = await this.api.exportDecisions([...this.selection]);
    await this.refresh("agreement", "conflicts");
    return result;
  }

  async runSearch(
    body: SearchRequestBody,
    onProgress?: (job: SearchJob) => void,
  ): Promise<SearchJob> {
    const { job_id } = await this.api.startSearch(body);
    let job = await this.api.searchJob(job_id);
    onProgress?.(job);
    while (job.status === "running") {
      await sleep(this.pollIntervalMs);
      job = await this.api.searchJob(job_id);
      onProgress?.(job);
    }
    if (job.status === "done") {
      await this.refresh("models", "importance", "rules", "embedding");
    }
    return job;
  }
}
