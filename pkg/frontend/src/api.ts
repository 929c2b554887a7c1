/** Thin typed client for the rulescope HTTP API.
 *
 * Every method maps onto exactly one endpoint and returns the parsed body.
 * The raw response text is preserved where byte fidelity matters (export
 * documents are downloaded exactly as the server sent them).
 */

import type {
  AgreementPayload,
  ConflictsPayload,
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

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<string> {
    const resp = await this.fetchFn(this.base + path, init);
    const text = await resp.text();
    if (!resp.ok) {
      let code = "http_error";
      let message = text || resp.statusText;
      try {
        const body = JSON.parse(text);
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        // non-JSON error body, keep the raw text
      }
      throw new ApiError(resp.status, code, message);
    }
    return text;
  }

  private async get<T>(path: string): Promise<T> {
    return JSON.parse(await this.request(path)) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    return JSON.parse(await this.postText(path, body)) as T;
  }

  private postText(path: string, body: unknown): Promise<string> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  models(): Promise<ModelsPayload> {
    return this.get("/models");
  }

  setActive(ids: string[]): Promise<ModelsPayload> {
    return this.post("/models/active", { ids });
  }

  importance(): Promise<ImportancePayload> {
    return this.get("/importance");
  }

  rules(query: RuleQuery = {}): Promise<RulesPayload> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(query)) {
      if (value !== undefined) params.set(key, String(value));
    }
    const qs = params.toString();
    return this.get(qs ? `/rules?${qs}` : "/rules");
  }

  embedding(): Promise<EmbeddingPayload> {
    return this.get("/embedding");
  }

  setEmbeddingConfig(config: Partial<EmbeddingConfig>): Promise<EmbeddingPayload> {
    return this.post("/embedding/config", config);
  }

  contrast(body: ContrastRequestBody): Promise<ContrastPayload> {
    return this.post("/contrast", body);
  }

  agreement(testIndex: number): Promise<AgreementPayload> {
    return this.get(`/agreement/${testIndex}`);
  }

  conflicts(): Promise<ConflictsPayload> {
    return this.get("/conflicts");
  }

  /** Returns both the parsed document and the exact bytes the server sent. */
  async exportDecisions(ruleIds: string[]): Promise<{ doc: ExportPayload; text: string }> {
    const text = await this.postText("/export", { rule_ids: ruleIds });
    return { doc: JSON.parse(text) as ExportPayload, text };
  }

  startSearch(body: SearchRequestBody): Promise<{ job_id: string }> {
    return this.post("/search", body);
  }

  searchJob(jobId: string): Promise<SearchJob> {
    return this.get(`/search/${jobId}`);
  }

  datasetMeta(): Promise<DatasetMeta> {
    return this.get("/dataset/meta");
  }
}
