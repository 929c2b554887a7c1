/** Test doubles and utilities.
 *
 * FakeServer replays fixture payloads captured verbatim from a live backend
 * (scripts/fetch-fixtures.sh) and logs every request, so tests can assert
 * both what the client asked and that everything it rendered came from a
 * served payload.
 */

import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import type { FetchLike } from "../src/api.js";

function fixtureText(name: string): string {
  // the test runner's working directory is the package root
  return readFileSync(resolve(process.cwd(), "tests/fixtures", name), "utf8");
}

export const RAW = {
  meta: fixtureText("meta.json"),
  models: fixtureText("models.json"),
  modelsAfterSearch: fixtureText("models_after_search.json"),
  importance: fixtureText("importance.json"),
  rules: fixtureText("rules.json"),
  embedding: fixtureText("embedding.json"),
  agreement0: fixtureText("agreement_0.json"),
  agreement2: fixtureText("agreement_2.json"),
  conflicts: fixtureText("conflicts.json"),
  contrast: fixtureText("contrast.json"),
  export: fixtureText("export.json"),
  searchDone: fixtureText("search_done.json"),
};

export interface Call {
  method: string;
  path: string;
  query: URLSearchParams;
  body?: any;
}

export class FakeServer {
  calls: Call[] = [];
  served: unknown[] = [];

  private models = JSON.parse(RAW.models);
  private importance = JSON.parse(RAW.importance);
  private rules = JSON.parse(RAW.rules);
  private embedding = JSON.parse(RAW.embedding);
  private searchStarted = false;

  readonly fetchFn: FetchLike = async (input, init) => {
    const url = new URL(input, "http://fake.test");
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    this.calls.push({ method, path: url.pathname, query: url.searchParams, body });
    return this.route(method, url.pathname, url.searchParams, body);
  };

  callsTo(method: string, path: string): Call[] {
    return this.calls.filter((c) => c.method === method && c.path === path);
  }

  private respond(text: string, status = 200): Response {
    try {
      this.served.push(JSON.parse(text));
    } catch {
      // error bodies and non-JSON payloads stay out of the universe
    }
    return new Response(text, {
      status,
      headers: { "content-type": "application/json" },
    });
  }

  private json(payload: unknown, status = 200): Response {
    return this.respond(JSON.stringify(payload), status);
  }

  private notFound(message: string): Response {
    return this.respond(JSON.stringify({ code: "not_found", message }), 404);
  }

  private route(
    method: string,
    path: string,
    query: URLSearchParams,
    body: any,
  ): Response {
    if (method === "GET") {
      if (path === "/dataset/meta") return this.respond(RAW.meta);
      if (path === "/models") return this.json(this.models);
      if (path === "/importance") return this.json(this.importance);
      if (path === "/rules") {
        this.applyRuleQuery(query);
        return this.json(this.rules);
      }
      if (path === "/embedding") return this.json(this.embedding);
      if (path === "/conflicts") return this.respond(RAW.conflicts);
      const agreement = path.match(/^\/agreement\/(\d+)$/);
      if (agreement) {
        const index = Number(agreement[1]);
        if (index === 2) return this.respond(RAW.agreement2);
        const base = JSON.parse(RAW.agreement0);
        base.test_index = index;
        return this.json(base);
      }
      if (path === "/search/job-1" && this.searchStarted) {
        this.models = JSON.parse(RAW.modelsAfterSearch);
        return this.respond(RAW.searchDone);
      }
    }
    if (method === "POST") {
      if (path === "/models/active") {
        const ids: string[] = body.ids;
        const unknown = ids.filter(
          (id) => !this.models.models.some((m: any) => m.id === id),
        );
        if (unknown.length > 0) {
          return this.notFound(`unknown model ids: ${JSON.stringify(unknown)}`);
        }
        for (const model of this.models.models) {
          model.active = ids.includes(model.id);
        }
        this.models.active_ids = this.models.models
          .filter((m: any) => m.active)
          .map((m: any) => m.id);
        return this.json(this.models);
      }
      if (path === "/embedding/config") {
        Object.assign(this.embedding.config, body);
        return this.json(this.embedding);
      }
      if (path === "/contrast") return this.respond(RAW.contrast);
      if (path === "/export") return this.respond(RAW.export);
      if (path === "/search") {
        this.searchStarted = true;
        return this.json({ job_id: "job-1" });
      }
    }
    return this.notFound(`no route for ${method} ${path}`);
  }

  private applyRuleQuery(query: URLSearchParams): void {
    const filter = this.rules.filter;
    if (query.get("clear") === "true") {
      filter.min_support = null;
      filter.max_support = null;
      filter.max_impurity = null;
      filter.test_instance = null;
    }
    for (const name of ["min_support", "max_support", "test_instance"]) {
      const value = query.get(name);
      if (value !== null) filter[name] = Number(value);
    }
    const impurity = query.get("max_impurity");
    if (impurity !== null) filter.max_impurity = Number(impurity);
    const decimals = query.get("decimals");
    if (decimals !== null) filter.rounding_decimals = Number(decimals);
  }
}

/** Every number reachable in the payloads this server actually served,
 * stringified the way num()/svgNum() renders them. */
export function servedNumericUniverse(server: FakeServer): Set<string> {
  const universe = new Set<string>();
  const walk = (value: unknown): void => {
    if (typeof value === "number") universe.add(String(value));
    else if (Array.isArray(value)) value.forEach(walk);
    else if (value && typeof value === "object") {
      Object.values(value).forEach(walk);
    }
  };
  server.served.forEach(walk);
  return universe;
}

export async function waitFor(
  predicate: () => boolean,
  label = "condition",
  timeoutMs = 2000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!predicate()) {
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${label}`);
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}

export function mouse(
  type: string,
  x: number,
  y: number,
  extra: MouseEventInit = {},
): MouseEvent {
  return new MouseEvent(type, {
    clientX: x,
    clientY: y,
    bubbles: true,
    cancelable: true,
    ...extra,
  });
}
