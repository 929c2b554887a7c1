/** API client: request construction and error mapping. */

import { describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";
import { FakeServer, RAW } from "./helpers.js";

function client(server: FakeServer): ApiClient {
  return new ApiClient("", server.fetchFn);
}

describe("request construction", () => {
  it("builds rule queries from only the defined parameters", async () => {
    const server = new FakeServer();
    await client(server).rules({ min_support: 3, decimals: 4, clear: true });
    const call = server.callsTo("GET", "/rules")[0];
    expect(call.query.get("min_support")).toBe("3");
    expect(call.query.get("decimals")).toBe("4");
    expect(call.query.get("clear")).toBe("true");
    expect(call.query.get("max_support")).toBeNull();
  });

  it("omits the query string entirely for a bare rules call", async () => {
    const server = new FakeServer();
    await client(server).rules();
    expect([...server.callsTo("GET", "/rules")[0].query.keys()]).toEqual([]);
  });

  it("posts embedding settings under their server-side names", async () => {
    const server = new FakeServer();
    const payload = await client(server).setEmbeddingConfig({ dbscan_eps: 0.5, seed: 7 });
    expect(server.callsTo("POST", "/embedding/config")[0].body).toEqual({
      dbscan_eps: 0.5,
      seed: 7,
    });
    expect(payload.config.dbscan_eps).toBe(0.5);
  });

  it("addresses the agreement view by test index", async () => {
    const server = new FakeServer();
    const payload = await client(server).agreement(2);
    expect(payload.test_index).toBe(2);
    expect(server.calls[0].path).toBe("/agreement/2");
  });
});

describe("error mapping", () => {
  it("turns structured error bodies into ApiError", async () => {
    const server = new FakeServer();
    try {
      await client(server).setActive(["RF99"]);
      expect.unreachable("expected a 404");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      const apiError = error as ApiError;
      expect(apiError.status).toBe(404);
      expect(apiError.code).toBe("not_found");
      expect(apiError.message).toContain("RF99");
    }
  });

  it("keeps raw text for non-JSON error bodies", async () => {
    const fetchFn = async () => new Response("boom", { status: 500 });
    const broken = new ApiClient("", fetchFn);
    await expect(broken.models()).rejects.toMatchObject({
      status: 500,
      code: "http_error",
      message: "boom",
    });
  });
});

describe("byte fidelity", () => {
  it("export returns the exact response text alongside the parsed document", async () => {
    const server = new FakeServer();
    const { doc, text } = await client(server).exportDecisions(["AB1:0:4"]);
    expect(text).toBe(RAW.export);
    expect(JSON.stringify(JSON.parse(text))).toBe(JSON.stringify(doc));
    expect(doc.format).toBe("rulescope-manual-decisions");
  });
});
