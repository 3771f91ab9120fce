import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { fixture, jsonResponse, mockFetch } from "./helpers";

describe("ApiClient", () => {
  beforeEach(() => {
    // each test installs its own fetch mock
  });

  it("submits sheets to the campaign endpoint and parses the receipt", async () => {
    const calls = mockFetch([
      { method: "POST", pattern: /\/api\/v1\/campaigns\/camp-1\/sheets$/, reply: "submit_complete" },
    ]);
    const client = new ApiClient("http://api.test");
    const stored = await client.submitSheet("camp-1", {
      source: "student",
      subject_teacher_id: "t1",
      answers: { "sci-01": 4 },
      token: "tok.secret",
    });
    expect(stored.status).toBe("stored");
    expect(stored.sheet_id).toBe(fixture("submit_complete").body.sheet_id);
    expect(calls[0]!.url).toBe("http://api.test/api/v1/campaigns/camp-1/sheets");
    expect(calls[0]!.body).toMatchObject({ source: "student", token: "tok.secret" });
  });

  it("maps error bodies to typed errors with the machine-readable code", async () => {
    mockFetch([
      { method: "POST", pattern: /\/sheets$/, reply: "submit_incomplete" },
    ]);
    const client = new ApiClient();
    const failure = await client
      .submitSheet("camp-1", { source: "student", subject_teacher_id: "t1", answers: {} })
      .then(() => null, (error) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(422);
    expect(failure.code).toBe("Incomplete");
    expect(Array.isArray(failure.body.missing_items)).toBe(true);
  });

  it("sends the session token on every call after login", async () => {
    const calls = mockFetch([
      {
        method: "POST",
        pattern: /\/api\/v1\/sessions$/,
        reply: () => jsonResponse(200, {
          session_token: "session-abc",
          expires_at: 0,
          principal_id: "dean",
          roles: ["dean"],
          teacher_id: null,
        }),
      },
      { method: "GET", pattern: /\/api\/v1\/results\//, reply: "result_final" },
    ]);
    const client = new ApiClient();
    await client.login("dean", "pw");
    await client.getResult("t1", "camp-1", "final");
    expect(calls[1]!.headers["X-Session-Token"]).toBe("session-abc");
  });

  it("builds the statistics query string", async () => {
    const calls = mockFetch([
      { method: "GET", pattern: /\/api\/v1\/statistics\/camp-1\?/, reply: "statistics" },
    ]);
    const client = new ApiClient();
    const stats = await client.getStatistics("camp-1", "chair", "CS");
    expect(calls[0]!.url).toContain("grouping=chair");
    expect(calls[0]!.url).toContain("name=CS");
    expect(stats.count).toBe(3);
  });

  it("keeps denied responses as typed 403 errors", async () => {
    mockFetch([
      { method: "GET", pattern: /\/api\/v1\/results\//, reply: "result_denied" },
    ]);
    const client = new ApiClient();
    const failure = await client
      .getResult("t1", "camp-1", "student")
      .then(() => null, (error) => error);
    expect(failure.code).toBe("Denied");
    expect(failure.status).toBe(403);
  });
});
