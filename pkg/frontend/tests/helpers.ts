/**
 * Fixture-driven fetch mocking. Fixtures are real API responses recorded by
 * scripts/record_ui_fixtures.py in the backend repository; tests replay them
 * so every displayed value is one the live service actually produced.
 */

import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { vi } from "vitest";

export interface Fixture<B = any> {
  status: number;
  body: B;
}

export function fixture<B = any>(name: string): Fixture<B> {
  // resolved from the package root (vitest runs there); plain paths keep
  // clear of happy-dom's URL shim
  const path = resolve(process.cwd(), "tests", "fixtures", `${name}.json`);
  return JSON.parse(readFileSync(path, "utf-8"));
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function fixtureResponse(name: string): Response {
  const { status, body } = fixture(name);
  return jsonResponse(status, body);
}

export interface RecordedCall {
  method: string;
  url: string;
  headers: Record<string, string>;
  body: unknown;
}

export type Route = {
  method: string;
  pattern: RegExp;
  reply: string | (() => Response);
};

/** Install a fetch mock that answers from fixtures; returns the call log. */
export function mockFetch(routes: Route[]): RecordedCall[] {
  const calls: RecordedCall[] = [];
  globalThis.fetch = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    calls.push({
      method,
      url,
      headers: (init?.headers as Record<string, string>) ?? {},
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    });
    for (const route of routes) {
      if (route.method === method && route.pattern.test(url)) {
        return typeof route.reply === "string" ? fixtureResponse(route.reply) : route.reply();
      }
    }
    throw new Error(`no fixture route for ${method} ${url}`);
  }) as typeof fetch;
  return calls;
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
