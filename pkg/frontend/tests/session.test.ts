import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Client, QueryResponse, RankResponse } from "../src/api.js";
import { DesignSession, DRAG_DEBOUNCE_MS, IDLE_MS } from "../src/session.js";

const FP = "fp-1";

function verdictFor(weights: number[], fingerprint = FP): QueryResponse {
  const sat = weights[0] >= weights[1];
  return {
    input: weights,
    satisfactory_as_is: sat,
    suggestion: sat ? weights : [1, 1],
    distance: sat ? 0 : 0.25,
    verified: true,
    mode: "2d",
    unsatisfiable: false,
    fingerprint,
  };
}

const RANK: RankResponse = {
  k: 4,
  items: [],
  group_counts: { g: { "0": 3, "1": 1 } },
  codebooks: { g: { a: 0, b: 1 } },
  fingerprint: FP,
};

interface FakeOpts {
  fingerprint?: string;
  delayMs?: number;
}

function fakeClient(log: number[][], opts: FakeOpts = {}): Client {
  const client = Object.create(Client.prototype) as Client;
  (client as unknown as Record<string, unknown>).query = (
    weights: number[],
  ) => {
    log.push([...weights]);
    const resp = verdictFor(weights, opts.fingerprint ?? FP);
    if (opts.delayMs) {
      return new Promise((resolve) =>
        setTimeout(() => resolve(resp), opts.delayMs),
      );
    }
    return Promise.resolve(resp);
  };
  (client as unknown as Record<string, unknown>).rank = () =>
    Promise.resolve(RANK);
  return client;
}

describe("DesignSession", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("debounces drags at 150 ms", async () => {
    const log: number[][] = [];
    const session = new DesignSession(fakeClient(log), [1, 1], FP);
    session.drag([1, 0.9]);
    session.drag([1, 0.8]);
    session.drag([1, 0.7]);
    expect(log.length).toBe(0);
    await vi.advanceTimersByTimeAsync(DRAG_DEBOUNCE_MS - 1);
    expect(log.length).toBe(0);
    await vi.advanceTimersByTimeAsync(1);
    expect(log.length).toBe(1);
    expect(log[0]).toEqual([1, 0.7]); // only the latest drag value queried
  });

  it("queries again after 500 ms idle", async () => {
    const log: number[][] = [];
    const session = new DesignSession(fakeClient(log), [1, 1], FP);
    session.drag([1, 0.5]);
    await vi.advanceTimersByTimeAsync(IDLE_MS);
    expect(log.length).toBe(2); // debounce fire plus idle fire
  });

  it("queries immediately on release", async () => {
    const log: number[][] = [];
    const session = new DesignSession(fakeClient(log), [1, 1], FP);
    session.release([0.4, 1]);
    await vi.advanceTimersByTimeAsync(0);
    expect(log.length).toBe(1);
    const view = session.view();
    expect(view.verdict?.satisfactory_as_is).toBe(false);
    expect(view.verdict?.distance).toBe(0.25);
  });

  it("keeps at most one query in flight and coalesces newer input", async () => {
    const log: number[][] = [];
    const session = new DesignSession(
      fakeClient(log, { delayMs: 50 }),
      [1, 1],
      FP,
    );
    session.release([1, 0.1]);
    session.release([1, 0.2]);
    session.release([1, 0.3]);
    await vi.advanceTimersByTimeAsync(200);
    // first query ran, intermediate inputs coalesced into one re-run
    expect(log.length).toBe(2);
    expect(log[0]).toEqual([1, 0.1]);
    expect(log[1]).toEqual([1, 0.3]);
    expect(session.view().verdict?.input).toEqual([1, 0.3]);
  });

  it("discards responses with a stale fingerprint", async () => {
    const log: number[][] = [];
    const session = new DesignSession(
      fakeClient(log, { fingerprint: "other" }),
      [1, 1],
      FP,
    );
    session.release([1, 0.5]);
    await vi.advanceTimersByTimeAsync(0);
    expect(session.view().verdict).toBeNull();
  });

  it("applySuggestion snaps to the suggestion and re-queries to distance 0", async () => {
    const log: number[][] = [];
    const session = new DesignSession(fakeClient(log), [1, 1], FP);
    session.release([0.2, 1]); // unsatisfactory, suggestion [1, 1]
    await vi.advanceTimersByTimeAsync(0);
    expect(session.view().verdict?.satisfactory_as_is).toBe(false);
    session.applySuggestion();
    await vi.advanceTimersByTimeAsync(0);
    const view = session.view();
    expect(view.weights).toEqual([1, 1]);
    expect(view.verdict?.satisfactory_as_is).toBe(true);
    expect(view.verdict?.distance).toBe(0);
    expect(view.history).toEqual([[0.2, 1]]); // previous weights kept
  });

  it("sum-normalizes weights for display", () => {
    const session = new DesignSession(fakeClient([]), [3, 1], FP);
    expect(session.normalizedWeights()).toEqual([0.75, 0.25]);
  });

  it("surfaces query errors without clearing the last verdict", async () => {
    const log: number[][] = [];
    const client = fakeClient(log);
    const session = new DesignSession(client, [1, 1], FP);
    session.release([1, 0.5]);
    await vi.advanceTimersByTimeAsync(0);
    const good = session.view().verdict;
    expect(good).not.toBeNull();
    (client as unknown as Record<string, unknown>).query = () =>
      Promise.reject(new Error("HTTP 409: index is building"));
    session.release([1, 0.6]);
    await vi.advanceTimersByTimeAsync(0);
    const view = session.view();
    expect(view.error).toContain("409");
    expect(view.verdict).toEqual(good);
  });
});
