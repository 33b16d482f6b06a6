import { describe, expect, it, vi } from "vitest";

import type { ApiClient } from "../src/api.js";
import { canSubmit, SessionStore } from "../src/state.js";
import type { InstanceDetail, ModelPayload } from "../src/types.js";

function fakeModel(iteration = 0): ModelPayload {
  return {
    iteration,
    cold_start: iteration < 2,
    weights: { age: 0.5, team: 0.5 },
    type_fractions: {},
    raw_correlations: {},
    ranking: [
      ["age", 0.5],
      ["team", 0.5],
    ],
  };
}

function fakeDetail(id: string): InstanceDetail {
  return { id, display: { name: id.toUpperCase() }, values: { age: 0.4 } };
}

function fakeApi() {
  let labels = 0;
  const history: unknown[] = [];
  return {
    labels: () => labels,
    model: vi.fn(async () => fakeModel(labels)),
    history: vi.fn(async () => ({ history: [...history] })),
    instanceDetail: vi.fn(async (id: string) => fakeDetail(id)),
    suggestions: vi.fn(async (anchor: string, side: "left" | "right") => ({
      anchor,
      side,
      rationale_attribute: "age",
      candidates: [{ id: `sugg-for-${anchor}`, display: {} }],
    })),
    knn: vi.fn(async (query: string) => ({ query, neighbors: [] })),
    postLabel: vi.fn(async (a: string, b: string, score: number) => {
      labels += 1;
      history.unshift({
        a, b, score,
        a_name: a, b_name: b,
        created_at: labels, source: "user", superseded: false,
      });
      return fakeModel(labels);
    }),
  };
}

const asClient = (api: ReturnType<typeof fakeApi>) => api as unknown as ApiClient;

describe("canSubmit", () => {
  it("requires two distinct instances", async () => {
    const store = new SessionStore(asClient(fakeApi()));
    expect(canSubmit(store.state)).toBe(false);
    await store.selectInstance("left", "p1");
    expect(canSubmit(store.state)).toBe(false);
    await store.selectInstance("right", "p1");
    expect(canSubmit(store.state)).toBe(false); // identical pair stays blocked
    await store.selectInstance("right", "p2");
    expect(canSubmit(store.state)).toBe(true);
  });
});

describe("SessionStore", () => {
  it("loads model and history on init", async () => {
    const api = fakeApi();
    const store = new SessionStore(asClient(api));
    await store.init();
    expect(store.state.model?.iteration).toBe(0);
    expect(api.model).toHaveBeenCalledTimes(1);
  });

  it("anchors candidate panels on the opposite side", async () => {
    const store = new SessionStore(asClient(fakeApi()));
    await store.selectInstance("left", "p1");
    // right panel suggestions reduce uncertainty against the left instance
    expect(store.state.rightCandidates?.anchor).toBe("p1");
    expect(store.state.leftCandidates).toBeNull();
    await store.selectInstance("right", "p2");
    expect(store.state.leftCandidates?.anchor).toBe("p2");
  });

  it("clamps the slider to the unit interval", () => {
    const store = new SessionStore(asClient(fakeApi()));
    store.setSlider(1.7);
    expect(store.state.slider).toBe(1);
    store.setSlider(-0.2);
    expect(store.state.slider).toBe(0);
  });

  it("refuses to submit without both sides", async () => {
    const store = new SessionStore(asClient(fakeApi()));
    await expect(store.submitLabel()).rejects.toThrow(/distinct/);
  });

  it("submits the slider value and refreshes model, history, candidates", async () => {
    const api = fakeApi();
    const store = new SessionStore(asClient(api));
    await store.init();
    await store.selectInstance("left", "p1");
    await store.selectInstance("right", "p2");
    store.setSlider(0.8);
    const suggestionCalls = api.suggestions.mock.calls.length;

    const model = await store.submitLabel();
    expect(api.postLabel).toHaveBeenCalledWith("p1", "p2", 0.8);
    expect(model.iteration).toBe(1);
    expect(store.state.model?.iteration).toBe(1);
    expect(store.state.history).toHaveLength(1);
    // candidate panels refresh after every accepted label
    expect(api.suggestions.mock.calls.length).toBeGreaterThan(suggestionCalls);
  });

  it("notifies listeners on every change", async () => {
    const store = new SessionStore(asClient(fakeApi()));
    const seen = vi.fn();
    store.onChange(seen);
    await store.init();
    store.setSlider(0.3);
    expect(seen.mock.calls.length).toBeGreaterThanOrEqual(2);
  });

  it("stores knn results", async () => {
    const store = new SessionStore(asClient(fakeApi()));
    await store.runKnn("p5");
    expect(store.state.knn?.query).toBe("p5");
  });
});
