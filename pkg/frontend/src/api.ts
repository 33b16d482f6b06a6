import type {
  HistoryEntry,
  InstanceDetail,
  InstanceSummary,
  KnnPayload,
  ModelPayload,
  SchemaAttribute,
  SuggestionPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(`${status}: ${detail}`);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => globalThis.fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body?.detail ?? response.statusText);
    }
    return body as T;
  }

  searchInstances(query: string, limit = 12): Promise<{ instances: InstanceSummary[] }> {
    const params = new URLSearchParams({ query, limit: String(limit) });
    return this.request(`/instances?${params}`);
  }

  instanceDetail(id: string): Promise<InstanceDetail> {
    return this.request(`/instances/${encodeURIComponent(id)}`);
  }

  schema(): Promise<{ attributes: SchemaAttribute[] }> {
    return this.request("/schema");
  }

  model(): Promise<ModelPayload> {
    return this.request("/model");
  }

  suggestions(anchor: string, side: "left" | "right", k?: number): Promise<SuggestionPayload> {
    const params = new URLSearchParams({ anchor, side });
    if (k !== undefined) params.set("k", String(k));
    return this.request(`/suggestions?${params}`);
  }

  knn(query: string, k?: number): Promise<KnnPayload> {
    const params = new URLSearchParams({ query });
    if (k !== undefined) params.set("k", String(k));
    return this.request(`/knn?${params}`);
  }

  history(limit = 10): Promise<{ history: HistoryEntry[] }> {
    return this.request(`/history?limit=${limit}`);
  }

  postLabel(a: string, b: string, score: number): Promise<ModelPayload> {
    return this.request("/labels", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ a, b, score }),
    });
  }
}
