export interface InstanceSummary {
  id: string;
  display: Record<string, string>;
}

export interface InstanceDetail extends InstanceSummary {
  values: Record<string, number | string | boolean | null>;
}

export interface ModelPayload {
  iteration: number;
  cold_start: boolean;
  weights: Record<string, number>;
  type_fractions: Record<string, number>;
  raw_correlations: Record<string, number | null>;
  ranking: [string, number][];
}

export interface SuggestionPayload {
  anchor: string;
  side: "left" | "right";
  rationale_attribute: string;
  candidates: InstanceSummary[];
}

export interface KnnNeighbor {
  id: string;
  rank: number;
  distance: number;
  top_attributes: [string, number][];
  no_evidence: boolean;
  display: Record<string, string>;
}

export interface KnnPayload {
  query: string;
  neighbors: KnnNeighbor[];
}

export interface HistoryEntry {
  a: string;
  b: string;
  a_name: string;
  b_name: string;
  score: number;
  created_at: number;
  source: string;
  superseded: boolean;
}

export interface SchemaAttribute {
  name: string;
  kind: "numerical" | "categorical" | "boolean";
  role: "feature" | "display" | "id";
  zero_variance: boolean;
  observed_min: number | null;
  observed_max: number | null;
}
