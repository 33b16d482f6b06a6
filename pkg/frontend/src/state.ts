import type { ApiClient } from "./api.js";
import type {
  HistoryEntry,
  InstanceDetail,
  KnnPayload,
  ModelPayload,
  SuggestionPayload,
} from "./types.js";

export interface LabelingViewState {
  left: InstanceDetail | null;
  right: InstanceDetail | null;
  slider: number;
  leftCandidates: SuggestionPayload | null;
  rightCandidates: SuggestionPayload | null;
  history: HistoryEntry[];
  model: ModelPayload | null;
  knn: KnnPayload | null;
}

export function canSubmit(state: LabelingViewState): boolean {
  return state.left !== null && state.right !== null && state.left.id !== state.right.id;
}

/** Holds the view state and orchestrates service calls; views re-render on change. */
export class SessionStore {
  state: LabelingViewState = {
    left: null,
    right: null,
    slider: 0.5,
    leftCandidates: null,
    rightCandidates: null,
    history: [],
    model: null,
    knn: null,
  };

  private listeners: Array<() => void> = [];

  constructor(private readonly api: ApiClient) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  async init(): Promise<void> {
    const [model, history] = await Promise.all([this.api.model(), this.api.history()]);
    this.state.model = model;
    this.state.history = history.history;
    this.emit();
  }

  setSlider(value: number): void {
    this.state.slider = Math.min(1, Math.max(0, value));
    this.emit();
  }

  async selectInstance(side: "left" | "right", id: string): Promise<void> {
    const detail = await this.api.instanceDetail(id);
    this.state[side] = detail;
    await this.refreshCandidates();
    this.emit();
  }

  /** Left-panel candidates anchor on the right instance and vice versa:
   *  swapping one side reduces the remaining uncertainty against the other. */
  async refreshCandidates(): Promise<void> {
    const { left, right } = this.state;
    const [forLeft, forRight] = await Promise.all([
      right ? this.api.suggestions(right.id, "left") : Promise.resolve(null),
      left ? this.api.suggestions(left.id, "right") : Promise.resolve(null),
    ]);
    this.state.leftCandidates = forLeft;
    this.state.rightCandidates = forRight;
    this.emit();
  }

  async submitLabel(): Promise<ModelPayload> {
    if (!canSubmit(this.state)) {
      throw new Error("both sides must hold distinct instances");
    }
    const { left, right, slider } = this.state;
    const model = await this.api.postLabel(left!.id, right!.id, slider);
    this.state.model = model;
    const history = await this.api.history();
    this.state.history = history.history;
    await this.refreshCandidates();
    this.emit();
    return model;
  }

  async runKnn(query: string, k?: number): Promise<KnnPayload> {
    const payload = await this.api.knn(query, k);
    this.state.knn = payload;
    this.emit();
    return payload;
  }
}
