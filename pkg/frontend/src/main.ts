import { ApiClient } from "./api.js";
import {
  renderCandidates,
  renderHistoryStrip,
  renderInstanceCard,
  renderKnnRows,
  renderSearchResults,
  renderWeightChart,
} from "./render.js";
import { canSubmit, SessionStore } from "./state.js";

const LAYOUT = `
  <header>
    <h1>Similarity trainer</h1>
    <div class="search">
      <input id="search-box" type="search" placeholder="Find an instance…" autocomplete="off">
      <div id="search-results"></div>
      <span class="hint">click a hit to fill the left slot, shift-click for the right</span>
    </div>
    <div id="banner" hidden></div>
  </header>
  <main>
    <section class="labeling">
      <div class="panel" id="left-candidates"></div>
      <div class="pair">
        <div id="left-card"></div>
        <div class="slider-block">
          <label for="slider">similarity <output id="slider-value">0.50</output></label>
          <input id="slider" type="range" min="0" max="1" step="0.01" value="0.5">
          <button id="submit" disabled>Label pair</button>
        </div>
        <div id="right-card"></div>
      </div>
      <div class="panel" id="right-candidates"></div>
    </section>
    <section class="history-block">
      <h2>History</h2>
      <div id="history"></div>
    </section>
    <section class="model-block">
      <h2>Attribute weights</h2>
      <div id="weight-chart"></div>
    </section>
    <section class="retrieval-block">
      <h2>Nearest neighbors</h2>
      <form id="knn-form">
        <input id="knn-query" type="search" placeholder="query instance name…" autocomplete="off">
        <div id="knn-query-results"></div>
        <button type="submit" id="knn-run" disabled>Search</button>
      </form>
      <div id="knn-results"></div>
    </section>
  </main>
`;

export interface App {
  store: SessionStore;
  ready: Promise<void>;
}

export function mountApp(root: HTMLElement, api: ApiClient): App {
  root.innerHTML = LAYOUT;
  const store = new SessionStore(api);

  const el = <T extends HTMLElement>(id: string): T => {
    const node = root.querySelector<T>(`#${id}`);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
  };

  const banner = el<HTMLDivElement>("banner");
  const searchBox = el<HTMLInputElement>("search-box");
  const slider = el<HTMLInputElement>("slider");
  const submit = el<HTMLButtonElement>("submit");
  const knnQuery = el<HTMLInputElement>("knn-query");
  const knnRun = el<HTMLButtonElement>("knn-run");
  let knnSelection: string | null = null;

  const showError = (message: string) => {
    banner.hidden = false;
    banner.textContent = message;
  };
  const clearError = () => {
    banner.hidden = true;
    banner.textContent = "";
  };

  const guard = (work: () => Promise<unknown>) => {
    work().then(clearError, (err: unknown) => showError(String(err)));
  };

  store.onChange(() => {
    el("left-card").innerHTML = renderInstanceCard(store.state.left, "left");
    el("right-card").innerHTML = renderInstanceCard(store.state.right, "right");
    el("left-candidates").innerHTML = renderCandidates(store.state.leftCandidates, "left");
    el("right-candidates").innerHTML = renderCandidates(store.state.rightCandidates, "right");
    el("history").innerHTML = renderHistoryStrip(store.state.history);
    el("weight-chart").innerHTML = renderWeightChart(store.state.model);
    el("knn-results").innerHTML = renderKnnRows(store.state.knn);
    el<HTMLOutputElement>("slider-value").value = store.state.slider.toFixed(2);
    submit.disabled = !canSubmit(store.state);
  });

  searchBox.addEventListener("input", () => {
    guard(async () => {
      const query = searchBox.value.trim();
      const { instances } = query ? await api.searchInstances(query) : { instances: [] };
      el("search-results").innerHTML = renderSearchResults(instances);
    });
  });

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const hit = target.closest<HTMLElement>(".search-hit");
    if (hit && hit.dataset.instanceId) {
      const side = (event as MouseEvent).shiftKey ? "right" : "left";
      guard(() => store.selectInstance(side, hit.dataset.instanceId!));
      return;
    }
    const candidate = target.closest<HTMLElement>(".candidate");
    if (candidate && candidate.dataset.candidateId) {
      // clicking a panel candidate swaps that side's instance
      const side = candidate.dataset.side as "left" | "right";
      guard(() => store.selectInstance(side, candidate.dataset.candidateId!));
      return;
    }
    const knnHit = target.closest<HTMLElement>(".knn-hit");
    if (knnHit && knnHit.dataset.instanceId) {
      knnSelection = knnHit.dataset.instanceId;
      knnQuery.value = knnHit.textContent?.trim() ?? knnSelection;
      el("knn-query-results").innerHTML = "";
      knnRun.disabled = false;
    }
  });

  slider.addEventListener("input", () => {
    store.setSlider(Number(slider.value));
  });

  submit.addEventListener("click", () => {
    // one mutating request in flight at most
    if (submit.disabled) return;
    submit.disabled = true;
    store
      .submitLabel()
      .then(clearError, (err: unknown) => showError(String(err)))
      .finally(() => {
        submit.disabled = !canSubmit(store.state);
      });
  });

  knnQuery.addEventListener("input", () => {
    guard(async () => {
      knnSelection = null;
      knnRun.disabled = true;
      const query = knnQuery.value.trim();
      const { instances } = query ? await api.searchInstances(query) : { instances: [] };
      el("knn-query-results").innerHTML = instances
        .map(
          (inst) =>
            `<button type="button" class="knn-hit" data-instance-id="${inst.id}">` +
            `${inst.display["name"] ?? inst.id}</button>`,
        )
        .join("");
    });
  });

  el<HTMLFormElement>("knn-form").addEventListener("submit", (event) => {
    event.preventDefault();
    if (knnSelection) guard(() => store.runKnn(knnSelection!));
  });

  const ready = store.init().catch((err: unknown) => {
    showError(`service unreachable: ${String(err)}`);
    searchBox.disabled = true;
    slider.disabled = true;
    submit.disabled = true;
    throw err;
  });

  return { store, ready };
}

declare global {
  interface Window {
    __SIMLEARN_APP__?: App;
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    window.__SIMLEARN_APP__ = mountApp(root, new ApiClient(""));
  }
}
