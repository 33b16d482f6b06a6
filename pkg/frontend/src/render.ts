import type {
  HistoryEntry,
  InstanceDetail,
  InstanceSummary,
  KnnPayload,
  ModelPayload,
  SuggestionPayload,
} from "./types.js";

export function esc(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function initials(name: string): string {
  return name
    .split(/\s+/)
    .filter(Boolean)
    .slice(0, 2)
    .map((part) => part[0]!.toUpperCase())
    .join("");
}

function formatValue(value: number | string | boolean | null): string {
  if (value === null) return "–";
  if (typeof value === "number") return value.toFixed(3).replace(/\.?0+$/, "") || "0";
  if (typeof value === "boolean") return value ? "yes" : "no";
  return value;
}

export function renderInstanceCard(detail: InstanceDetail | null, side: "left" | "right"): string {
  if (!detail) {
    return `<div class="card empty" data-side="${side}"><p>Pick an instance…</p></div>`;
  }
  const name = detail.display["name"] ?? detail.id;
  const image = detail.display["image"];
  const portrait = image
    ? `<img class="portrait" src="${esc(image)}" alt="${esc(name)}">`
    : `<div class="portrait placeholder">${esc(initials(name))}</div>`;
  const rows = Object.entries(detail.values)
    .map(
      ([attr, value]) =>
        `<tr><td class="attr">${esc(attr)}</td><td class="value">${esc(formatValue(value))}</td></tr>`,
    )
    .join("");
  return `
    <div class="card" data-side="${side}" data-id="${esc(detail.id)}">
      ${portrait}
      <h3>${esc(name)}</h3>
      <table class="attributes"><tbody>${rows}</tbody></table>
    </div>`;
}

export function renderWeightChart(model: ModelPayload | null): string {
  if (!model) return `<p class="hint">Model not loaded.</p>`;
  const maxWeight = Math.max(...model.ranking.map(([, w]) => w), 1e-9);
  const bar = ([attr, weight]: [string, number]) => `
    <div class="weight-row">
      <span class="weight-label">${esc(attr)}</span>
      <span class="weight-bar"><span class="fill" style="width: ${((weight / maxWeight) * 100).toFixed(1)}%"></span></span>
      <span class="weight-value">${weight.toFixed(3)}</span>
    </div>`;
  const positive = model.ranking.filter(([, w]) => w > 0);
  const zeros = model.ranking.filter(([, w]) => w === 0);
  const zeroBlock = zeros.length
    ? `<details class="zero-weights"><summary>${zeros.length} attributes with zero weight</summary>${zeros
        .map(bar)
        .join("")}</details>`
    : "";
  const badge = model.cold_start
    ? `<span class="badge cold">cold start – uniform weights</span>`
    : `<span class="badge">learned</span>`;
  return `
    <div class="weight-chart" data-iteration="${model.iteration}">
      <p class="meta">iteration ${model.iteration} ${badge}</p>
      ${positive.map(bar).join("")}
      ${zeroBlock}
    </div>`;
}

export function renderCandidates(suggestions: SuggestionPayload | null, side: "left" | "right"): string {
  if (!suggestions || suggestions.candidates.length === 0) {
    return `<p class="hint">No suggestions yet.</p>`;
  }
  const items = suggestions.candidates
    .map(
      (candidate) => `
      <li>
        <button class="candidate" data-candidate-id="${esc(candidate.id)}" data-side="${side}">
          ${esc(candidate.display["name"] ?? candidate.id)}
        </button>
      </li>`,
    )
    .join("");
  return `
    <div class="candidates">
      <p class="hint">farthest under <strong>${esc(suggestions.rationale_attribute)}</strong></p>
      <ul>${items}</ul>
    </div>`;
}

export function renderHistoryStrip(entries: HistoryEntry[]): string {
  if (entries.length === 0) return `<p class="hint">No labels yet.</p>`;
  const items = entries
    .map(
      (entry) => `
      <li class="history-pair${entry.superseded ? " superseded" : ""}">
        <span class="pair-name">${esc(entry.a_name)}</span>
        <span class="pair-score">${entry.score.toFixed(2)}</span>
        <span class="pair-name">${esc(entry.b_name)}</span>
      </li>`,
    )
    .join("");
  return `<ul class="history">${items}</ul>`;
}

export function renderKnnRows(payload: KnnPayload | null): string {
  if (!payload) return `<p class="hint">Run a query to see neighbors.</p>`;
  if (payload.neighbors.length === 0) return `<p class="hint">No neighbors found.</p>`;
  const rows = payload.neighbors
    .map((neighbor) => {
      const chips = neighbor.top_attributes
        .map(([attr, share]) => `<span class="chip">${esc(attr)} ${share.toFixed(3)}</span>`)
        .join("");
      return `
      <tr class="knn-row${neighbor.no_evidence ? " no-evidence" : ""}" data-id="${esc(neighbor.id)}">
        <td class="rank">${neighbor.rank}</td>
        <td class="name">${esc(neighbor.display["name"] ?? neighbor.id)}</td>
        <td class="distance">${neighbor.distance.toFixed(4)}</td>
        <td class="top-attributes">${chips}</td>
      </tr>`;
    })
    .join("");
  return `
    <table class="knn">
      <thead><tr><th>rank</th><th>instance</th><th>distance</th><th>top attributes</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

export function renderSearchResults(instances: InstanceSummary[]): string {
  if (instances.length === 0) return "";
  const items = instances
    .map(
      (inst) => `
      <li><button class="search-hit" data-instance-id="${esc(inst.id)}">
        ${esc(inst.display["name"] ?? inst.id)}
      </button></li>`,
    )
    .join("");
  return `<ul class="search-results">${items}</ul>`;
}
