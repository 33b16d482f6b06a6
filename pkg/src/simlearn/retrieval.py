"""Explainable k-nearest-neighbor search under the learned combined distance."""

from __future__ import annotations

from dataclasses import dataclass

from .dataset import Dataset, Instance
from .distance import combined_breakdown
from .model import ModelState


@dataclass(frozen=True)
class Neighbor:
    """One retrieved instance with its rank, distance, and explanation."""

    id: str
    rank: int
    distance: float
    top_attributes: tuple[tuple[str, float], ...]
    no_evidence: bool


@dataclass(frozen=True)
class RetrievalResult:
    query: str
    neighbors: tuple[Neighbor, ...]


def _ranked_contributions(contributions: dict[str, float], n: int) -> tuple[tuple[str, float], ...]:
    ranked = sorted(contributions.items(), key=lambda item: (-item[1], item[0]))
    return tuple(ranked[:n])


def knn(query: str, k: int, model: ModelState, dataset: Dataset) -> RetrievalResult:
    """Exhaustive scan: every other instance scored, sorted ascending, ties by id.

    Each neighbor carries the three attributes contributing most to its
    distance and the no-evidence flag for pairs sharing no observed attribute.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    query_instance = dataset.instance(query)
    scored = []
    for inst in dataset.instances:
        if inst.id == query:
            continue
        breakdown = combined_breakdown(query_instance, inst, model.weights, dataset)
        scored.append((breakdown.value, inst.id, breakdown))
    scored.sort(key=lambda item: (item[0], item[1]))

    neighbors = tuple(
        Neighbor(
            id=inst_id,
            rank=rank,
            distance=value,
            top_attributes=_ranked_contributions(breakdown.contributions, 3),
            no_evidence=breakdown.no_evidence,
        )
        for rank, (value, inst_id, breakdown) in enumerate(scored[:k], start=1)
    )
    return RetrievalResult(query=query, neighbors=neighbors)


def top_contributing_attributes(
    a: str, b: str, model: ModelState, dataset: Dataset, n: int = 3
) -> list[tuple[str, float]]:
    """Top ``n`` attributes by their exact share of the combined distance."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    breakdown = combined_breakdown(dataset.instance(a), dataset.instance(b), model.weights, dataset)
    return list(_ranked_contributions(breakdown.contributions, n))


def display_name(instance: Instance) -> str:
    return instance.display.get("name", instance.id)


def search_instances(text_query: str, dataset: Dataset, limit: int = 20) -> list[str]:
    """Case-insensitive substring match over display names.

    Results are ordered by match position, then name; an empty query returns
    the first ``limit`` instances by name.
    """
    needle = text_query.strip().lower()
    if not needle:
        by_name = sorted(dataset.instances, key=lambda i: (display_name(i).lower(), i.id))
        return [inst.id for inst in by_name[:limit]]
    hits = []
    for inst in dataset.instances:
        name = display_name(inst)
        position = name.lower().find(needle)
        if position >= 0:
            hits.append((position, name.lower(), inst.id))
    hits.sort()
    return [inst_id for _, _, inst_id in hits[:limit]]
