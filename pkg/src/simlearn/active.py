"""Candidate suggestion: farthest unlabeled neighbors under the top-weight attribute."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dataset import AttributeKind, Dataset, Instance, is_missing
from .model import ModelState, SimilarityLabel, weight_ranking


@dataclass(frozen=True)
class SuggestionSet:
    """Ranked labeling candidates for one anchor and one panel side."""

    anchor: str
    side: str
    candidates: tuple[str, ...]
    rationale_attribute: str


def _numeric_variance(dataset: Dataset, name: str) -> float:
    values = [
        inst.values[name] for inst in dataset.instances if not is_missing(inst.values[name])
    ]
    if len(values) < 2:
        return 0.0
    mean = sum(values) / len(values)
    return sum((v - mean) ** 2 for v in values) / len(values)


def _entropy(counts: Iterable[int]) -> float:
    total = sum(counts)
    if total == 0:
        return 0.0
    entropy = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            entropy -= p * math.log(p)
    return entropy


def rationale_attribute(model: ModelState, dataset: Dataset) -> str:
    """Attribute steering the suggestions: top weight, or the most dispersed one on cold start."""
    if not model.cold_start:
        return weight_ranking(model)[0][0]

    numericals = dataset.features_of_kind(AttributeKind.NUMERICAL)
    scored = sorted(
        ((_numeric_variance(dataset, a.name), a.name) for a in numericals),
        key=lambda item: (-item[0], item[1]),
    )
    if scored and scored[0][0] > 0.0:
        return scored[0][1]

    # fall back to the highest-entropy categorical; booleans count as two-category
    best: tuple[float, str] | None = None
    for attr in dataset.feature_attributes:
        if attr.kind is AttributeKind.CATEGORICAL:
            counts = list((attr.category_frequencies or {}).values())
        elif attr.kind is AttributeKind.BOOLEAN:
            observed = [
                inst.values[attr.name]
                for inst in dataset.instances
                if not is_missing(inst.values[attr.name])
            ]
            counts = [sum(1 for v in observed if v), sum(1 for v in observed if not v)]
        else:
            continue
        h = _entropy(counts)
        if best is None or (-h, attr.name) < (-best[0], best[1]):
            best = (h, attr.name)
    if best is None:
        raise ValueError("no usable attribute for suggestions")
    return best[1]


def _sort_key(attr_kind: AttributeKind, anchor_value, candidate: Instance, attr, name: str):
    value = candidate.values[name]
    if is_missing(anchor_value) or is_missing(value):
        return (1, 0.0, 0.0, candidate.id)
    if attr_kind is AttributeKind.NUMERICAL:
        return (0, -abs(anchor_value - value), 0.0, candidate.id)
    if attr_kind is AttributeKind.CATEGORICAL:
        mismatch = 0 if anchor_value == value else 1
        freq = (attr.category_frequencies or {}).get(value, 0)
        # mismatches first, rarer mismatched categories first
        return (0, -float(mismatch), float(freq), candidate.id)
    mismatch = 0 if anchor_value == value else 1
    return (0, -float(mismatch), 0.0, candidate.id)


def suggest_candidates(
    anchor: str,
    k: int,
    model: ModelState,
    labels: Sequence[SimilarityLabel],
    dataset: Dataset,
    side: str = "left",
) -> SuggestionSet:
    """Farthest neighbors to the anchor under the rationale attribute, unlabeled pairs only.

    Instances already labeled against the anchor are excluded; instances missing
    the rationale attribute sort last. If fewer than ``k`` candidates are
    eligible the full pool is returned.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    anchor_instance = dataset.instance(anchor)
    attr_name = rationale_attribute(model, dataset)
    attr = dataset.attribute_map[attr_name]

    labeled_partners = set()
    for label in labels:
        if label.a == anchor:
            labeled_partners.add(label.b)
        elif label.b == anchor:
            labeled_partners.add(label.a)

    pool = [
        inst for inst in dataset.instances
        if inst.id != anchor and inst.id not in labeled_partners
    ]
    anchor_value = anchor_instance.values[attr_name]
    pool.sort(key=lambda inst: _sort_key(attr.kind, anchor_value, inst, attr, attr_name))
    return SuggestionSet(
        anchor=anchor,
        side=side,
        candidates=tuple(inst.id for inst in pool[:k]),
        rationale_attribute=attr_name,
    )
