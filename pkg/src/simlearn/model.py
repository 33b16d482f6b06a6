"""Attribute-weight learning from pairwise similarity labels.

Each feature attribute is correlated independently against the labeled pairs:
the attribute's pairwise distances are paired with the label-derived distances
(1 - score) and scored with Pearson's correlation coefficient. Negative
correlations clamp to zero; the clamped weights are normalized to sum to one.
Before enough signal exists the model falls back to uniform weights so that
retrieval works from the first screen.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .dataset import AttributeKind, Dataset
from .distance import kronecker_distance, numeric_distance


@dataclass(frozen=True)
class SimilarityLabel:
    """User or oracle feedback for an unordered pair: 0 = dissimilar, 1 = very similar."""

    a: str
    b: str
    score: float
    created_at: float = field(default_factory=time.time)
    source: str = "user"

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"label pair must be two distinct instances, got {self.a!r} twice")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"label score must be in [0, 1], got {self.score!r}")
        if self.source not in ("user", "oracle"):
            raise ValueError(f"unknown label source {self.source!r}")

    @property
    def key(self) -> tuple[str, str]:
        """Canonical unordered pair key."""
        return (self.a, self.b) if self.a <= self.b else (self.b, self.a)


@dataclass(frozen=True)
class ModelState:
    """Snapshot of the learned similarity model.

    ``weights`` sum to 1 whenever any label signal exists; under ``cold_start``
    they are uniform over the feature attributes. ``type_fractions`` are each
    kind's share of the total weight, as used by the combined distance.
    ``raw_correlations`` keeps the unclamped Pearson values for inspection
    (``None`` where the correlation was undefined).
    """

    weights: dict[str, float]
    type_fractions: dict[AttributeKind, float]
    iteration: int
    cold_start: bool
    raw_correlations: dict[str, float | None]

    def to_dict(self) -> dict:
        """JSON-shaped export for audit and the UI weight chart."""
        return {
            "iteration": self.iteration,
            "cold_start": self.cold_start,
            "weights": dict(self.weights),
            "type_fractions": {kind.value: f for kind, f in self.type_fractions.items()},
            "raw_correlations": dict(self.raw_correlations),
        }

    @classmethod
    def from_weights(
        cls,
        weights: dict[str, float],
        dataset: Dataset,
        *,
        iteration: int = 0,
        cold_start: bool = False,
    ) -> "ModelState":
        """Build a state from explicit nonnegative weights (normalized here)."""
        total = sum(weights.values())
        if total <= 0:
            raise ValueError("weights must have a positive sum")
        normalized = {a.name: weights.get(a.name, 0.0) / total for a in dataset.feature_attributes}
        return cls(
            weights=normalized,
            type_fractions=_type_fractions(normalized, dataset),
            iteration=iteration,
            cold_start=cold_start,
            raw_correlations={name: None for name in normalized},
        )


def active_labels(labels: Iterable[SimilarityLabel]) -> list[SimilarityLabel]:
    """Latest-wins deduplication per unordered pair, in canonical pair order.

    Ties on ``created_at`` resolve by (score, source) so the result depends only
    on the label multiset, never on input order.
    """
    best: dict[tuple[str, str], SimilarityLabel] = {}
    for label in labels:
        cur = best.get(label.key)
        if cur is None or (label.created_at, label.score, label.source) >= (
            cur.created_at,
            cur.score,
            cur.source,
        ):
            best[label.key] = label
    return [best[key] for key in sorted(best)]


def _pearson(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Pearson correlation; ``None`` when either sample has zero variance."""
    n = len(xs)
    if n < 2:
        return None
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    syy = sum((y - mean_y) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        return None
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def _type_fractions(weights: dict[str, float], dataset: Dataset) -> dict[AttributeKind, float]:
    fractions: dict[AttributeKind, float] = {}
    for kind in AttributeKind:
        attrs = dataset.features_of_kind(kind)
        if attrs:
            fractions[kind] = sum(weights[a.name] for a in attrs)
    return fractions


def _uniform_state(
    dataset: Dataset, iteration: int, raw: dict[str, float | None]
) -> ModelState:
    features = dataset.feature_attributes
    weights = {a.name: 1.0 / len(features) for a in features}
    return ModelState(
        weights=weights,
        type_fractions=_type_fractions(weights, dataset),
        iteration=iteration,
        cold_start=True,
        raw_correlations=raw,
    )


def compute_weights(labels: Sequence[SimilarityLabel], dataset: Dataset) -> ModelState:
    """Learn per-attribute weights from labeled pairs.

    For each feature attribute, pairs (attribute distance, 1 - score) are built
    over the active labels where both instances have the attribute present:
    numeric distance for numerical attributes, Kronecker for categorical and
    boolean ones. The weight is the clamped Pearson correlation of that sample,
    normalized over all attributes. Attributes with zero-variance samples get
    weight 0. With fewer than two active labels, or no positive correlation
    anywhere, the model stays in cold start with uniform weights.

    Raises:
        UnknownInstanceError: a label references an id not in the dataset.
        ValueError: the dataset is not normalized.
    """
    if not dataset.normalized:
        raise ValueError("compute_weights needs a normalized dataset")
    for label in labels:
        dataset.instance(label.a)
        dataset.instance(label.b)

    features = dataset.feature_attributes
    if not features:
        raise ValueError("dataset has no feature attributes")
    iteration = len(labels)
    active = active_labels(labels)
    raw: dict[str, float | None] = {a.name: None for a in features}
    if len(active) < 2:
        return _uniform_state(dataset, iteration, raw)

    pairs = [(dataset.instance(lab.a), dataset.instance(lab.b), 1.0 - lab.score) for lab in active]
    for attr in features:
        per_attr = numeric_distance if attr.kind is AttributeKind.NUMERICAL else kronecker_distance
        xs: list[float] = []
        ts: list[float] = []
        for inst_a, inst_b, target in pairs:
            d = per_attr(inst_a.values[attr.name], inst_b.values[attr.name])
            if d is None:
                continue
            xs.append(float(d))
            ts.append(target)
        raw[attr.name] = _pearson(xs, ts)

    clamped = {name: max(0.0, r) if r is not None else 0.0 for name, r in raw.items()}
    total = sum(clamped.values())
    if total <= 0.0:
        return _uniform_state(dataset, iteration, raw)

    weights = {name: value / total for name, value in clamped.items()}
    return ModelState(
        weights=weights,
        type_fractions=_type_fractions(weights, dataset),
        iteration=iteration,
        cold_start=False,
        raw_correlations=raw,
    )


def update_model(
    state: ModelState,
    new_label: SimilarityLabel,
    all_labels: Sequence[SimilarityLabel],
    dataset: Dataset,
) -> ModelState:
    """Incorporate one label: full recomputation over the whole history.

    ``all_labels`` is the label history before ``new_label``; no incremental
    approximation is attempted, so the result is order-independent and the
    iteration counter advances by exactly one.
    """
    return compute_weights(list(all_labels) + [new_label], dataset)


def weight_ranking(state: ModelState) -> list[tuple[str, float]]:
    """Attributes by descending weight; ties broken by name ascending."""
    return sorted(state.weights.items(), key=lambda item: (-item[1], item[0]))
