"""Per-attribute and combined distances for mixed-type instances.

Scalar measures return ``None`` when either value is missing; callers
renormalize over the observed attributes. All distances are symmetric,
zero on identical inputs, and bounded to [0, 1]. Triangle inequality is
not guaranteed (Goodall and the per-type weighted sum need not be metric).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .dataset import (
    MISSING,
    Attribute,
    AttributeKind,
    AttributeValue,
    Dataset,
    Instance,
    is_missing,
)


class ContractViolationError(ValueError):
    """An input broke a distance precondition (unnormalized value, stale index, ...)."""


@dataclass(frozen=True)
class PairDistance:
    """A combined distance between two instances."""

    instance_a: str
    instance_b: str
    value: float


class VectorDistance(NamedTuple):
    """Distance over a vector of attributes plus a flag for empty evidence."""

    value: float
    no_evidence: bool


class PairBreakdown(NamedTuple):
    """Combined distance with its exact per-attribute decomposition.

    ``contributions`` maps every feature attribute to its share of the combined
    value (zero for unobserved, zero-weight, or agreeing attributes); the shares
    sum to ``value`` up to float rounding.
    """

    value: float
    no_evidence: bool
    contributions: dict[str, float]


def _check_unit_interval(value: float, what: str) -> None:
    if not -1e-9 <= value <= 1.0 + 1e-9:
        raise ContractViolationError(f"{what} must be normalized to [0, 1], got {value!r}")


def numeric_distance(a: float | object, b: float | object) -> float | None:
    """|a - b| over normalized values; ``None`` if either side is missing."""
    if is_missing(a) or is_missing(b):
        return None
    _check_unit_interval(a, "numeric value")
    _check_unit_interval(b, "numeric value")
    return abs(a - b)


def kronecker_distance(a: AttributeValue, b: AttributeValue) -> int | None:
    """0 on equal tokens/flags, 1 on unequal; ``None`` if either side is missing.

    Used in the weight-learning step for categorical and boolean attributes.
    """
    if is_missing(a) or is_missing(b):
        return None
    return 0 if a == b else 1


def goodall_distance(
    a: AttributeValue,
    b: AttributeValue,
    frequencies: Mapping[str, int],
    n_observations: int,
) -> float | None:
    """Goodall3 distance: matches on rare categories count as more similar.

    Match similarity is 1 - p(a)^2 with the plug-in estimate p(a) = freq[a] / n,
    so the distance is p(a)^2 on a match and 1.0 on a mismatch. ``None`` if
    either side is missing.

    Raises:
        ContractViolationError: token absent from the frequency table (stale index).
    """
    if is_missing(a) or is_missing(b):
        return None
    if n_observations <= 0:
        raise ContractViolationError("goodall distance needs a positive observation count")
    if a != b:
        return 1.0
    count = frequencies.get(a)
    if count is None:
        raise ContractViolationError(f"token {a!r} missing from frequency table")
    p = count / n_observations
    return p * p


def jaccard_weighted_distance(
    x: Sequence[AttributeValue],
    y: Sequence[AttributeValue],
    weights: Sequence[float],
) -> float:
    """Weighted Jaccard distance over boolean vectors, ignoring negative matches.

    Over positions where both values are present:
    sim = sum(w_i for x_i and y_i) / sum(w_i for x_i or y_i), distance = 1 - sim.
    A zero denominator (nothing true on either side) counts as identical: 0.0.
    """
    if not len(x) == len(y) == len(weights):
        raise ValueError("boolean vectors and weights must have equal length")
    numerator = 0.0
    denominator = 0.0
    for xi, yi, wi in zip(x, y, weights):
        if wi < 0:
            raise ContractViolationError(f"negative weight {wi!r}")
        if is_missing(xi) or is_missing(yi):
            continue
        if xi and yi:
            numerator += wi
            denominator += wi
        elif xi or yi:
            denominator += wi
    if denominator == 0.0:
        return 0.0
    return 1.0 - numerator / denominator


def weighted_euclidean_distance(
    x: Sequence[AttributeValue],
    y: Sequence[AttributeValue],
    weights: Sequence[float],
) -> VectorDistance:
    """Weighted Euclidean distance over normalized vectors, rescaled to [0, 1].

    sqrt(sum w_i (x_i - y_i)^2) / sqrt(sum w_i) over positions where both values
    are present. With no observed position, or zero total weight over observed
    positions, the distance is 0.0 with ``no_evidence`` set.
    """
    if not len(x) == len(y) == len(weights):
        raise ValueError("numeric vectors and weights must have equal length")
    weighted_sq = 0.0
    weight_sum = 0.0
    for xi, yi, wi in zip(x, y, weights):
        if wi < 0:
            raise ContractViolationError(f"negative weight {wi!r}")
        d = numeric_distance(xi, yi)
        if d is None:
            continue
        weighted_sq += wi * d * d
        weight_sum += wi
    if weight_sum == 0.0:
        return VectorDistance(0.0, True)
    return VectorDistance(math.sqrt(weighted_sq) / math.sqrt(weight_sum), False)


def _numeric_part(
    a: Instance, b: Instance, attrs: Sequence[Attribute], weights: Mapping[str, float]
) -> tuple[float, bool, dict[str, float]]:
    weighted_sq = 0.0
    weight_sum = 0.0
    per_attr: dict[str, float] = {}
    for attr in attrs:
        d = numeric_distance(a.values[attr.name], b.values[attr.name])
        if d is None:
            continue
        w = weights[attr.name]
        weighted_sq += w * d * d
        weight_sum += w
        per_attr[attr.name] = w * d * d
    if weight_sum == 0.0:
        return 0.0, False, {}
    value = math.sqrt(weighted_sq) / math.sqrt(weight_sum)
    if value == 0.0:
        return 0.0, True, {}
    # w_i d_i^2 / (sqrt(sum w d^2) * sqrt(sum w)) sums exactly to the distance
    scale = math.sqrt(weighted_sq) * math.sqrt(weight_sum)
    return value, True, {name: term / scale for name, term in per_attr.items()}


def _categorical_part(
    a: Instance,
    b: Instance,
    attrs: Sequence[Attribute],
    weights: Mapping[str, float],
) -> tuple[float, bool, dict[str, float]]:
    weighted = 0.0
    weight_sum = 0.0
    per_attr: dict[str, float] = {}
    for attr in attrs:
        d = goodall_distance(
            a.values[attr.name],
            b.values[attr.name],
            attr.category_frequencies or {},
            attr.n_observations,
        )
        if d is None:
            continue
        w = weights[attr.name]
        weighted += w * d
        weight_sum += w
        per_attr[attr.name] = w * d
    if weight_sum == 0.0:
        return 0.0, False, {}
    return weighted / weight_sum, True, {n: t / weight_sum for n, t in per_attr.items()}


def _boolean_part(
    a: Instance, b: Instance, attrs: Sequence[Attribute], weights: Mapping[str, float]
) -> tuple[float, bool, dict[str, float]]:
    numerator = 0.0
    denominator = 0.0
    mismatch: dict[str, float] = {}
    evidence = False
    for attr in attrs:
        xa, xb = a.values[attr.name], b.values[attr.name]
        if is_missing(xa) or is_missing(xb):
            continue
        w = weights[attr.name]
        if w > 0:
            evidence = True
        if xa and xb:
            numerator += w
            denominator += w
        elif xa or xb:
            denominator += w
            mismatch[attr.name] = w
    if denominator == 0.0:
        return 0.0, evidence, {}
    value = 1.0 - numerator / denominator
    return value, evidence, {n: w / denominator for n, w in mismatch.items()}


def combined_breakdown(
    a: Instance,
    b: Instance,
    weights: Mapping[str, float],
    dataset: Dataset,
) -> PairBreakdown:
    """Condense per-type distances into one value via type-fraction weighting.

    d = f_num * d_num + f_cat * d_cat + f_bool * d_bool, where f_t is type t's
    share of the total attribute weight. Types with zero total weight are
    excluded; missing pairs are excluded per measure with renormalization over
    the observed attributes. A zero total weight falls back to uniform weights
    so cold-start retrieval still works.
    """
    features = dataset.feature_attributes
    w = {attr.name: float(weights.get(attr.name, 0.0)) for attr in features}
    total = sum(w.values())
    if total <= 0.0:
        w = {attr.name: 1.0 for attr in features}
        total = float(len(features))

    parts = {
        AttributeKind.NUMERICAL: _numeric_part,
        AttributeKind.CATEGORICAL: _categorical_part,
        AttributeKind.BOOLEAN: _boolean_part,
    }
    value = 0.0
    contributions = {attr.name: 0.0 for attr in features}
    any_evidence = False
    for kind, part in parts.items():
        attrs = dataset.features_of_kind(kind)
        type_weight = sum(w[attr.name] for attr in attrs)
        if type_weight <= 0.0:
            continue
        fraction = type_weight / total
        d, evidence, per_attr = part(a, b, attrs, w)
        any_evidence = any_evidence or evidence
        value += fraction * d
        for name, share in per_attr.items():
            contributions[name] = fraction * share
    # float roundup guard: fractions sum to 1 only up to rounding
    value = min(1.0, value)
    return PairBreakdown(value=value, no_evidence=not any_evidence, contributions=contributions)


def combined_distance(
    a: Instance, b: Instance, weights: Mapping[str, float], dataset: Dataset
) -> float:
    return combined_breakdown(a, b, weights, dataset).value


def pair_distance(
    dataset: Dataset, weights: Mapping[str, float], id_a: str, id_b: str
) -> PairDistance:
    """Combined distance between two instances referenced by id."""
    value = combined_distance(dataset.instance(id_a), dataset.instance(id_b), weights, dataset)
    return PairDistance(instance_a=id_a, instance_b=id_b, value=value)
