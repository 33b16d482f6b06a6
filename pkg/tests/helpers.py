"""Randomized dataset builders shared across the test suite."""

from __future__ import annotations

import numpy as np

from simlearn.dataset import (
    MISSING,
    Attribute,
    AttributeKind,
    AttributeRole,
    Dataset,
    Instance,
    normalize,
)

TOKENS = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]


def random_dataset(
    rng: np.random.Generator,
    n_instances: int = 30,
    n_num: int = 3,
    n_cat: int = 3,
    n_bool: int = 3,
    missing_rate: float = 0.1,
) -> Dataset:
    """Seeded mixed-type dataset with sprinkled missing values, normalized."""
    attributes = [
        Attribute("id", AttributeKind.CATEGORICAL, AttributeRole.ID),
        Attribute("name", AttributeKind.CATEGORICAL, AttributeRole.DISPLAY),
    ]
    attributes += [Attribute(f"num_{i}", AttributeKind.NUMERICAL) for i in range(n_num)]
    attributes += [Attribute(f"cat_{i}", AttributeKind.CATEGORICAL) for i in range(n_cat)]
    attributes += [Attribute(f"bool_{i}", AttributeKind.BOOLEAN) for i in range(n_bool)]

    instances = []
    for row in range(n_instances):
        values = {}
        for i in range(n_num):
            values[f"num_{i}"] = float(rng.uniform(-5.0, 15.0))
        for i in range(n_cat):
            n_tokens = 2 + (i % (len(TOKENS) - 2))
            values[f"cat_{i}"] = TOKENS[int(rng.integers(0, n_tokens))]
        for i in range(n_bool):
            values[f"bool_{i}"] = bool(rng.random() < 0.5)
        for key in list(values):
            if rng.random() < missing_rate:
                values[key] = MISSING
        instances.append(Instance(id=f"r{row:03d}", display={"name": f"Item {row:03d}"}, values=values))
    return normalize(Dataset(attributes=tuple(attributes), instances=tuple(instances)))


def random_weights(rng: np.random.Generator, dataset: Dataset, zero_fraction: float = 0.2) -> dict[str, float]:
    """Random nonnegative weights over the feature attributes, normalized to sum 1."""
    raw = {}
    for attr in dataset.feature_attributes:
        raw[attr.name] = 0.0 if rng.random() < zero_fraction else float(rng.random())
    if sum(raw.values()) == 0.0:
        raw[dataset.feature_attributes[0].name] = 1.0
    total = sum(raw.values())
    return {name: value / total for name, value in raw.items()}
