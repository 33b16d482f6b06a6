"""Headless reproductions: fixed-mental-model recovery and weight-convergence curves.

Both experiments drive the learner with a deterministic simulated user (a
mental-model oracle) over seeded synthetic datasets, since the original label
sets are not reproducible. The proof-of-concept checks that the two attributes
defining the oracle end up with the two largest weights; the convergence
experiment measures the per-iteration weight shift delta_w over permuted label
orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dataset import (
    MISSING,
    Attribute,
    AttributeKind,
    AttributeRole,
    Dataset,
    Instance,
    is_missing,
    normalize,
)
from .model import ModelState, SimilarityLabel, compute_weights, weight_ranking


@dataclass(frozen=True)
class MentalModelOracle:
    """Deterministic pair-scoring rule standing in for a user; symmetric by construction.

    ``score_fn`` returns the similarity in [0, 1] or ``None`` when the pair
    cannot be assessed (required attribute missing).
    """

    name: str
    score_fn: Callable[[Instance, Instance], float | None]

    def score(self, a: Instance, b: Instance) -> float | None:
        return self.score_fn(a, b)


def age_team_oracle(
    dataset: Dataset,
    age_attr: str = "age",
    team_attr: str = "team",
    age_window: float = 1.0,
) -> MentalModelOracle:
    """The fixed mental model: 1.0 if ages within the window AND same team,
    0.5 if exactly one condition holds, 0.0 otherwise.

    The window is expressed in raw attribute units; on a normalized dataset it
    is converted using the attribute's recorded value domain.
    """
    for name, kind in ((age_attr, AttributeKind.NUMERICAL), (team_attr, AttributeKind.CATEGORICAL)):
        attr = dataset.attribute_map.get(name)
        if attr is None or not attr.is_feature or attr.kind is not kind:
            raise ValueError(f"oracle needs a {kind.value} feature attribute {name!r}")

    window = age_window
    age = dataset.attribute_map[age_attr]
    if dataset.normalized and age.observed_min is not None:
        span = age.observed_max - age.observed_min
        window = age_window / span if span > 0 else float("inf")

    def score(a: Instance, b: Instance) -> float | None:
        age_a, age_b = a.values[age_attr], b.values[age_attr]
        team_a, team_b = a.values[team_attr], b.values[team_attr]
        if is_missing(age_a) or is_missing(age_b) or is_missing(team_a) or is_missing(team_b):
            return None
        age_match = abs(age_a - age_b) <= window * (1.0 + 1e-9)
        team_match = team_a == team_b
        if age_match and team_match:
            return 1.0
        if age_match or team_match:
            return 0.5
        return 0.0

    return MentalModelOracle(name=f"{age_attr}+{team_attr}", score_fn=score)


def oracle_label(
    a: Instance, b: Instance, oracle: MentalModelOracle, created_at: float = 0.0
) -> SimilarityLabel | None:
    """Score one pair with the oracle; ``None`` when the pair must be skipped."""
    score = oracle.score(a, b)
    if score is None:
        return None
    return SimilarityLabel(a=a.id, b=b.id, score=score, created_at=created_at, source="oracle")


def delta_w(prev: ModelState, nxt: ModelState) -> float:
    """Halved L1 shift between weight vectors; 1.0 means all mass moved."""
    if set(prev.weights) != set(nxt.weights):
        raise ValueError("delta_w needs identical attribute sets")
    return 0.5 * sum(abs(nxt.weights[name] - prev.weights[name]) for name in prev.weights)


def sample_balanced_pairs(
    dataset: Dataset,
    oracle: MentalModelOracle,
    n_labels: int,
    rng: np.random.Generator,
) -> list[SimilarityLabel]:
    """Draw labeled pairs balanced across the oracle's three scores (1.0 / 0.5 / 0.0).

    Raises:
        ValueError: the dataset cannot supply enough pairs for some score.
    """
    instances = sorted(dataset.instances, key=lambda inst: inst.id)
    buckets: dict[float, list[tuple[str, str]]] = {1.0: [], 0.5: [], 0.0: []}
    skipped = 0
    for i in range(len(instances)):
        for j in range(i + 1, len(instances)):
            score = oracle.score(instances[i], instances[j])
            if score is None:
                skipped += 1
                continue
            buckets[score].append((instances[i].id, instances[j].id))

    quotas = {score: n_labels // 3 for score in (1.0, 0.5, 0.0)}
    for score in (1.0, 0.5, 0.0):
        if sum(quotas.values()) >= n_labels:
            break
        quotas[score] += 1

    labels: list[SimilarityLabel] = []
    for score in (1.0, 0.5, 0.0):
        pool = buckets[score]
        if len(pool) < quotas[score]:
            raise ValueError(
                f"dataset too small for balanced pairs: need {quotas[score]} pairs "
                f"with score {score}, found {len(pool)}"
            )
        chosen = rng.choice(len(pool), size=quotas[score], replace=False)
        for index in sorted(int(c) for c in chosen):
            a, b = pool[index]
            labels.append(
                SimilarityLabel(a=a, b=b, score=score, created_at=float(len(labels)), source="oracle")
            )
    return labels


@dataclass(frozen=True)
class PocReport:
    """Outcome of one fixed-mental-model run."""

    ranking: list[tuple[str, float]]
    top2_matches: bool
    model: ModelState
    labels: list[SimilarityLabel]
    oracle_attributes: tuple[str, str]


def run_proof_of_concept(
    dataset: Dataset,
    oracle: MentalModelOracle,
    n_labels: int = 10,
    pair_source: str = "random-balanced",
    seed: int = 0,
    scripted_pairs: Sequence[tuple[str, str]] | None = None,
    oracle_attributes: tuple[str, str] = ("age", "team"),
) -> PocReport:
    """Label ``n_labels`` pairs with the oracle, train, and check the top-2 weights.

    ``pair_source`` is ``random-balanced`` (balanced across the three oracle
    scores, seeded) or ``scripted`` (explicit id pairs).
    """
    raw = dataset
    trained = dataset if dataset.normalized else normalize(dataset)
    for name in oracle_attributes:
        if name not in trained.attribute_map:
            raise ValueError(f"oracle attribute {name!r} not in schema")

    if pair_source == "scripted":
        if not scripted_pairs:
            raise ValueError("scripted pair source needs scripted_pairs")
        labels = []
        for index, (a, b) in enumerate(scripted_pairs[:n_labels]):
            label = oracle_label(raw.instance(a), raw.instance(b), oracle, created_at=float(index))
            if label is not None:
                labels.append(label)
    elif pair_source == "random-balanced":
        labels = sample_balanced_pairs(raw, oracle, n_labels, np.random.default_rng(seed))
    else:
        raise ValueError(f"unknown pair source {pair_source!r}")

    model = compute_weights(labels, trained)
    ranking = weight_ranking(model)
    top2 = {name for name, _ in ranking[:2]}
    return PocReport(
        ranking=ranking,
        top2_matches=not model.cold_start and top2 == set(oracle_attributes),
        model=model,
        labels=labels,
        oracle_attributes=oracle_attributes,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """delta_w per run and iteration (iterations 2..labels_per_run), plus aggregates."""

    runs: int
    labels_per_run: int
    delta_w: np.ndarray
    mean_delta_w: np.ndarray
    min_delta_w: np.ndarray
    max_delta_w: np.ndarray

    def iteration_mean(self, iteration: int) -> float:
        """Mean delta_w at a learning iteration (2-based)."""
        return float(self.mean_delta_w[iteration - 2])

    def series_rows(self) -> list[tuple[int, float, float, float]]:
        return [
            (i + 2, float(self.mean_delta_w[i]), float(self.min_delta_w[i]), float(self.max_delta_w[i]))
            for i in range(len(self.mean_delta_w))
        ]

    def to_table(self) -> str:
        lines = [f"runs={self.runs} labels_per_run={self.labels_per_run}",
                 "iteration  mean_dw   min_dw    max_dw"]
        for iteration, mean, lo, hi in self.series_rows():
            lines.append(f"{iteration:9d}  {mean:.6f}  {lo:.6f}  {hi:.6f}")
        return "\n".join(lines)


def run_convergence(
    dataset: Dataset,
    label_pool: Sequence[SimilarityLabel],
    runs: int = 100,
    seed: int = 0,
) -> ConvergenceReport:
    """Permute the pool per run, feed labels one at a time, record the weight shift.

    Reproducible bit-for-bit for a given seed.
    """
    if len(label_pool) < 2:
        raise ValueError("label pool needs at least 2 labels")
    trained = dataset if dataset.normalized else normalize(dataset)
    pool = list(label_pool)
    n = len(pool)
    rng = np.random.default_rng(seed)
    deltas = np.zeros((runs, n - 1), dtype=float)
    for run in range(runs):
        order = rng.permutation(n)
        shuffled = [pool[i] for i in order]
        previous = compute_weights(shuffled[:1], trained)
        for count in range(2, n + 1):
            state = compute_weights(shuffled[:count], trained)
            deltas[run, count - 2] = delta_w(previous, state)
            previous = state
    return ConvergenceReport(
        runs=runs,
        labels_per_run=n,
        delta_w=deltas,
        mean_delta_w=deltas.mean(axis=0),
        min_delta_w=deltas.min(axis=0),
        max_delta_w=deltas.max(axis=0),
    )


_TEAM_NAMES = ("Alba FC", "Borussia Nord", "Calcio Verde", "Dynamo East", "Estrella CF",
               "Fjord United", "Grampus Blue", "Hellas Port")


def synthetic_dataset(
    n_instances: int = 60,
    seed: int = 0,
    *,
    n_teams: int = 5,
    age_range: tuple[int, int] = (17, 36),
    inert_attributes: bool = True,
    correlated_attributes: bool = False,
    noise_attributes: tuple[int, int, int] = (0, 0, 0),
    missing_rate: float = 0.0,
) -> Dataset:
    """Seeded synthetic player dataset with an ``age``/``team`` signal.

    ``inert_attributes`` adds attributes that are independent of any oracle by
    construction (unique tokens, constants, uniform flags): their pairwise
    distances carry no variance, so they can never earn weight. At ten labels
    the Pearson sampling noise is around 1/3, so genuinely random independent
    attributes would routinely pick up spurious weight; structural independence
    is what keeps the mental-model recovery statistics meaningful.

    ``correlated_attributes`` adds companions entangled with age (games played,
    national-player flag), mirroring how real performance attributes co-vary
    with the mental model. ``noise_attributes`` adds (numerical, categorical,
    boolean) counts of genuinely random attributes for stress tests.
    """
    rng = np.random.default_rng(seed)
    lo, hi = age_range
    ages = rng.integers(lo, hi + 1, size=n_instances).astype(float)
    teams = [_TEAM_NAMES[int(t)] for t in rng.integers(0, min(n_teams, len(_TEAM_NAMES)), size=n_instances)]

    attributes: list[Attribute] = [
        Attribute("id", AttributeKind.CATEGORICAL, AttributeRole.ID),
        Attribute("name", AttributeKind.CATEGORICAL, AttributeRole.DISPLAY),
        Attribute("age", AttributeKind.NUMERICAL),
        Attribute("team", AttributeKind.CATEGORICAL),
    ]
    columns: dict[str, list] = {
        "age": list(ages),
        "team": list(teams),
    }

    if inert_attributes:
        attributes += [
            Attribute("registration_code", AttributeKind.CATEGORICAL),
            Attribute("academy_id", AttributeKind.CATEGORICAL),
            Attribute("scout_reference", AttributeKind.CATEGORICAL),
            Attribute("pitch_length", AttributeKind.NUMERICAL),
            Attribute("founded_year", AttributeKind.NUMERICAL),
            Attribute("registered", AttributeKind.BOOLEAN),
            Attribute("suspended", AttributeKind.BOOLEAN),
            Attribute("medical_cleared", AttributeKind.BOOLEAN),
        ]
        columns["registration_code"] = [f"REG-{i:04d}" for i in range(n_instances)]
        columns["academy_id"] = [f"ACA-{i:04d}" for i in range(n_instances)]
        columns["scout_reference"] = [f"SCT-{i:04d}" for i in range(n_instances)]
        columns["pitch_length"] = [105.0] * n_instances
        columns["founded_year"] = [1903.0] * n_instances
        columns["registered"] = [True] * n_instances
        columns["suspended"] = [False] * n_instances
        columns["medical_cleared"] = [True] * n_instances

    if correlated_attributes:
        attributes += [
            Attribute("league_games", AttributeKind.NUMERICAL),
            Attribute("national_player", AttributeKind.BOOLEAN),
        ]
        span = max(hi - lo, 1)
        games = 8.0 * (ages - lo) / span + rng.normal(0.0, 3.0, size=n_instances)
        columns["league_games"] = [float(max(0.0, g)) for g in games]
        midpoint = (lo + hi) / 2.0
        flips = rng.random(n_instances) < 0.25
        columns["national_player"] = [
            bool((age >= midpoint) ^ flip) for age, flip in zip(ages, flips)
        ]

    n_num, n_cat, n_bool = noise_attributes
    for i in range(n_num):
        name = f"noise_num_{i}"
        attributes.append(Attribute(name, AttributeKind.NUMERICAL))
        columns[name] = [float(v) for v in rng.random(n_instances)]
    for i in range(n_cat):
        name = f"noise_cat_{i}"
        attributes.append(Attribute(name, AttributeKind.CATEGORICAL))
        columns[name] = [f"C{int(v)}" for v in rng.integers(0, 12, size=n_instances)]
    for i in range(n_bool):
        name = f"noise_bool_{i}"
        attributes.append(Attribute(name, AttributeKind.BOOLEAN))
        columns[name] = [bool(v) for v in rng.random(n_instances) < 0.5]

    feature_names = [a.name for a in attributes if a.is_feature]
    instances = []
    for i in range(n_instances):
        values: dict = {name: columns[name][i] for name in feature_names}
        if missing_rate > 0.0:
            for name in feature_names:
                if rng.random() < missing_rate:
                    values[name] = MISSING
        instances.append(
            Instance(id=f"p{i:04d}", display={"name": f"Player {i:04d}"}, values=values)
        )
    return Dataset(attributes=tuple(attributes), instances=tuple(instances), normalized=False)
