"""Mixed-type record collections: schema parsing, loading, normalization, sparsity filtering.

A dataset is a schema (attributes with a kind and a role) plus a list of
instances. Feature attributes carry the values the similarity model works on;
display attributes only decorate instances in user-facing views; exactly one
attribute provides the instance id. Missing cells are kept as an explicit
marker and never imputed.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from pathlib import Path


class AttributeKind(str, Enum):
    NUMERICAL = "numerical"
    CATEGORICAL = "categorical"
    BOOLEAN = "boolean"


class AttributeRole(str, Enum):
    FEATURE = "feature"
    DISPLAY = "display"
    ID = "id"


class _Missing:
    """Singleton marker for an absent attribute value."""

    __slots__ = ()
    _instance = None

    def __new__(cls) -> "_Missing":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MISSING"


MISSING = _Missing()

AttributeValue = float | str | bool | _Missing


def is_missing(value: AttributeValue) -> bool:
    return value is MISSING


class SchemaError(ValueError):
    """Schema document cannot be parsed or violates schema rules."""


class RecordError(ValueError):
    """A record conflicts with the schema (reported with row/attribute location)."""


class DegenerateDatasetError(ValueError):
    """A transformation left the dataset without feature attributes or instances."""


class UnknownInstanceError(LookupError):
    """An operation referenced an instance id not present in the dataset."""

    def __init__(self, instance_id: str):
        super().__init__(f"unknown instance id {instance_id!r}")
        self.instance_id = instance_id


@dataclass(frozen=True)
class Attribute:
    """One schema column.

    ``observed_min``/``observed_max`` are filled for numerical attributes during
    normalization; ``category_frequencies`` for categorical attributes (counts of
    non-missing tokens). ``zero_variance`` marks attributes whose non-missing
    values are all equal; they can never earn model weight.
    """

    name: str
    kind: AttributeKind
    role: AttributeRole = AttributeRole.FEATURE
    observed_min: float | None = None
    observed_max: float | None = None
    category_frequencies: dict[str, int] | None = None
    zero_variance: bool = False

    @property
    def is_feature(self) -> bool:
        return self.role is AttributeRole.FEATURE

    @property
    def n_observations(self) -> int:
        """Count of non-missing observations backing the frequency table."""
        if self.category_frequencies is None:
            return 0
        return sum(self.category_frequencies.values())


@dataclass(frozen=True)
class Instance:
    """One record: opaque id, display fields, and feature values keyed by attribute name."""

    id: str
    display: dict[str, str]
    values: dict[str, AttributeValue]


_KIND_TYPES = {
    AttributeKind.NUMERICAL: (int, float),
    AttributeKind.CATEGORICAL: (str,),
    AttributeKind.BOOLEAN: (bool,),
}


@dataclass(frozen=True)
class Dataset:
    """Immutable schema + instances. Transformations return new datasets."""

    attributes: tuple[Attribute, ...]
    instances: tuple[Instance, ...]
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "instances", tuple(self.instances))
        self._validate()

    def _validate(self) -> None:
        seen_attrs: set[str] = set()
        for attr in self.attributes:
            if attr.name in seen_attrs:
                raise SchemaError(f"duplicate attribute name {attr.name!r}")
            seen_attrs.add(attr.name)
        feature_names = {a.name for a in self.attributes if a.is_feature}
        seen_ids: set[str] = set()
        for inst in self.instances:
            if inst.id in seen_ids:
                raise RecordError(f"duplicate instance id {inst.id!r}")
            seen_ids.add(inst.id)
            for name, value in inst.values.items():
                if name not in feature_names:
                    raise RecordError(
                        f"instance {inst.id!r}: value for {name!r} which is not a feature attribute"
                    )
                if value is MISSING:
                    continue
                kind = self.attribute_map[name].kind
                if kind is AttributeKind.NUMERICAL and isinstance(value, bool):
                    raise RecordError(
                        f"instance {inst.id!r}, attribute {name!r}: boolean value for numerical attribute"
                    )
                if not isinstance(value, _KIND_TYPES[kind]):
                    raise RecordError(
                        f"instance {inst.id!r}, attribute {name!r}: "
                        f"value {value!r} does not match kind {kind.value}"
                    )
                if self.normalized and kind is AttributeKind.NUMERICAL and not 0.0 <= value <= 1.0:
                    raise RecordError(
                        f"instance {inst.id!r}, attribute {name!r}: "
                        f"normalized value {value!r} outside [0, 1]"
                    )
            for name in feature_names:
                if name not in inst.values:
                    raise RecordError(f"instance {inst.id!r}: no entry for feature attribute {name!r}")

    @cached_property
    def attribute_map(self) -> dict[str, Attribute]:
        return {a.name: a for a in self.attributes}

    @cached_property
    def feature_attributes(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.attributes if a.is_feature)

    @cached_property
    def by_id(self) -> dict[str, Instance]:
        return {inst.id: inst for inst in self.instances}

    def instance(self, instance_id: str) -> Instance:
        try:
            return self.by_id[instance_id]
        except KeyError:
            raise UnknownInstanceError(instance_id) from None

    def features_of_kind(self, kind: AttributeKind) -> tuple[Attribute, ...]:
        return tuple(a for a in self.feature_attributes if a.kind is kind)

    def coverage(self, attribute_name: str) -> float:
        """Fraction of instances with a non-missing value for the attribute."""
        if not self.instances:
            return 0.0
        present = sum(
            1 for inst in self.instances if not is_missing(inst.values.get(attribute_name, MISSING))
        )
        return present / len(self.instances)


def parse_schema(text: str) -> list[Attribute]:
    """Parse a schema document (JSON: a list or ``{"attributes": [...]}``).

    Each entry needs ``name`` and ``kind``; ``role`` defaults to ``feature``.
    Exactly one attribute must have role ``id`` and at least one must be a
    feature.

    Raises:
        SchemaError: on malformed JSON, unknown kind/role, duplicate names,
            or a missing/duplicated id attribute.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"schema is not valid JSON: {exc}") from exc
    entries = doc.get("attributes") if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise SchemaError("schema must be a list of attributes or {'attributes': [...]}")

    attributes: list[Attribute] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "name" not in entry or "kind" not in entry:
            raise SchemaError(f"schema entry {i}: need at least 'name' and 'kind'")
        name = str(entry["name"])
        if name in seen:
            raise SchemaError(f"duplicate attribute name {name!r}")
        seen.add(name)
        try:
            kind = AttributeKind(entry["kind"])
        except ValueError:
            raise SchemaError(f"attribute {name!r}: unknown kind {entry['kind']!r}") from None
        try:
            role = AttributeRole(entry.get("role", "feature"))
        except ValueError:
            raise SchemaError(f"attribute {name!r}: unknown role {entry['role']!r}") from None
        attributes.append(Attribute(name=name, kind=kind, role=role))

    id_attrs = [a for a in attributes if a.role is AttributeRole.ID]
    if len(id_attrs) != 1:
        raise SchemaError(f"schema must declare exactly one id attribute, found {len(id_attrs)}")
    if not any(a.is_feature for a in attributes):
        raise SchemaError("schema declares no feature attributes")
    return attributes


_TRUE_TOKENS = {"true", "1"}
_FALSE_TOKENS = {"false", "0"}


def _parse_cell(token: str, kind: AttributeKind, *, strict: bool, where: str) -> AttributeValue:
    token = token.strip()
    if token == "":
        return MISSING
    if kind is AttributeKind.CATEGORICAL:
        return token
    if kind is AttributeKind.BOOLEAN:
        lowered = token.lower()
        if lowered in _TRUE_TOKENS:
            return True
        if lowered in _FALSE_TOKENS:
            return False
        if strict:
            raise RecordError(f"{where}: {token!r} is not a boolean")
        return MISSING
    try:
        value = float(token)
    except ValueError:
        if strict:
            raise RecordError(f"{where}: {token!r} is not numerical") from None
        return MISSING
    if not math.isfinite(value):
        if strict:
            raise RecordError(f"{where}: non-finite numerical value {token!r}")
        return MISSING
    return value


def parse_records(text: str, attributes: list[Attribute], *, strict: bool = False) -> list[Instance]:
    """Parse delimited records (header row of attribute names, empty cell = missing).

    Unparsable cells become missing unless ``strict`` is set, in which case they
    raise with the row/attribute location. Rows without an id and rows in
    columns unknown to the schema always raise.
    """
    by_name = {a.name: a for a in attributes}
    id_attr = next(a for a in attributes if a.role is AttributeRole.ID)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise RecordError("records are empty: no header row") from None
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        raise RecordError("duplicate column in records header")
    for col in header:
        if col not in by_name:
            raise RecordError(f"records column {col!r} is not in the schema")

    instances: list[Instance] = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if len(row) > len(header):
            raise RecordError(f"row {row_no}: {len(row)} cells for {len(header)} columns")
        cells = dict(zip(header, row))
        instance_id = cells.get(id_attr.name, "").strip()
        if not instance_id:
            raise RecordError(f"row {row_no}: missing id value ({id_attr.name!r})")

        display: dict[str, str] = {}
        values: dict[str, AttributeValue] = {}
        for attr in attributes:
            if attr.role is AttributeRole.ID:
                continue
            raw = cells.get(attr.name, "")
            if attr.role is AttributeRole.DISPLAY:
                if raw.strip():
                    display[attr.name] = raw.strip()
                continue
            values[attr.name] = _parse_cell(
                raw, attr.kind, strict=strict, where=f"row {row_no}, attribute {attr.name!r}"
            )
        instances.append(Instance(id=instance_id, display=display, values=values))
    return instances


def load_dataset(
    schema_path: str | Path, records_path: str | Path, *, strict: bool = False
) -> Dataset:
    """Load an unnormalized dataset from a schema file and a records file."""
    schema_text = Path(schema_path).read_text(encoding="utf-8")
    records_text = Path(records_path).read_text(encoding="utf-8")
    attributes = parse_schema(schema_text)
    instances = parse_records(records_text, attributes, strict=strict)
    return Dataset(attributes=tuple(attributes), instances=tuple(instances), normalized=False)


def bundled_sample_paths() -> tuple[Path, Path]:
    """Schema and records paths of the bundled soccer player sample."""
    from importlib import resources

    base = resources.files("simlearn") / "data"
    return Path(str(base / "soccer_schema.json")), Path(str(base / "soccer_players.csv"))


def normalize(dataset: Dataset, *, force: bool = False) -> Dataset:
    """Rescale numerical features to [0, 1] and index categorical frequencies.

    Each non-missing numerical value v becomes (v - min) / (max - min) over the
    attribute's observed non-missing values; the observed bounds are recorded on
    the attribute. Constant attributes map to 0.0 and are flagged zero-variance.
    Missing values are left untouched.

    Raises:
        ValueError: if the dataset is already normalized (unless ``force``).
    """
    if dataset.normalized and not force:
        raise ValueError("dataset is already normalized")

    new_attributes: list[Attribute] = []
    numeric_bounds: dict[str, tuple[float, float] | None] = {}
    for attr in dataset.attributes:
        if not attr.is_feature:
            new_attributes.append(attr)
            continue
        observed = [
            inst.values[attr.name] for inst in dataset.instances
            if not is_missing(inst.values[attr.name])
        ]
        if attr.kind is AttributeKind.NUMERICAL:
            if not observed:
                numeric_bounds[attr.name] = None
                new_attributes.append(replace(attr, zero_variance=True))
                continue
            lo, hi = min(observed), max(observed)
            numeric_bounds[attr.name] = (lo, hi)
            new_attributes.append(
                replace(attr, observed_min=lo, observed_max=hi, zero_variance=lo == hi)
            )
        elif attr.kind is AttributeKind.CATEGORICAL:
            freq = dict(sorted(Counter(observed).items()))
            new_attributes.append(
                replace(attr, category_frequencies=freq, zero_variance=len(freq) <= 1)
            )
        else:
            new_attributes.append(replace(attr, zero_variance=len(set(observed)) <= 1))

    new_instances: list[Instance] = []
    for inst in dataset.instances:
        values = dict(inst.values)
        for name, bounds in numeric_bounds.items():
            v = values[name]
            if is_missing(v) or bounds is None:
                continue
            lo, hi = bounds
            values[name] = 0.0 if lo == hi else (v - lo) / (hi - lo)
        new_instances.append(replace(inst, values=values))

    return Dataset(attributes=tuple(new_attributes), instances=tuple(new_instances), normalized=True)


def drop_sparse(dataset: Dataset, min_coverage: float) -> Dataset:
    """Remove feature attributes, then instances, whose non-missing fraction is below threshold.

    Id and display attributes are never removed. On normalized datasets the
    categorical frequency tables are recomputed for the surviving instances.

    Raises:
        DegenerateDatasetError: if no feature attribute or no instance survives.
    """
    if not 0.0 < min_coverage <= 1.0:
        raise ValueError(f"min_coverage must be in (0, 1], got {min_coverage}")
    n = len(dataset.instances)
    if n == 0:
        raise DegenerateDatasetError("dataset has no instances")

    kept_attrs = [
        a for a in dataset.attributes
        if not a.is_feature or dataset.coverage(a.name) >= min_coverage
    ]
    kept_features = [a.name for a in kept_attrs if a.is_feature]
    if not kept_features:
        raise DegenerateDatasetError(
            f"no feature attribute reaches coverage {min_coverage}"
        )

    kept_instances = []
    for inst in dataset.instances:
        present = sum(1 for name in kept_features if not is_missing(inst.values[name]))
        if present / len(kept_features) >= min_coverage:
            values = {name: inst.values[name] for name in kept_features}
            kept_instances.append(replace(inst, values=values))
    if not kept_instances:
        raise DegenerateDatasetError(f"no instance reaches coverage {min_coverage}")

    if dataset.normalized:
        refreshed = []
        for attr in kept_attrs:
            if attr.is_feature and attr.kind is AttributeKind.CATEGORICAL:
                observed = [
                    inst.values[attr.name] for inst in kept_instances
                    if not is_missing(inst.values[attr.name])
                ]
                freq = dict(sorted(Counter(observed).items()))
                refreshed.append(
                    replace(attr, category_frequencies=freq, zero_variance=len(freq) <= 1)
                )
            else:
                refreshed.append(attr)
        kept_attrs = refreshed

    return Dataset(
        attributes=tuple(kept_attrs),
        instances=tuple(kept_instances),
        normalized=dataset.normalized,
    )
