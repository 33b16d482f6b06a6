"""Loading, normalization, and sparsity filtering."""

from __future__ import annotations

import numpy as np
import pytest

from helpers import random_dataset
from simlearn.dataset import (
    MISSING,
    Attribute,
    AttributeKind,
    AttributeRole,
    Dataset,
    DegenerateDatasetError,
    Instance,
    RecordError,
    SchemaError,
    bundled_sample_paths,
    drop_sparse,
    is_missing,
    load_dataset,
    normalize,
    parse_records,
    parse_schema,
)

SCHEMA = """
[
  {"name": "id", "kind": "categorical", "role": "id"},
  {"name": "name", "kind": "categorical", "role": "display"},
  {"name": "age", "kind": "numerical"},
  {"name": "team", "kind": "categorical"},
  {"name": "size", "kind": "numerical"},
  {"name": "active", "kind": "boolean"}
]
"""


def make(records: str) -> Dataset:
    attrs = parse_schema(SCHEMA)
    instances = parse_records(records, attrs)
    return Dataset(attributes=tuple(attrs), instances=tuple(instances))


class TestLoad:
    def test_basic_construction(self):
        ds = make("id,name,age,team,size,active\np1,A,24,Red,1.8,true\np2,B,30,Blue,1.7,0\np3,C,22,Red,1.9,false\n")
        assert len(ds.instances) == 3
        assert not ds.normalized
        assert ds.instance("p1").values["age"] == 24.0
        assert ds.instance("p2").values["active"] is False

    def test_empty_cell_becomes_missing(self):
        ds = make("id,age,team,size,active\np1,24,Red,,true\n")
        assert ds.instance("p1").values["size"] is MISSING

    def test_absent_column_becomes_missing(self):
        ds = make("id,age,team\np1,24,Red\n")
        assert ds.instance("p1").values["size"] is MISSING
        assert ds.instance("p1").values["active"] is MISSING

    def test_duplicate_id_rejected(self):
        with pytest.raises(RecordError, match="p1"):
            make("id,age\np1,24\np1,30\n")

    def test_missing_id_rejected(self):
        with pytest.raises(RecordError, match="row 2"):
            make("id,age\n,24\n")

    def test_unknown_column_rejected(self):
        with pytest.raises(RecordError, match="salary"):
            make("id,age,salary\np1,24,100\n")

    def test_unparsable_cell_lenient(self):
        ds = make("id,age,active\np1,old,maybe\n")
        assert ds.instance("p1").values["age"] is MISSING
        assert ds.instance("p1").values["active"] is MISSING

    def test_unparsable_cell_strict(self):
        attrs = parse_schema(SCHEMA)
        with pytest.raises(RecordError, match=r"row 2, attribute 'age'"):
            parse_records("id,age\np1,old\n", attrs, strict=True)

    def test_boolean_tokens(self):
        ds = make("id,active\np1,TRUE\np2,False\np3,1\np4,0\n")
        values = [ds.instance(f"p{i}").values["active"] for i in (1, 2, 3, 4)]
        assert values == [True, False, True, False]

    def test_display_goes_to_display_map(self):
        ds = make("id,name,age\np1,Ada,24\n")
        assert ds.instance("p1").display == {"name": "Ada"}
        assert "name" not in ds.instance("p1").values

    def test_bundled_sample_loads(self):
        schema, records = bundled_sample_paths()
        ds = load_dataset(schema, records)
        assert len(ds.instances) >= 50
        assert {a.kind for a in ds.feature_attributes} == set(AttributeKind)


class TestSchema:
    def test_not_json(self):
        with pytest.raises(SchemaError, match="JSON"):
            parse_schema("age: numerical")

    def test_unknown_kind(self):
        with pytest.raises(SchemaError, match="kind"):
            parse_schema('[{"name": "id", "kind": "categorical", "role": "id"}, {"name": "x", "kind": "date"}]')

    def test_duplicate_name(self):
        with pytest.raises(SchemaError, match="duplicate"):
            parse_schema('[{"name": "x", "kind": "numerical"}, {"name": "x", "kind": "numerical"}]')

    def test_exactly_one_id(self):
        with pytest.raises(SchemaError, match="id"):
            parse_schema('[{"name": "x", "kind": "numerical"}]')

    def test_kind_value_mismatch_on_construction(self):
        attrs = (
            Attribute("id", AttributeKind.CATEGORICAL, AttributeRole.ID),
            Attribute("age", AttributeKind.NUMERICAL),
        )
        with pytest.raises(RecordError, match="age"):
            Dataset(attributes=attrs, instances=(Instance("p1", {}, {"age": "old"}),))

    def test_feature_entry_required(self):
        attrs = (
            Attribute("id", AttributeKind.CATEGORICAL, AttributeRole.ID),
            Attribute("age", AttributeKind.NUMERICAL),
        )
        with pytest.raises(RecordError, match="no entry"):
            Dataset(attributes=attrs, instances=(Instance("p1", {}, {}),))


class TestNormalize:
    def test_observed_domain_maps_to_unit_interval(self):
        # endpoints of the observed domain land exactly on 0 and 1
        ds = make("id,size\np1,1.59\np2,2.03\np3,1.81\n")
        nds = normalize(ds)
        assert nds.instance("p1").values["size"] == 0.0
        assert nds.instance("p2").values["size"] == 1.0
        assert 0.0 < nds.instance("p3").values["size"] < 1.0
        attr = nds.attribute_map["size"]
        assert (attr.observed_min, attr.observed_max) == (1.59, 2.03)

    def test_constant_attribute_flagged(self):
        ds = make("id,age\np1,7\np2,7\np3,7\n")
        nds = normalize(ds)
        assert all(inst.values["age"] == 0.0 for inst in nds.instances)
        assert nds.attribute_map["age"].zero_variance

    def test_category_frequencies(self):
        ds = make("id,team\np1,FR\np2,FR\np3,DE\n")
        nds = normalize(ds)
        assert nds.attribute_map["team"].category_frequencies == {"DE": 1, "FR": 2}
        assert nds.attribute_map["team"].n_observations == 3

    def test_missing_untouched(self):
        ds = make("id,age,team\np1,24,\np2,,Red\n")
        nds = normalize(ds)
        assert nds.instance("p1").values["team"] is MISSING
        assert nds.instance("p2").values["age"] is MISSING
        assert nds.attribute_map["team"].category_frequencies == {"Red": 1}

    def test_double_normalize_rejected(self):
        nds = normalize(make("id,age\np1,1\np2,2\n"))
        with pytest.raises(ValueError, match="already"):
            normalize(nds)

    def test_forced_renormalize_is_identity(self):
        nds = normalize(make("id,age\np1,1\np2,2\np3,5\n"))
        again = normalize(nds, force=True)
        for a, b in zip(nds.instances, again.instances):
            assert a.values == b.values

    def test_order_preserved(self):
        rng = np.random.default_rng(3)
        raw = sorted(float(v) for v in rng.uniform(-100, 100, size=20))
        rows = "\n".join(f"p{i},{v}" for i, v in enumerate(raw))
        nds = normalize(make(f"id,age\n{rows}\n"))
        norm = [nds.instance(f"p{i}").values["age"] for i in range(20)]
        assert all(a < b for a, b in zip(norm, norm[1:]))

    def test_affine_invariance(self):
        rng = np.random.default_rng(4)
        raw = [float(v) for v in rng.uniform(0, 50, size=15)]
        rows_a = "\n".join(f"p{i},{v}" for i, v in enumerate(raw))
        rows_b = "\n".join(f"p{i},{3.7 * v + 11.0}" for i, v in enumerate(raw))
        nds_a = normalize(make(f"id,age\n{rows_a}\n"))
        nds_b = normalize(make(f"id,age\n{rows_b}\n"))
        for i in range(15):
            va = nds_a.instance(f"p{i}").values["age"]
            vb = nds_b.instance(f"p{i}").values["age"]
            assert abs(va - vb) < 1e-12

    def test_all_values_in_unit_interval(self):
        ds = random_dataset(np.random.default_rng(5))
        for inst in ds.instances:
            for attr in ds.features_of_kind(AttributeKind.NUMERICAL):
                v = inst.values[attr.name]
                assert is_missing(v) or 0.0 <= v <= 1.0


class TestDropSparse:
    def test_sparse_attribute_removed(self):
        rows = "\n".join(f"p{i},{i}," + ("x" if i == 0 else "") for i in range(10))
        ds = make(f"id,age,team\n{rows}\n")
        out = drop_sparse(ds, 0.5)
        assert "team" not in out.attribute_map
        assert "age" in out.attribute_map

    def test_fully_populated_unchanged(self):
        ds = make("id,name,age,team,size,active\np1,A,1,a,1.5,true\np2,B,2,b,1.6,false\n")
        out = drop_sparse(ds, 0.9)
        assert [a.name for a in out.attributes] == [a.name for a in ds.attributes]
        assert len(out.instances) == 2

    def test_min_coverage_bounds(self):
        ds = make("id,age\np1,1\n")
        with pytest.raises(ValueError):
            drop_sparse(ds, 0.0)
        assert len(drop_sparse(ds, 1.0).instances) == 1

    def test_sparse_instances_removed_after_attributes(self):
        # team is 40% covered and goes first; p3 then has no age either
        ds = make(
            "id,age,team\n"
            "p1,1,\np2,2,\np3,,x\np4,4,y\np5,5,\n"
        )
        out = drop_sparse(ds, 0.5)
        assert "team" not in out.attribute_map
        assert [inst.id for inst in out.instances] == ["p1", "p2", "p4", "p5"]

    def test_degenerate_rejected(self):
        ds = make("id,age\np1,\np2,\n")
        with pytest.raises(DegenerateDatasetError):
            drop_sparse(ds, 0.5)

    def test_never_introduces_missing_values(self):
        # dropping rows/columns may shift coverage ratios, but no surviving cell
        # ever flips to missing and no attribute gains missing cells
        rng = np.random.default_rng(6)
        for _ in range(20):
            ds = random_dataset(rng, n_instances=25, missing_rate=0.35)
            try:
                out = drop_sparse(ds, 0.5)
            except DegenerateDatasetError:
                continue
            for inst in out.instances:
                original = ds.instance(inst.id)
                for name, value in inst.values.items():
                    assert value is original.values[name] or value == original.values[name]
            for attr in out.feature_attributes:
                before = sum(1 for i in ds.instances if is_missing(i.values[attr.name]))
                after = sum(1 for i in out.instances if is_missing(i.values[attr.name]))
                assert after <= before

    def test_frequencies_recomputed_on_normalized(self):
        ds = normalize(make("id,age,team\np1,1,a\np2,2,a\np3,,b\np4,4,b\np5,5,b\n"))
        out = drop_sparse(ds, 0.75)
        # p3 dropped (age missing), so team frequencies shrink
        assert out.attribute_map["team"].category_frequencies == {"a": 2, "b": 2}
