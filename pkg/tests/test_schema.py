import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phonofeat.errors import MalformedVectorError, SchemaError
from phonofeat.schema import (
    DEFAULT_SCHEMA, FeatureSchema, PFVector, binarize, debinarize, load_schema,
)

P = {"symbol_type": "phoneme", "cv": "consonant", "voicing": "unvoiced",
     "place": "bilabial", "manner": "plosive"}
A = {"symbol_type": "phoneme", "cv": "vowel", "voicing": "voiced", "frontness": "front",
     "openness": "open", "roundedness": "unrounded", "stress": "unstressed"}


def test_default_schema_layout():
    s = load_schema()
    assert s.total_bits == 60
    assert s.names == ("symbol_type", "cv", "voicing", "frontness", "openness",
                       "roundedness", "stress", "place", "manner", "diacritic")
    assert [f.width for f in s.features] == [4, 2, 2, 5, 7, 2, 2, 11, 9, 16]
    assert sum(f.width for f in s.features) == 60


def test_offsets_are_contiguous():
    offset = 0
    for f in DEFAULT_SCHEMA.features:
        assert f.bit_offset == offset
        offset += f.width
    assert offset == DEFAULT_SCHEMA.total_bits


def test_minimal_schema_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"features": [{"name": "cv", "values": ["c", "v"]}]}))
    s = load_schema(path)
    assert s.total_bits == 2
    assert s["cv"].nullable


def test_default_schema_round_trips_through_json(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(DEFAULT_SCHEMA.to_json()))
    assert load_schema(path) == DEFAULT_SCHEMA


@pytest.mark.parametrize("features, message", [
    ([{"name": "a", "values": ["x"]}, {"name": "a", "values": ["y"]}], "duplicate feature"),
    ([{"name": "a", "values": ["x", "x"]}], "duplicate value"),
    ([{"name": "a", "values": []}], "empty value list"),
    ([{"name": "a", "values": ["x"]}, {"name": "b", "values": ["y"], "bit_offset": 3}],
     "non-contiguous"),
    ([], "no features"),
])
def test_bad_schema_files(tmp_path, features, message):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"features": features}))
    with pytest.raises(SchemaError, match=message):
        load_schema(path)


def test_schema_file_not_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(SchemaError):
        load_schema(path)


def test_binarize_counts():
    assert binarize(P).sum() == 5
    assert binarize(A).sum() == 7
    assert binarize({"symbol_type": "word_boundary"}).sum() == 1


def test_binarize_bit_positions():
    bits = binarize(P)
    on = {DEFAULT_SCHEMA.bit_labels()[i] for i in np.flatnonzero(bits)}
    assert on == {"symbol_type=phoneme", "cv=consonant", "voicing=unvoiced",
                  "place=bilabial", "manner=plosive"}


@pytest.mark.parametrize("record, message", [
    ({"symbol_type": "phoneme", "colour": "red"}, "unknown feature"),
    ({"symbol_type": "phoneme", "cv": "semivowel"}, "unknown value"),
    ({"cv": "vowel"}, "non-nullable"),
])
def test_binarize_errors(record, message):
    with pytest.raises(SchemaError, match=message):
        binarize(record)


def test_debinarize_inverse_of_p():
    rec = debinarize(binarize(P))
    assert {k: v for k, v in rec.items() if v is not None} == P


def test_all_zeros_vector():
    with pytest.raises(MalformedVectorError, match="non-nullable"):
        debinarize(np.zeros(60, dtype=np.uint8))
    nullable = FeatureSchema.from_specs([("a", ("x", "y"), True), ("b", ("z",), True)])
    assert debinarize([0, 0, 0], nullable) == {"a": None, "b": None}


def test_two_bits_in_place_block():
    bits = binarize(P)
    bits[DEFAULT_SCHEMA["place"].bit_of("velar")] = 1
    with pytest.raises(MalformedVectorError, match="place"):
        debinarize(bits)


def test_debinarize_wrong_length():
    with pytest.raises(MalformedVectorError):
        debinarize(np.zeros(59))


def test_pfvector_is_frozen():
    v = PFVector.from_categorical(P)
    with pytest.raises(ValueError):
        v.bits[0] = 0
    assert v == PFVector.from_categorical(dict(P))


@st.composite
def categorical_records(draw):
    rec = {}
    for f in DEFAULT_SCHEMA.features:
        choices = list(f.values) + ([None] if f.nullable else [])
        rec[f.name] = draw(st.sampled_from(choices))
    return rec


@given(categorical_records())
def test_round_trip_property(rec):
    bits = binarize(rec)
    assert debinarize(bits) == rec
    for f in DEFAULT_SCHEMA.features:
        assert bits[f.bit_slice].sum() <= 1


@given(categorical_records())
def test_binarize_deterministic(rec):
    assert np.array_equal(binarize(rec), binarize(dict(rec)))
