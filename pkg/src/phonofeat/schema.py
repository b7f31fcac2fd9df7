"""Phonological feature schema and the one-hot binarization contract.

A schema is an ordered list of categorical features.  Each feature owns a
contiguous block of bits, one bit per value, in declaration order.  A NULL
value (``None``) is encoded as an all-zeros block, so nullable features do
not spend a bit on it.

Schema files are JSON::

    {"features": [{"name": "cv", "values": ["consonant", "vowel"],
                   "nullable": true}, ...]}

Bit offsets are derived from declaration order.  A file may carry an explicit
``bit_offset`` per feature; it is checked against the derived layout and
rejected on mismatch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .errors import MalformedVectorError, SchemaError

#: Categorical record: feature name -> value name, ``None`` meaning NULL.
Categorical = dict[str, Optional[str]]

DEFAULT_FEATURES: list[tuple[str, tuple[str, ...], bool]] = [
    ("symbol_type", ("phoneme", "silence", "word_boundary", "sentence_end"), False),
    ("cv", ("consonant", "vowel"), True),
    ("voicing", ("voiced", "unvoiced"), True),
    ("frontness", ("front", "near_front", "central", "near_back", "back"), True),
    (
        "openness",
        ("close", "near_close", "close_mid", "mid", "open_mid", "near_open", "open"),
        True,
    ),
    ("roundedness", ("rounded", "unrounded"), True),
    ("stress", ("stressed", "unstressed"), True),
    (
        "place",
        (
            "bilabial", "labiodental", "dental", "alveolar", "postalveolar",
            "retroflex", "palatal", "velar", "uvular", "pharyngeal", "glottal",
        ),
        True,
    ),
    (
        "manner",
        (
            "plosive", "nasal", "trill", "tap_flap", "fricative",
            "lateral_fricative", "approximant", "lateral_approximant", "affricate",
        ),
        True,
    ),
    (
        "diacritic",
        (
            "nasalized", "velarized", "labialized", "palatalized",
            "pharyngealized", "aspirated", "unreleased", "breathy_voiced",
            "creaky_voiced", "dental_mod", "apical", "laminal", "advanced",
            "retracted", "rhotic", "syllabic",
        ),
        True,
    ),
]


@dataclass(frozen=True)
class FeatureDef:
    name: str
    values: tuple[str, ...]
    bit_offset: int
    nullable: bool = True

    @property
    def width(self) -> int:
        return len(self.values)

    @property
    def bit_slice(self) -> slice:
        return slice(self.bit_offset, self.bit_offset + self.width)

    def bit_of(self, value: str) -> int:
        try:
            return self.bit_offset + self.values.index(value)
        except ValueError:
            raise SchemaError(
                f"unknown value {value!r} for feature {self.name!r}"
            ) from None


@dataclass(frozen=True)
class FeatureSchema:
    features: tuple[FeatureDef, ...]

    def __post_init__(self):
        _validate(self.features)

    @classmethod
    def from_specs(cls, specs) -> "FeatureSchema":
        """Build a schema from ``(name, values, nullable)`` triples,
        computing bit offsets from declaration order."""
        feats = []
        offset = 0
        for name, values, nullable in specs:
            feats.append(FeatureDef(name, tuple(values), offset, bool(nullable)))
            offset += len(values)
        return cls(tuple(feats))

    @property
    def total_bits(self) -> int:
        return sum(f.width for f in self.features)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def __getitem__(self, name: str) -> FeatureDef:
        for f in self.features:
            if f.name == name:
                return f
        raise SchemaError(f"unknown feature {name!r}")

    def __contains__(self, name) -> bool:
        return any(f.name == name for f in self.features)

    def bit_labels(self) -> list[str]:
        """Column headers for a binarized vector, ``feature=value``."""
        return [f"{f.name}={v}" for f in self.features for v in f.values]

    def null_record(self) -> Categorical:
        return {f.name: None for f in self.features}

    def to_json(self) -> dict:
        return {
            "features": [
                {"name": f.name, "values": list(f.values), "nullable": f.nullable}
                for f in self.features
            ]
        }


def _validate(features) -> None:
    if not features:
        raise SchemaError("schema declares no features")
    seen = set()
    expected_offset = 0
    for f in features:
        if f.name in seen:
            raise SchemaError(f"duplicate feature name {f.name!r}")
        seen.add(f.name)
        if not f.values:
            raise SchemaError(f"feature {f.name!r} has an empty value list")
        if len(set(f.values)) != len(f.values):
            dupes = sorted({v for v in f.values if f.values.count(v) > 1})
            raise SchemaError(f"duplicate value(s) {dupes} in feature {f.name!r}")
        if f.bit_offset != expected_offset:
            raise SchemaError(
                f"non-contiguous bit layout: feature {f.name!r} starts at "
                f"{f.bit_offset}, expected {expected_offset}"
            )
        expected_offset += len(f.values)


DEFAULT_SCHEMA = FeatureSchema.from_specs(DEFAULT_FEATURES)


def schema_from_json(data: Mapping) -> FeatureSchema:
    try:
        entries = data["features"]
    except (KeyError, TypeError):
        raise SchemaError("schema JSON must be an object with a 'features' list") from None
    if not isinstance(entries, list):
        raise SchemaError("'features' must be a list")
    feats = []
    offset = 0
    for i, entry in enumerate(entries):
        if not isinstance(entry, Mapping) or "name" not in entry or "values" not in entry:
            raise SchemaError(f"feature entry {i} needs 'name' and 'values'")
        values = entry["values"]
        if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
            raise SchemaError(f"feature {entry['name']!r}: 'values' must be a list of strings")
        declared = entry.get("bit_offset", offset)
        feats.append(
            FeatureDef(str(entry["name"]), tuple(values), int(declared),
                       bool(entry.get("nullable", True)))
        )
        offset += len(values)
    return FeatureSchema(tuple(feats))


def load_schema(path=None) -> FeatureSchema:
    """Load and validate a JSON schema file; ``None`` gives the built-in
    60-bit default."""
    if path is None:
        return DEFAULT_SCHEMA
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read schema file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"schema file {path} is not valid JSON: {exc}") from exc
    return schema_from_json(data)


def binarize(categorical: Mapping[str, Optional[str]], schema: FeatureSchema = DEFAULT_SCHEMA) -> np.ndarray:
    """One-hot encode a categorical record into a ``uint8`` vector.

    Features missing from ``categorical`` are treated as NULL.
    """
    bits = np.zeros(schema.total_bits, dtype=np.uint8)
    for name in categorical:
        if name not in schema:
            raise SchemaError(f"unknown feature {name!r}")
    for f in schema.features:
        value = categorical.get(f.name)
        if value is None:
            if not f.nullable:
                raise SchemaError(f"NULL given for non-nullable feature {f.name!r}")
            continue
        bits[f.bit_of(value)] = 1
    return bits


def debinarize(bits, schema: FeatureSchema = DEFAULT_SCHEMA) -> Categorical:
    bits = np.asarray(bits)
    if bits.ndim != 1 or bits.shape[0] != schema.total_bits:
        raise MalformedVectorError(
            f"expected a vector of length {schema.total_bits}, got shape {bits.shape}"
        )
    if not np.all((bits == 0) | (bits == 1)):
        raise MalformedVectorError("vector contains entries other than 0 and 1")
    record: Categorical = {}
    for f in schema.features:
        hot = np.flatnonzero(bits[f.bit_slice])
        if len(hot) > 1:
            names = [f.values[i] for i in hot]
            raise MalformedVectorError(
                f"malformed vector: {len(hot)} bits set in block {f.name!r} ({names})"
            )
        if len(hot) == 0:
            if not f.nullable:
                raise MalformedVectorError(
                    f"malformed vector: non-nullable feature {f.name!r} has no bit set"
                )
            record[f.name] = None
        else:
            record[f.name] = f.values[hot[0]]
    return record


@dataclass(frozen=True, eq=False)
class PFVector:
    """A categorical record together with its binarization."""

    categorical: Categorical
    bits: np.ndarray

    @classmethod
    def from_categorical(cls, categorical, schema: FeatureSchema = DEFAULT_SCHEMA) -> "PFVector":
        full = schema.null_record()
        full.update(categorical)
        bits = binarize(full, schema)
        bits.flags.writeable = False
        return cls(full, bits)

    def __eq__(self, other):
        if not isinstance(other, PFVector):
            return NotImplemented
        return self.categorical == other.categorical and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())
