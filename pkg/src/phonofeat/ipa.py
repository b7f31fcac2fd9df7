"""IPA tokenization and compositional feature analysis.

:func:`tokenize` splits an IPA string into :class:`Segment` objects and
:func:`analyze` turns one segment into a :class:`~phonofeat.schema.PFVector`
by reading its chart row and layering stress and diacritics on top.  An
override dictionary can pin the full feature record of any IPA string.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .chart import DEFAULT_CHART, IPAChart
from .errors import AnalysisError, IPAParseError
from .schema import DEFAULT_SCHEMA, FeatureSchema, PFVector

log = logging.getLogger(__name__)

PRIMARY_STRESS = "ˈ"
SECONDARY_STRESS = "ˌ"
LENGTH_MARK = "ː"
TIE_BARS = ("͡", "͜")
SYLLABLE_BREAK = "."

PHONEME = "phoneme"
SILENCE = "silence"
WORD_BOUNDARY = "word_boundary"
SENTENCE_END = "sentence_end"
NON_PHONEME_KINDS = (SILENCE, WORD_BOUNDARY, SENTENCE_END)

DEFAULT_BOUNDARIES: Mapping[str, str] = {
    "_": SILENCE,
    "#": WORD_BOUNDARY,
    ".": SENTENCE_END,
}

DIACRITIC_PRIORITY = (
    "nasalized", "velarized", "pharyngealized", "palatalized", "labialized", "aspirated",
)


@dataclass(frozen=True)
class Segment:
    kind: str = PHONEME
    base: Optional[str] = None
    diacritics: tuple[str, ...] = ()
    stressed: bool = False
    long: bool = False
    affricate_components: Optional[tuple[str, str]] = None

    def __post_init__(self):
        if self.kind == PHONEME:
            if not self.base:
                raise ValueError("phoneme segment needs a base symbol")
        elif self.kind in NON_PHONEME_KINDS:
            if self.base or self.diacritics or self.stressed or self.long:
                raise ValueError(f"{self.kind} segment cannot carry phonetic detail")
        else:
            raise ValueError(f"unknown segment kind {self.kind!r}")

    @classmethod
    def boundary(cls, kind: str) -> "Segment":
        return cls(kind=kind)

    @property
    def is_phoneme(self) -> bool:
        return self.kind == PHONEME

    @property
    def ipa(self) -> str:
        """Base plus diacritic marks; no stress or length."""
        if not self.is_phoneme:
            return ""
        return self.base + "".join(DEFAULT_CHART.mark_for(d) for d in self.diacritics)

    def render(self, boundaries: Mapping[str, str] = DEFAULT_BOUNDARIES) -> str:
        if not self.is_phoneme:
            for token, kind in boundaries.items():
                if kind == self.kind:
                    return token
            raise IPAParseError(f"no boundary token declared for {self.kind}")
        return (PRIMARY_STRESS if self.stressed else "") + self.ipa + (LENGTH_MARK if self.long else "")

    def sort_key(self) -> tuple:
        """Deterministic ordering by codepoints of the rendered form."""
        return tuple(ord(c) for c in self.render())

    def __str__(self):
        return self.render()


def render(segments: Sequence[Segment], boundaries: Mapping[str, str] = DEFAULT_BOUNDARIES) -> str:
    """Serialize segments back to tokenizable text, space separated."""
    return " ".join(s.render(boundaries) for s in segments)


def override_bases(overrides, chart: IPAChart = DEFAULT_CHART) -> dict[str, bool]:
    """Single-symbol override keys missing from the chart, mapped to
    whether they are vowels; these become extra tokenizable bases."""
    extra = {}
    for key, record in (overrides or {}).items():
        if len(key) == 1 and key not in chart:
            extra[key] = record.get("cv") == "vowel"
    return extra


def _expand(ch: str, chart: IPAChart, extra_bases) -> str:
    if ch in chart.aliases:
        return chart.aliases[ch]
    if ch in chart or ch in extra_bases or ch in chart.diacritic_marks:
        return ch
    decomposed = unicodedata.normalize("NFD", ch)
    if len(decomposed) > 1 and decomposed[0] in chart and all(
        m in chart.diacritic_marks for m in decomposed[1:]
    ):
        return decomposed
    return ch


class _Builder:
    # mutable scratch state for one phoneme while its marks are collected
    def __init__(self, base, stressed=False):
        self.base = base
        self.components = None
        self.diacritics: list[str] = []
        self.stressed = stressed
        self.long = False

    def freeze(self) -> Segment:
        return Segment(PHONEME, self.base, tuple(self.diacritics), self.stressed,
                       self.long, self.components)


def tokenize(
    ipa_string: str,
    chart: IPAChart = DEFAULT_CHART,
    boundaries: Mapping[str, str] = DEFAULT_BOUNDARIES,
    overrides=None,
) -> list[Segment]:
    """Split an IPA string into segments.

    Whitespace separates tokens and is otherwise ignored.  A boundary token
    standing alone yields a non-phoneme segment; single-character boundary
    tokens also match inside a token, except ``.``, which inside a token is
    a syllable break and is skipped.  ``ˈ`` stresses the next vowel, ``ˌ``
    is dropped, ``ː`` marks the preceding phoneme long, combining and
    modifier diacritics attach to the preceding phoneme and a tie bar fuses
    two consonants into one affricate.
    """
    extra = override_bases(overrides, chart)
    out: list[Segment] = []
    pending_stress = False

    def is_vowel(base):
        return chart.is_vowel(base) or extra.get(base, False)

    def emit_boundary(kind, where):
        if pending_stress:
            raise IPAParseError(f"stress mark with no following vowel before {where!r}")
        out.append(Segment.boundary(kind))

    for chunk in ipa_string.split():
        if chunk in boundaries:
            emit_boundary(boundaries[chunk], chunk)
            continue
        text = "".join(_expand(c, chart, extra) for c in chunk)
        current: Optional[_Builder] = None
        i = 0
        while i < len(text):
            ch = text[i]
            if ch in chart or ch in extra:
                if current is not None:
                    out.append(current.freeze())
                stressed = pending_stress and is_vowel(ch)
                if stressed:
                    pending_stress = False
                current = _Builder(ch, stressed)
            elif ch in chart.diacritic_marks:
                if current is None:
                    raise IPAParseError(f"dangling diacritic U+{ord(ch):04X} in {chunk!r}")
                name = chart.diacritic_marks[ch]
                if name not in current.diacritics:
                    current.diacritics.append(name)
            elif ch == LENGTH_MARK:
                if current is None:
                    raise IPAParseError(f"length mark with no preceding phoneme in {chunk!r}")
                current.long = True
            elif ch in TIE_BARS:
                if current is None or i + 1 >= len(text):
                    raise IPAParseError(f"tie bar must join two symbols in {chunk!r}")
                second = text[i + 1]
                first = current.base
                if current.components or current.diacritics or current.long:
                    raise IPAParseError(f"tie bar after a modified symbol in {chunk!r}")
                if not (chart.is_consonant(first) and chart.is_consonant(second)):
                    raise IPAParseError(
                        f"tie bar must join two chart consonants, got {first!r}+{second!r}"
                    )
                current.base = first + "͡" + second
                current.components = (first, second)
                i += 1
            elif ch == PRIMARY_STRESS:
                if pending_stress:
                    raise IPAParseError(f"stress mark with no following vowel in {chunk!r}")
                pending_stress = True
            elif ch == SECONDARY_STRESS:
                pass
            elif ch in boundaries and ch != SYLLABLE_BREAK:
                if current is not None:
                    out.append(current.freeze())
                    current = None
                emit_boundary(boundaries[ch], ch)
            elif ch == SYLLABLE_BREAK:
                if current is not None:
                    out.append(current.freeze())
                    current = None
            else:
                name = unicodedata.name(ch, "UNKNOWN")
                raise IPAParseError(
                    f"unknown IPA symbol {ch!r} (U+{ord(ch):04X} {name}) in {chunk!r}"
                )
            i += 1
        if current is not None:
            out.append(current.freeze())
    if pending_stress:
        raise IPAParseError("stress mark with no following vowel at end of input")
    return out


def parse_segment(ipa: str, chart: IPAChart = DEFAULT_CHART, overrides=None) -> Segment:
    """Tokenize a string that must hold exactly one segment."""
    segs = tokenize(ipa, chart, overrides=overrides)
    if len(segs) != 1:
        raise IPAParseError(f"expected exactly one segment in {ipa!r}, got {len(segs)}")
    return segs[0]


def pick_diacritic(names: Sequence[str], schema: FeatureSchema = DEFAULT_SCHEMA) -> Optional[str]:
    """Choose the single diacritic kept by the one-hot block."""
    if not names:
        return None
    order = list(DIACRITIC_PRIORITY)
    if "diacritic" in schema:
        order += [v for v in schema["diacritic"].values if v not in order]

    def rank(name):
        return order.index(name) if name in order else len(order)

    chosen = min(names, key=rank)
    dropped = [n for n in names if n != chosen]
    if dropped:
        log.warning("stacked diacritics %s: keeping %r, dropping %s", list(names), chosen, dropped)
    return chosen


def analyze(
    segment: Segment,
    schema: FeatureSchema = DEFAULT_SCHEMA,
    chart: IPAChart = DEFAULT_CHART,
    overrides: Optional[Mapping[str, Mapping[str, Optional[str]]]] = None,
) -> PFVector:
    record = schema.null_record()
    record["symbol_type"] = segment.kind
    if not segment.is_phoneme:
        return PFVector.from_categorical(_restrict(record, schema), schema)

    if overrides and segment.ipa in overrides:
        record.update(overrides[segment.ipa])
        if record.get("cv") == "vowel" and "stress" not in overrides[segment.ipa]:
            record["stress"] = "stressed" if segment.stressed else "unstressed"
        return PFVector.from_categorical(_restrict(record, schema), schema)

    intrinsic: tuple[str, ...] = ()
    if segment.affricate_components:
        first, second = segment.affricate_components
        if first not in chart.consonants or second not in chart.consonants:
            raise AnalysisError(f"affricate components not in chart: {segment.base!r}")
        voicing = chart.consonants[first][0]
        place = chart.consonants[second][1]
        record.update(cv="consonant", voicing=voicing, place=place, manner="affricate")
        intrinsic = chart.intrinsic.get(second, ())
    elif segment.base in chart.consonants:
        voicing, place, manner = chart.consonants[segment.base]
        record.update(cv="consonant", voicing=voicing, place=place, manner=manner)
        intrinsic = chart.intrinsic.get(segment.base, ())
    elif segment.base in chart.vowels:
        front, openness, rounded = chart.vowels[segment.base]
        record.update(
            cv="vowel", voicing="voiced", frontness=front, openness=openness,
            roundedness=rounded, stress="stressed" if segment.stressed else "unstressed",
        )
        intrinsic = chart.intrinsic.get(segment.base, ())
    else:
        raise AnalysisError(f"symbol {segment.base!r} is in neither the chart nor the overrides")

    names = list(dict.fromkeys(intrinsic + segment.diacritics))
    if names and "diacritic" in schema:
        unknown = [n for n in names if n not in schema["diacritic"].values]
        if unknown:
            raise AnalysisError(f"diacritic(s) {unknown} not in schema")
        record["diacritic"] = pick_diacritic(names, schema)
    return PFVector.from_categorical(_restrict(record, schema), schema)


def _restrict(record, schema):
    # a custom schema may omit features; drop what it cannot hold
    return {k: v for k, v in record.items() if k in schema}


def analyze_string(ipa_string: str, schema=DEFAULT_SCHEMA, chart=DEFAULT_CHART, overrides=None):
    """Tokenize and analyze; returns ``(segments, vectors)``."""
    segs = tokenize(ipa_string, chart, overrides=overrides)
    return segs, [analyze(s, schema, chart, overrides) for s in segs]


def load_overrides(path, schema: FeatureSchema = DEFAULT_SCHEMA, chart: IPAChart = DEFAULT_CHART):
    """Read an override TSV: ``<ipa> TAB feature=value;feature=value``.

    Keys are canonicalized through the tokenizer so they match
    :attr:`Segment.ipa`.  Blank lines and ``#`` comments are skipped.
    """
    overrides: dict[str, dict[str, Optional[str]]] = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise AnalysisError(f"{path}:{lineno}: expected '<ipa>\\t<features>'")
        key, spec = parts[0].strip(), parts[1].strip()
        record: dict[str, Optional[str]] = {}
        for item in filter(None, (p.strip() for p in spec.split(";"))):
            if "=" not in item:
                raise AnalysisError(f"{path}:{lineno}: bad feature assignment {item!r}")
            name, value = (x.strip() for x in item.split("=", 1))
            if name not in schema:
                raise AnalysisError(f"{path}:{lineno}: unknown feature {name!r}")
            value = None if value.upper() == "NULL" else value
            if value is not None and value not in schema[name].values:
                raise AnalysisError(f"{path}:{lineno}: unknown value {value!r} for {name!r}")
            record[name] = value
        record.pop("symbol_type", None)
        try:
            seg = parse_segment(key, chart, overrides={key: record})
        except IPAParseError as exc:
            raise AnalysisError(f"{path}:{lineno}: {exc}") from exc
        if seg.stressed or seg.long:
            seg = replace(seg, stressed=False, long=False)
        overrides[seg.ipa] = record
    return overrides


def chart_segments(chart: IPAChart = DEFAULT_CHART) -> list[Segment]:
    """One unstressed segment per chart base symbol."""
    return [Segment(PHONEME, b) for b in chart.bases]


def encode(segments: Sequence[Segment], schema=DEFAULT_SCHEMA, chart=DEFAULT_CHART, overrides=None):
    """PF matrix, one binarized row per segment."""
    rows = [analyze(s, schema, chart, overrides).bits for s in segments]
    if not rows:
        return np.zeros((0, schema.total_bits), dtype=np.uint8)
    return np.vstack(rows)
