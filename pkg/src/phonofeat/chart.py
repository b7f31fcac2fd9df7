"""Built-in IPA chart: base symbols, diacritic marks and symbol aliases.

Consonant rows are ``(voicing, place, manner)``, vowel rows are
``(frontness, openness, roundedness)``, using the value names of the default
schema.  Implosives, clicks and epiglottals are stubs: they share the row of
the nearest pulmonic plosive or fricative, since the feature set has no
airstream feature.

Symbols whose place of articulation is outside the schema (labial-velar,
alveolo-palatal, ...) are given an *intrinsic* diacritic, e.g. ``w`` is a
velar approximant that is always ``labialized``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

V, U = "voiced", "unvoiced"

_CONSONANTS = {
    # plosives
    "p": (U, "bilabial", "plosive"), "b": (V, "bilabial", "plosive"),
    "t": (U, "alveolar", "plosive"), "d": (V, "alveolar", "plosive"),
    "ʈ": (U, "retroflex", "plosive"), "ɖ": (V, "retroflex", "plosive"),
    "c": (U, "palatal", "plosive"), "ɟ": (V, "palatal", "plosive"),
    "k": (U, "velar", "plosive"), "ɡ": (V, "velar", "plosive"),
    "q": (U, "uvular", "plosive"), "ɢ": (V, "uvular", "plosive"),
    "ʔ": (U, "glottal", "plosive"),
    # nasals
    "m": (V, "bilabial", "nasal"), "ɱ": (V, "labiodental", "nasal"),
    "n": (V, "alveolar", "nasal"), "ɳ": (V, "retroflex", "nasal"),
    "ɲ": (V, "palatal", "nasal"), "ŋ": (V, "velar", "nasal"),
    "ɴ": (V, "uvular", "nasal"),
    # trills
    "ʙ": (V, "bilabial", "trill"), "r": (V, "alveolar", "trill"),
    "ʀ": (V, "uvular", "trill"),
    # taps and flaps
    "ⱱ": (V, "labiodental", "tap_flap"), "ɾ": (V, "alveolar", "tap_flap"),
    "ɽ": (V, "retroflex", "tap_flap"),
    # fricatives
    "ɸ": (U, "bilabial", "fricative"), "β": (V, "bilabial", "fricative"),
    "f": (U, "labiodental", "fricative"), "v": (V, "labiodental", "fricative"),
    "θ": (U, "dental", "fricative"), "ð": (V, "dental", "fricative"),
    "s": (U, "alveolar", "fricative"), "z": (V, "alveolar", "fricative"),
    "ʃ": (U, "postalveolar", "fricative"), "ʒ": (V, "postalveolar", "fricative"),
    "ʂ": (U, "retroflex", "fricative"), "ʐ": (V, "retroflex", "fricative"),
    "ç": (U, "palatal", "fricative"), "ʝ": (V, "palatal", "fricative"),
    "x": (U, "velar", "fricative"), "ɣ": (V, "velar", "fricative"),
    "χ": (U, "uvular", "fricative"), "ʁ": (V, "uvular", "fricative"),
    "ħ": (U, "pharyngeal", "fricative"), "ʕ": (V, "pharyngeal", "fricative"),
    "h": (U, "glottal", "fricative"), "ɦ": (V, "glottal", "fricative"),
    # lateral fricatives
    "ɬ": (U, "alveolar", "lateral_fricative"), "ɮ": (V, "alveolar", "lateral_fricative"),
    # approximants
    "ʋ": (V, "labiodental", "approximant"), "ɹ": (V, "alveolar", "approximant"),
    "ɻ": (V, "retroflex", "approximant"), "j": (V, "palatal", "approximant"),
    "ɰ": (V, "velar", "approximant"),
    # lateral approximants
    "l": (V, "alveolar", "lateral_approximant"), "ɭ": (V, "retroflex", "lateral_approximant"),
    "ʎ": (V, "palatal", "lateral_approximant"), "ʟ": (V, "velar", "lateral_approximant"),
    # other symbols
    "w": (V, "velar", "approximant"), "ʍ": (U, "velar", "fricative"),
    "ɥ": (V, "palatal", "approximant"),
    "ɕ": (U, "postalveolar", "fricative"), "ʑ": (V, "postalveolar", "fricative"),
    "ɺ": (V, "alveolar", "tap_flap"), "ɫ": (V, "alveolar", "lateral_approximant"),
    "ʜ": (U, "pharyngeal", "fricative"), "ʢ": (V, "pharyngeal", "fricative"),
    "ʡ": (U, "pharyngeal", "plosive"),
    # implosive stubs
    "ɓ": (V, "bilabial", "plosive"), "ɗ": (V, "alveolar", "plosive"),
    "ʄ": (V, "palatal", "plosive"), "ɠ": (V, "velar", "plosive"),
    "ʛ": (V, "uvular", "plosive"),
    # click stubs
    "ʘ": (U, "bilabial", "plosive"), "ǀ": (U, "dental", "plosive"),
    "ǃ": (U, "postalveolar", "plosive"), "ǂ": (U, "palatal", "plosive"),
    "ǁ": (U, "alveolar", "plosive"),
}

_VOWELS = {
    "i": ("front", "close", "unrounded"), "y": ("front", "close", "rounded"),
    "ɨ": ("central", "close", "unrounded"), "ʉ": ("central", "close", "rounded"),
    "ɯ": ("back", "close", "unrounded"), "u": ("back", "close", "rounded"),
    "ɪ": ("near_front", "near_close", "unrounded"), "ʏ": ("near_front", "near_close", "rounded"),
    "ʊ": ("near_back", "near_close", "rounded"),
    "e": ("front", "close_mid", "unrounded"), "ø": ("front", "close_mid", "rounded"),
    "ɘ": ("central", "close_mid", "unrounded"), "ɵ": ("central", "close_mid", "rounded"),
    "ɤ": ("back", "close_mid", "unrounded"), "o": ("back", "close_mid", "rounded"),
    "ə": ("central", "mid", "unrounded"),
    "ɛ": ("front", "open_mid", "unrounded"), "œ": ("front", "open_mid", "rounded"),
    "ɜ": ("central", "open_mid", "unrounded"), "ɞ": ("central", "open_mid", "rounded"),
    "ʌ": ("back", "open_mid", "unrounded"), "ɔ": ("back", "open_mid", "rounded"),
    "æ": ("front", "near_open", "unrounded"), "ɐ": ("central", "near_open", "unrounded"),
    "a": ("front", "open", "unrounded"), "ɶ": ("front", "open", "rounded"),
    "ɑ": ("back", "open", "unrounded"), "ɒ": ("back", "open", "rounded"),
    "ɚ": ("central", "mid", "unrounded"), "ɝ": ("central", "open_mid", "unrounded"),
}

_INTRINSIC = {
    "w": ("labialized",), "ʍ": ("labialized",), "ɥ": ("labialized",),
    "ɕ": ("palatalized",), "ʑ": ("palatalized",), "ɫ": ("velarized",),
    "ɚ": ("rhotic",), "ɝ": ("rhotic",),
}

# First mark per name is the canonical rendering.
_DIACRITIC_MARKS = {
    "̃": "nasalized",
    "ˠ": "velarized", "̴": "velarized",
    "ʷ": "labialized",
    "ʲ": "palatalized",
    "ˤ": "pharyngealized",
    "ʰ": "aspirated",
    "̚": "unreleased",
    "̤": "breathy_voiced",
    "̰": "creaky_voiced",
    "̪": "dental_mod",
    "̺": "apical",
    "̻": "laminal",
    "̟": "advanced",
    "̠": "retracted",
    "˞": "rhotic",
    "̩": "syllabic", "̍": "syllabic",
}

_ALIASES = {
    "g": "ɡ",
    "ʧ": "t͡ʃ", "ʤ": "d͡ʒ", "ʦ": "t͡s", "ʣ": "d͡z",
    "ʨ": "t͡ɕ", "ʥ": "d͡ʑ",
    "ɩ": "ɪ", "ɷ": "ʊ",
}


def _frozen(d):
    return MappingProxyType(dict(d))


@dataclass(frozen=True)
class IPAChart:
    consonants: Mapping[str, tuple[str, str, str]]
    vowels: Mapping[str, tuple[str, str, str]]
    diacritic_marks: Mapping[str, str]
    intrinsic: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    aliases: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        both = set(self.consonants) & set(self.vowels)
        if both:
            raise ValueError(f"symbols listed as both consonant and vowel: {sorted(both)}")
        stray = set(self.intrinsic) - set(self.consonants) - set(self.vowels)
        if stray:
            raise ValueError(f"intrinsic diacritics for unknown symbols: {sorted(stray)}")

    @property
    def bases(self) -> list[str]:
        """All base symbols, consonants first, in table order."""
        return list(self.consonants) + list(self.vowels)

    def is_vowel(self, base: str) -> bool:
        return base in self.vowels

    def is_consonant(self, base: str) -> bool:
        return base in self.consonants

    def __contains__(self, base) -> bool:
        return base in self.consonants or base in self.vowels

    def __len__(self) -> int:
        return len(self.consonants) + len(self.vowels)

    def mark_for(self, diacritic: str) -> str:
        for mark, name in self.diacritic_marks.items():
            if name == diacritic:
                return mark
        raise KeyError(diacritic)

    def to_json(self) -> dict:
        return {
            "consonants": {k: dict(zip(("voicing", "place", "manner"), v))
                           for k, v in self.consonants.items()},
            "vowels": {k: dict(zip(("frontness", "openness", "roundedness"), v))
                       for k, v in self.vowels.items()},
            "intrinsic_diacritics": {k: list(v) for k, v in self.intrinsic.items()},
            "diacritic_marks": {f"U+{ord(k):04X}": v for k, v in self.diacritic_marks.items()},
            "aliases": dict(self.aliases),
        }


DEFAULT_CHART = IPAChart(
    consonants=_frozen(_CONSONANTS),
    vowels=_frozen(_VOWELS),
    diacritic_marks=_frozen(_DIACRITIC_MARKS),
    intrinsic=_frozen(_INTRINSIC),
    aliases=_frozen(_ALIASES),
)


def export_chart_json(path, chart: IPAChart = DEFAULT_CHART) -> None:
    """Write the chart as JSON for auditing."""
    Path(path).write_text(
        json.dumps(chart.to_json(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
