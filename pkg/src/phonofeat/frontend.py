"""Lexicon-driven linguistic frontend: text -> resource phonemes -> IPA
segments -> PF matrix.

Lexicon TSV, one entry per line::

    house<TAB>"h aU s
    geschichte<TAB>g @ . "S I C . t @

Pronunciations are space-separated resource symbols.  ``"`` prefixes the
first symbol of the stressed syllable, ``%`` (secondary stress) is dropped
and ``.`` separates syllables.

Mapping TSV, one resource symbol per line::

    aU<TAB>aʊ<TAB>diphthong

The optional third column flags diphthongs; their IPA must be exactly two
vowels.  In both formats blank lines and lines starting with ``# `` are
ignored.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import unicodedata
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .chart import DEFAULT_CHART, IPAChart
from .errors import IPAParseError, LexiconError, MappingError, OOVError
from .ipa import (
    SENTENCE_END, SILENCE, WORD_BOUNDARY, Segment, encode, tokenize,
)
from .schema import DEFAULT_SCHEMA, FeatureSchema

log = logging.getLogger(__name__)

STRESS_MARK = '"'
SECONDARY_MARK = "%"
SYLLABLE_SEP = "."
SENTENCE_FINAL = frozenset(".!?")
SILENCE_TOKEN = "_"


def _is_comment(line: str) -> bool:
    return not line.strip() or line.startswith("# ")


@dataclass(frozen=True)
class Lexicon:
    name: str
    entries: Mapping[str, tuple[str, ...]]
    source: str = "generic"

    def __contains__(self, word) -> bool:
        return normalize_word(word) in self.entries

    def __getitem__(self, word) -> tuple[str, ...]:
        return self.entries[normalize_word(word)]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class MappingTable:
    name: str
    symbols: Mapping[str, str]
    diphthongs: Mapping[str, tuple[str, str]] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class Utterance:
    text: str
    segments: tuple[Segment, ...]
    pf_matrix: np.ndarray

    def to_csv(self, schema: FeatureSchema = DEFAULT_SCHEMA) -> str:
        return segments_to_csv(self.segments, self.pf_matrix, schema)

    def to_json(self, schema: FeatureSchema = DEFAULT_SCHEMA) -> dict:
        return {
            "text": self.text,
            "segments": [{"symbol": s.render(), "kind": s.kind} for s in self.segments],
            "columns": schema.bit_labels(),
            "pf_matrix": self.pf_matrix.tolist(),
        }


def normalize_word(word: str) -> str:
    return unicodedata.normalize("NFC", word).casefold()


def _parse_pron(raw: str) -> list[str]:
    symbols = []
    for tok in raw.split():
        while tok and tok[0] in (STRESS_MARK, SECONDARY_MARK):
            if tok[0] == STRESS_MARK:
                symbols.append(STRESS_MARK)
            tok = tok[1:]
        if tok:
            symbols.append(tok)
    return symbols


def load_lexicon(path, source: str = "generic", name: Optional[str] = None) -> Lexicon:
    """Read a TSV lexicon; headwords are NFC-normalized and case-folded."""
    entries: dict[str, tuple[str, ...]] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if _is_comment(line):
            continue
        if "\t" not in line:
            raise LexiconError(f"{path}:{lineno}: malformed line, expected 'word<TAB>pron'")
        word, raw = line.split("\t", 1)
        word = normalize_word(word.strip())
        if not word:
            raise LexiconError(f"{path}:{lineno}: empty headword")
        pron = _parse_pron(raw)
        if not [s for s in pron if s not in (STRESS_MARK, SYLLABLE_SEP)]:
            raise LexiconError(f"{path}:{lineno}: empty pronunciation for {word!r}")
        if word in entries:
            raise LexiconError(f"{path}:{lineno}: duplicate headword {word!r}")
        entries[word] = tuple(pron)
    if not entries:
        log.warning("lexicon %s is empty", path)
    return Lexicon(name or Path(path).stem, entries, source)


def load_mapping(path, name: Optional[str] = None, chart: IPAChart = DEFAULT_CHART) -> MappingTable:
    """Read a resource-symbol -> IPA mapping table and check every target
    tokenizes."""
    name = name or Path(path).stem
    symbols: dict[str, str] = {}
    diphthongs: dict[str, tuple[str, str]] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if _is_comment(line):
            continue
        cols = line.split("\t")
        if len(cols) not in (2, 3):
            raise MappingError(f"{path}:{lineno}: expected 'symbol<TAB>ipa[<TAB>diphthong]'")
        sym, ipa = cols[0].strip(), cols[1].strip()
        if not sym or not ipa:
            raise MappingError(f"{path}:{lineno}: empty symbol or IPA")
        if sym in symbols:
            raise MappingError(f"{path}:{lineno}: duplicate symbol {sym!r}")
        try:
            segs = tokenize(ipa, chart)
        except IPAParseError as exc:
            raise MappingError(f"{path}:{lineno}: {sym!r} -> {ipa!r}: {exc}") from exc
        if not segs or not all(s.is_phoneme for s in segs):
            raise MappingError(f"{path}:{lineno}: {sym!r} must map to phonemes only")
        if len(cols) == 3:
            flag = cols[2].strip()
            if flag != "diphthong":
                raise MappingError(f"{path}:{lineno}: unknown flag {flag!r}")
            if len(segs) != 2 or not all(chart.is_vowel(s.base) for s in segs):
                raise MappingError(f"{path}:{lineno}: diphthong {sym!r} must be two vowels")
            diphthongs[sym] = (segs[0].ipa, segs[1].ipa)
        symbols[sym] = ipa
    return MappingTable(name, symbols, diphthongs)


def _data_path(filename: str):
    return resources.files("phonofeat") / "data" / filename


def bundled_lexicon(which: str) -> Lexicon:
    """Small sample lexica shipped with the package: ``"en"`` or ``"de"``."""
    files = {"en": ("combilex_rp_sample.tsv", "combilex-rp"), "de": ("mary_de_sample.tsv", "mary-de")}
    filename, source = files[which]
    with resources.as_file(_data_path(filename)) as p:
        return load_lexicon(p, source=source)


def bundled_mapping(which: str) -> MappingTable:
    files = {"en": "combilex_rp_mapping.tsv", "de": "mary_de_mapping.tsv"}
    with resources.as_file(_data_path(files[which])) as p:
        return load_mapping(p)


def to_ipa(
    resource_symbols: Sequence[str],
    table: MappingTable,
    chart: IPAChart = DEFAULT_CHART,
    overrides=None,
) -> list[Segment]:
    """Map one pronunciation to IPA segments.

    Diphthongs come out as two vowels, syllable stress lands on the first
    vowel of the stressed syllable and length is dropped.
    """
    out: list[Segment] = []
    pending = False
    for sym in resource_symbols:
        if sym == STRESS_MARK:
            pending = True
            continue
        if sym == SYLLABLE_SEP:
            if pending:
                raise MappingError(f"stressed syllable without a vowel in {' '.join(resource_symbols)!r}")
            continue
        if sym not in table.symbols:
            raise MappingError(f"symbol {sym!r} not in mapping table {table.name!r}")
        for seg in tokenize(table.symbols[sym], chart, overrides=overrides):
            stressed = pending and chart.is_vowel(seg.base)
            if stressed:
                pending = False
            out.append(replace(seg, stressed=stressed, long=False))
    if pending:
        raise MappingError(f"stressed syllable without a vowel in {' '.join(resource_symbols)!r}")
    return out


def _split_words(text: str):
    """Yield ``(word, ends_sentence)``; ``word`` is ``None`` for silence."""
    for tok in text.split():
        if tok == SILENCE_TOKEN:
            yield None, False
            continue
        ends = tok[-1] in SENTENCE_FINAL
        chars = [c for i, c in enumerate(tok)
                 if not unicodedata.category(c).startswith("P")
                 or (c in "'-’" and 0 < i < len(tok) - 1)]
        word = "".join(chars).strip("'-’")
        yield (normalize_word(word) if word else ""), ends


def text_to_utterance(
    text: str,
    lexicon: Lexicon,
    table: MappingTable,
    schema: FeatureSchema = DEFAULT_SCHEMA,
    chart: IPAChart = DEFAULT_CHART,
    overrides=None,
) -> Utterance:
    words = list(_split_words(text))
    oov = [w for w, _ in words if w and w not in lexicon.entries]
    if oov:
        raise OOVError(dict.fromkeys(oov))

    segments: list[Segment] = []
    for word, ends in words:
        if word is None:
            segments.append(Segment.boundary(SILENCE))
            continue
        if word:
            if segments and segments[-1].is_phoneme:
                segments.append(Segment.boundary(WORD_BOUNDARY))
            segments.extend(to_ipa(lexicon.entries[word], table, chart, overrides))
        if ends and segments and segments[-1].kind != SENTENCE_END:
            segments.append(Segment.boundary(SENTENCE_END))
    if not segments or segments[-1].kind != SENTENCE_END:
        segments.append(Segment.boundary(SENTENCE_END))
    matrix = encode(segments, schema, chart, overrides)
    return Utterance(text, tuple(segments), matrix)


def iter_utterances(lines: Iterable[str], lexicon, table, schema=DEFAULT_SCHEMA,
                    chart=DEFAULT_CHART, overrides=None):
    """Lazily process one sentence per line; blank lines are skipped."""
    for line in lines:
        line = line.strip()
        if line:
            yield text_to_utterance(line, lexicon, table, schema, chart, overrides)


def segments_to_csv(segments: Sequence[Segment], matrix, schema: FeatureSchema = DEFAULT_SCHEMA) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["symbol", "kind", *schema.bit_labels()])
    for seg, row in zip(segments, matrix):
        writer.writerow([seg.render(), seg.kind, *(int(b) for b in row)])
    return buf.getvalue()


def utterance_to_json(utt: Utterance, schema: FeatureSchema = DEFAULT_SCHEMA) -> str:
    return json.dumps(utt.to_json(schema), ensure_ascii=False)
