"""Unseen Phoneme Rate (UPR) and inventory / test-set statistics."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Sequence

from .errors import MetricsError
from .ipa import Segment
from .zeroshot import PhonemeInventory


@dataclass(frozen=True)
class UtteranceStats:
    word_count: int
    phoneme_count: int
    oos_count: int
    upr_percent: float


@dataclass(frozen=True)
class TestSetStats:
    __test__ = False  # not a pytest class

    sentence_count: int
    length_min: int
    length_max: int
    upr_min: float
    upr_max: float
    upr_mean: float


def count_words(segments: Sequence[Segment]) -> int:
    """Runs of phonemes separated by any non-phoneme symbol."""
    words, inside = 0, False
    for seg in segments:
        if seg.is_phoneme and not inside:
            words += 1
        inside = seg.is_phoneme
    return words


def upr(segments: Sequence[Segment], inventory: PhonemeInventory, types: bool = False) -> UtteranceStats:
    """Percentage of phonemes in an utterance that the inventory lacks.

    Token-based by default; ``types=True`` counts distinct phonemes instead.
    """
    segments = getattr(segments, "segments", segments)
    phones = [inventory.canonical(s) for s in segments if s.is_phoneme]
    if not phones:
        raise MetricsError("utterance has no phonemes")
    if types:
        phones = list(dict.fromkeys(phones))
    oos = sum(1 for p in phones if p not in inventory.members)
    return UtteranceStats(count_words(segments), len(phones), oos, 100.0 * oos / len(phones))


def inventory_stats(corpus: PhonemeInventory, target: PhonemeInventory) -> tuple[int, int]:
    """``(unique corpus phonemes, target phonemes missing from corpus)``."""
    if corpus.count_stress_variants != target.count_stress_variants:
        target = PhonemeInventory.from_segments(
            target.name, target.members, corpus.count_stress_variants, target.source
        )
    return len(corpus.members), len(target.members - corpus.members)


def testset_stats(utterances, inventory: PhonemeInventory, types: bool = False) -> TestSetStats:
    per = [upr(u, inventory, types) for u in utterances]
    if not per:
        raise MetricsError("empty test set")
    rates = [p.upr_percent for p in per]
    lengths = [p.word_count for p in per]
    return TestSetStats(
        len(per), min(lengths), max(lengths), min(rates), max(rates), sum(rates) / len(rates)
    )


def stats_json(stats) -> str:
    return json.dumps(asdict(stats), indent=2)


def format_inventory_table(rows) -> str:
    """Aligned table; ``rows`` are ``(corpus name, phonemes, oos)``."""
    header = ("Corpus", "Phonemes", "OOS")
    body = [(str(n), str(p), str(o)) for n, p, o in rows]
    return _table(header, body)


def format_testset_table(rows) -> str:
    """Aligned table; ``rows`` are ``(label, TestSetStats)``."""
    header = ("Set", "n sents", "sent. len.", "UPR %", "UPR mean %")
    body = []
    for label, s in rows:
        length = str(s.length_min) if s.length_min == s.length_max else f"{s.length_min}-{s.length_max}"
        body.append((str(label), str(s.sentence_count), length,
                     f"{s.upr_min:.1f}-{s.upr_max:.1f}", f"{s.upr_mean:.1f}"))
    return _table(header, body)


def _table(header, body) -> str:
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header, *body]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
