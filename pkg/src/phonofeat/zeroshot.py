"""Out-of-sample (OOS) phoneme detection and the three resolution strategies.

``auto``
    OOS phonemes keep the PF vector read off their IPA; nothing is remapped.
``manual``
    Each OOS phoneme is replaced by its nearest inventory member under the
    categorical feature distance, unless an expert override names another.
``random``
    Each OOS phoneme gets a fresh row in a phoneme embedding table, drawn
    uniform in [-0.1, 0.1] from numpy's PCG64 generator seeded with ``seed``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .chart import DEFAULT_CHART, IPAChart
from .errors import InventoryError, PlanError
from .ipa import Segment, analyze, encode, parse_segment, tokenize
from .schema import DEFAULT_SCHEMA, FeatureSchema

STRATEGIES = ("auto", "manual", "random")
RANDOM_BOUND = 0.1
DEFAULT_EMBEDDING_DIM = 512


@dataclass(frozen=True)
class PhonemeInventory:
    """Set of phoneme segments seen in training data.

    By default a vowel and its stressed variant are one member; with
    ``count_stress_variants`` they are counted separately, as a phoneme
    embedding table with stressed-vowel symbols would.
    """

    name: str
    members: frozenset
    count_stress_variants: bool = False
    source: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_segments(cls, name, segments: Iterable[Segment], count_stress_variants=False, source=None):
        canon = frozenset(
            canonical(s, count_stress_variants) for s in segments if s.is_phoneme
        )
        return cls(name, canon, count_stress_variants, dict(source or {}))

    def canonical(self, seg: Segment) -> Segment:
        return canonical(seg, self.count_stress_variants)

    def __contains__(self, seg) -> bool:
        return seg.is_phoneme and self.canonical(seg) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[Segment]:
        return sorted(self.members, key=Segment.sort_key)

    def to_text(self) -> str:
        return "".join(s.render() + "\n" for s in self.sorted())


def canonical(seg: Segment, count_stress_variants: bool = False) -> Segment:
    """Inventory identity: length never counts, stress only on request."""
    return replace(seg, long=False, stressed=seg.stressed and count_stress_variants)


def load_inventory(path, name=None, count_stress_variants=False, chart: IPAChart = DEFAULT_CHART,
                   overrides=None) -> PhonemeInventory:
    """Inventory from an IPA text file; every phoneme on every line is a
    member.  Lines starting with ``#`` followed by a space are comments."""
    segs: list[Segment] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("# "):
            continue
        segs.extend(tokenize(line, chart, overrides=overrides))
    return PhonemeInventory.from_segments(
        name or Path(path).stem, segs, count_stress_variants, {"path": str(path)}
    )


def detect_oos(segments: Sequence[Segment], inventory: PhonemeInventory) -> list[Segment]:
    """Phonemes absent from the inventory, canonicalized, in order of first
    occurrence."""
    seen = {}
    for seg in segments:
        if seg.is_phoneme and seg not in inventory:
            seen.setdefault(inventory.canonical(seg), None)
    return list(seen)


def pf_distance(a: Segment, b: Segment, schema: FeatureSchema = DEFAULT_SCHEMA,
                chart: IPAChart = DEFAULT_CHART, overrides=None) -> int:
    """Number of categorical features (symbol type excluded) on which two
    segments differ; NULL against a value counts as a difference."""
    ra = analyze(a, schema, chart, overrides).categorical
    rb = analyze(b, schema, chart, overrides).categorical
    return sum(1 for name in ra if name != "symbol_type" and ra[name] != rb[name])


def suggest_nearest(oos: Segment, inventory: PhonemeInventory, k: int = 1,
                    schema: FeatureSchema = DEFAULT_SCHEMA, chart: IPAChart = DEFAULT_CHART,
                    overrides=None) -> list[tuple[Segment, int]]:
    """Rank inventory members by feature distance to ``oos``.

    Ties are broken by agreement in manner, then place, then voicing, then
    by the codepoints of the base symbol.
    """
    if not inventory.members:
        raise InventoryError(f"inventory {inventory.name!r} is empty")
    query = inventory.canonical(oos)
    q = analyze(query, schema, chart, overrides).categorical

    def key(item):
        seg, rec, dist = item
        return (
            dist,
            rec.get("manner") != q.get("manner"),
            rec.get("place") != q.get("place"),
            rec.get("voicing") != q.get("voicing"),
            tuple(ord(c) for c in seg.base),
            seg.sort_key(),
        )

    scored = []
    for seg in inventory.members:
        rec = analyze(seg, schema, chart, overrides).categorical
        dist = sum(1 for n in q if n != "symbol_type" and q[n] != rec[n])
        scored.append((seg, rec, dist))
    scored.sort(key=key)
    return [(seg, dist) for seg, _, dist in scored[:max(k, 0)]]


@dataclass(frozen=True)
class Resolution:
    target: Optional[Segment] = None
    distance: Optional[int] = None
    overridden: bool = False
    vector_id: Optional[int] = None


@dataclass(frozen=True, eq=False)
class ZeroShotPlan:
    strategy: str
    oos: tuple[Segment, ...]
    resolutions: Mapping[Segment, Resolution]
    seed: Optional[int] = None
    embedding_dim: Optional[int] = None
    vectors: Optional[np.ndarray] = None

    def to_json(self) -> dict:
        out: dict = {"strategy": self.strategy}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.embedding_dim is not None:
            out["embedding_dim"] = self.embedding_dim
        rows = []
        for seg in self.oos:
            row: dict = {"oos": seg.render()}
            res = self.resolutions.get(seg)
            if res is not None:
                if res.target is not None:
                    row.update(target=res.target.render(), distance=res.distance,
                               overridden=res.overridden)
                if res.vector_id is not None:
                    row["vector_id"] = res.vector_id
            rows.append(row)
        out["resolutions"] = rows
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=2)


def load_manual_overrides(path) -> dict[str, str]:
    """Expert mapping TSV: ``oos_ipa<TAB>target_ipa``."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("# "):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise PlanError(f"{path}:{lineno}: expected 'oos_ipa<TAB>target_ipa'")
        out[cols[0].strip()] = cols[1].strip()
    return out


def build_plan(
    strategy: str,
    oos_set: Sequence[Segment],
    inventory: PhonemeInventory,
    manual_overrides: Optional[Mapping[str, str]] = None,
    seed: Optional[int] = None,
    embedding_dim: int = DEFAULT_EMBEDDING_DIM,
    schema: FeatureSchema = DEFAULT_SCHEMA,
    chart: IPAChart = DEFAULT_CHART,
    overrides=None,
) -> ZeroShotPlan:
    if strategy not in STRATEGIES:
        raise PlanError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    oos = tuple(dict.fromkeys(inventory.canonical(s) for s in oos_set if s.is_phoneme))

    if strategy == "auto":
        return ZeroShotPlan("auto", oos, {})

    if strategy == "manual":
        if not inventory.members:
            raise PlanError(f"manual plan needs a non-empty inventory ({inventory.name!r})")
        expert = {}
        for src, dst in (manual_overrides or {}).items():
            src_seg = inventory.canonical(parse_segment(src, chart, overrides))
            dst_seg = inventory.canonical(parse_segment(dst, chart, overrides))
            if dst_seg not in inventory.members:
                raise PlanError(f"override target {dst!r} is not in inventory {inventory.name!r}")
            expert[src_seg] = dst_seg
        res = {}
        for seg in oos:
            if seg in expert:
                target = expert[seg]
                res[seg] = Resolution(target, pf_distance(seg, target, schema, chart, overrides), True)
            else:
                target, dist = suggest_nearest(seg, inventory, 1, schema, chart, overrides)[0]
                res[seg] = Resolution(target, dist, False)
        return ZeroShotPlan("manual", oos, res)

    if seed is None:
        raise PlanError("random plan needs a seed")
    if embedding_dim <= 0:
        raise PlanError("embedding_dim must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    vectors = rng.uniform(-RANDOM_BOUND, RANDOM_BOUND, size=(len(oos), embedding_dim))
    vectors.flags.writeable = False
    base_id = len(inventory)
    res = {seg: Resolution(vector_id=base_id + i) for i, seg in enumerate(oos)}
    return ZeroShotPlan("random", oos, res, seed, embedding_dim, vectors)


def resolve(segments: Sequence[Segment], plan: ZeroShotPlan, inventory: PhonemeInventory) -> list[Segment]:
    """Apply a manual plan's substitutions; other strategies leave the
    sequence untouched.  A stressed vowel keeps its stress when replaced by
    a vowel."""
    if plan.strategy != "manual":
        return list(segments)
    out = []
    for seg in segments:
        res = plan.resolutions.get(inventory.canonical(seg)) if seg.is_phoneme else None
        if res is None:
            out.append(seg)
        else:
            out.append(replace(res.target, stressed=seg.stressed and _is_vowel(res.target)))
    return out


def _is_vowel(seg: Segment, chart: IPAChart = DEFAULT_CHART) -> bool:
    return seg.affricate_components is None and chart.is_vowel(seg.base)


def encode_with_plan(segments: Sequence[Segment], plan: ZeroShotPlan, inventory: PhonemeInventory,
                     schema: FeatureSchema = DEFAULT_SCHEMA, chart: IPAChart = DEFAULT_CHART,
                     overrides=None) -> np.ndarray:
    """PF matrix after applying ``plan``.  Random plans live in a phoneme
    embedding table and have no PF encoding."""
    if plan.strategy == "random":
        raise PlanError("random plans assign embedding-table rows, not PF vectors")
    return encode(resolve(segments, plan, inventory), schema, chart, overrides)
