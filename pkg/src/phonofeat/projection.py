"""Linear projection of binary PF vectors into an embedding space.

The layer stands in for a phoneme embedding table: ``weights @ bits + bias``.
Weights are Glorot-uniform in ``[-a, a]`` with
``a = sqrt(6 / (total_bits + embedding_dim))``, drawn from numpy's PCG64
seeded with ``(seed, sub_seed)``; the bias starts at zero.

Weight files are CSV::

    dim,total_bits
    4,60
    <dim rows of total_bits weights>
    <one row of dim biases>
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .chart import DEFAULT_CHART, IPAChart
from .errors import InventoryError, ProjectionError
from .ipa import Segment, analyze
from .schema import DEFAULT_SCHEMA, FeatureSchema

MAX_REDRAWS = 100


@dataclass(frozen=True, eq=False)
class ProjectionLayer:
    weights: np.ndarray  # (embedding_dim, total_bits)
    bias: np.ndarray  # (embedding_dim,)
    seed: Optional[int] = None
    sub_seed: int = 0

    def __post_init__(self):
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ProjectionError(
                f"inconsistent shapes: weights {self.weights.shape}, bias {self.bias.shape}"
            )

    @property
    def embedding_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def total_bits(self) -> int:
        return self.weights.shape[1]

    @property
    def n_params(self) -> int:
        return self.weights.size + self.bias.size


def glorot_bound(embedding_dim: int, total_bits: int) -> float:
    return float(np.sqrt(6.0 / (total_bits + embedding_dim)))


def _is_injective(weights, bias, probe) -> bool:
    rows = np.unique(np.asarray(probe, dtype=np.float64), axis=0)
    if len(rows) < 2:
        return True
    emb = rows @ weights.T + bias
    # exact duplicate embeddings show up as repeated rows
    return len(np.unique(emb, axis=0)) == len(rows)


def init_projection(embedding_dim: int, total_bits: int, seed: int, probe=None) -> ProjectionLayer:
    """Seeded Glorot-uniform layer.

    When ``probe`` (a matrix of bit vectors) is given, the draw is repeated
    with ``sub_seed`` 1, 2, ... until all distinct probe rows map to
    distinct embeddings.
    """
    if embedding_dim <= 0 or total_bits <= 0:
        raise ProjectionError(f"dimensions must be positive, got ({embedding_dim}, {total_bits})")
    a = glorot_bound(embedding_dim, total_bits)
    bias = np.zeros(embedding_dim)
    for sub in range(MAX_REDRAWS):
        rng = np.random.Generator(np.random.PCG64([seed, sub]))
        weights = rng.uniform(-a, a, size=(embedding_dim, total_bits))
        if probe is None or _is_injective(weights, bias, probe):
            weights.flags.writeable = False
            bias.flags.writeable = False
            return ProjectionLayer(weights, bias, seed, sub)
    raise ProjectionError(f"no injective draw for seed {seed} after {MAX_REDRAWS} attempts")


def chart_bit_matrix(schema: FeatureSchema = DEFAULT_SCHEMA, chart: IPAChart = DEFAULT_CHART) -> np.ndarray:
    """Bit vectors of every chart symbol; the default injectivity probe."""
    return np.vstack([analyze(Segment(base=b), schema, chart).bits for b in chart.bases])


def project(layer: ProjectionLayer, pf_bits) -> np.ndarray:
    """Embed one bit vector, or each row of a matrix."""
    bits = np.asarray(pf_bits, dtype=np.float64)
    if bits.shape[-1] != layer.total_bits:
        raise ProjectionError(f"expected {layer.total_bits} bits, got {bits.shape[-1]}")
    return bits @ layer.weights.T + layer.bias


def embed_segments(layer, segments: Sequence[Segment], schema=DEFAULT_SCHEMA, chart=DEFAULT_CHART,
                   overrides=None) -> np.ndarray:
    bits = np.vstack([analyze(s, schema, chart, overrides).bits for s in segments])
    return project(layer, bits)


def nearest_in_embedding(layer, query: Segment, inventory, k: int = 1, metric: str = "euclidean",
                         schema=DEFAULT_SCHEMA, chart=DEFAULT_CHART, overrides=None):
    """Rank inventory members by distance between projected embeddings.

    ``metric`` is ``"euclidean"`` or ``"cosine"`` (one minus cosine
    similarity).  Ties go to the lower codepoint sequence.
    """
    members = sorted(inventory.members, key=Segment.sort_key)
    if not members:
        raise InventoryError(f"inventory {inventory.name!r} is empty")
    # one batch, so a query equal to a member embeds to the same floats
    both = embed_segments(layer, [inventory.canonical(query), *members], schema, chart, overrides)
    q, emb = both[0], both[1:]
    if metric == "euclidean":
        dist = np.linalg.norm(emb - q, axis=1)
    elif metric == "cosine":
        denom = np.linalg.norm(emb, axis=1) * np.linalg.norm(q)
        with np.errstate(invalid="ignore", divide="ignore"):
            dist = 1.0 - np.where(denom > 0, emb @ q / denom, 0.0)
    else:
        raise ProjectionError(f"unknown metric {metric!r}")
    order = sorted(range(len(members)), key=lambda i: (dist[i], members[i].sort_key()))
    return [(members[i], float(dist[i])) for i in order[:max(k, 0)]]


def _fmt(x) -> str:
    return repr(float(x))


def embeddings_csv(layer, segments: Sequence[Segment], schema=DEFAULT_SCHEMA, chart=DEFAULT_CHART,
                   overrides=None) -> str:
    emb = embed_segments(layer, segments, schema, chart, overrides) if segments else np.zeros((0, layer.embedding_dim))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ipa", "kind", *(f"e{i}" for i in range(layer.embedding_dim))])
    for seg, row in zip(segments, emb):
        w.writerow([seg.render(), seg.kind, *(_fmt(x) for x in row)])
    return buf.getvalue()


def export_embeddings(layer, segments: Sequence[Segment], path, schema=DEFAULT_SCHEMA,
                      chart=DEFAULT_CHART, overrides=None) -> None:
    """Write one CSV row per segment (``ipa, kind, e0..``), e.g. as t-SNE
    input."""
    text = embeddings_csv(layer, segments, schema, chart, overrides)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ProjectionError(f"cannot write {path}: {exc}") from exc


def weights_csv(layer: ProjectionLayer) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dim", "total_bits"])
    w.writerow([layer.embedding_dim, layer.total_bits])
    for row in layer.weights:
        w.writerow([_fmt(x) for x in row])
    w.writerow([_fmt(x) for x in layer.bias])
    return buf.getvalue()


def save_weights(layer: ProjectionLayer, path) -> None:
    Path(path).write_text(weights_csv(layer), encoding="utf-8")


def load_weights(path) -> ProjectionLayer:
    """Import trained weights from the CSV format above."""
    try:
        rows = list(csv.reader(Path(path).read_text(encoding="utf-8").splitlines()))
    except OSError as exc:
        raise ProjectionError(f"cannot read {path}: {exc}") from exc
    if len(rows) < 2 or [c.strip() for c in rows[0]] != ["dim", "total_bits"]:
        raise ProjectionError(f"{path}: header must be 'dim,total_bits'")
    try:
        dim, bits = (int(c) for c in rows[1])
        weights = np.array([[float(c) for c in r] for r in rows[2:2 + dim]])
        bias = np.array([float(c) for c in rows[2 + dim]]) if len(rows) > 2 + dim else np.zeros(dim)
    except (ValueError, IndexError) as exc:
        raise ProjectionError(f"{path}: malformed weight file: {exc}") from exc
    if weights.shape != (dim, bits) or bias.shape != (dim,):
        raise ProjectionError(f"{path}: expected {dim}x{bits} weights and {dim} biases")
    return ProjectionLayer(weights, bias)


def pf_param_count(embedding_dim: int, total_bits: int) -> int:
    """Parameters of the PF projection (weights and bias)."""
    return embedding_dim * total_bits + embedding_dim


def table_param_count(embedding_dim: int, n_phonemes: int) -> int:
    """Parameters of a phoneme embedding table."""
    return n_phonemes * embedding_dim
