import csv
import math

import numpy as np
import pytest

from phonofeat.chart import DEFAULT_CHART
from phonofeat.errors import InventoryError, ProjectionError
from phonofeat.ipa import analyze, chart_segments, parse_segment, tokenize
from phonofeat.projection import (
    ProjectionLayer, _is_injective, chart_bit_matrix, export_embeddings, init_projection,
    load_weights, nearest_in_embedding, pf_param_count, project, save_weights, table_param_count,
)
from phonofeat.zeroshot import PhonemeInventory


@pytest.fixture
def layer():
    return init_projection(4, 60, seed=7)


def test_deterministic(layer):
    again = init_projection(4, 60, seed=7)
    assert np.array_equal(layer.weights, again.weights)
    assert not np.array_equal(layer.weights, init_projection(4, 60, seed=8).weights)


def test_init_shapes_and_bounds(layer):
    assert layer.weights.shape == (4, 60)
    assert np.all(layer.bias == 0)
    assert np.abs(layer.weights).max() <= math.sqrt(6 / 64)


@pytest.mark.parametrize("dim, bits", [(0, 60), (4, 0), (-1, 5)])
def test_bad_dims(dim, bits):
    with pytest.raises(ProjectionError):
        init_projection(dim, bits, 0)


def test_project_basis(layer):
    assert np.array_equal(project(layer, np.zeros(60)), layer.bias)
    e = np.zeros(60)
    e[5] = 1
    assert np.allclose(project(layer, e), layer.bias + layer.weights[:, 5], rtol=1e-12)
    e2 = e.copy()
    e2[17] = 1
    f = np.zeros(60)
    f[17] = 1
    direct = layer.weights @ e2 + layer.bias
    assert np.allclose(project(layer, e2), project(layer, e) + project(layer, f) - layer.bias, rtol=1e-9)
    assert np.allclose(project(layer, e2), direct, rtol=1e-9)


def test_project_length_mismatch(layer):
    with pytest.raises(ProjectionError):
        project(layer, np.zeros(59))


def test_nearest_member_first(layer):
    inv = PhonemeInventory.from_segments("x", tokenize("p b a ʃ"))
    top, d = nearest_in_embedding(layer, parse_segment("ʃ"), inv, k=2)[0]
    assert top.render() == "ʃ" and d == 0.0


def test_identity_weights_match_hamming():
    ident = ProjectionLayer(np.eye(60), np.zeros(60))
    inv = PhonemeInventory.from_segments("x", tokenize("s x f ʃ a"))
    query = parse_segment("ç")
    ranked = nearest_in_embedding(ident, query, inv, k=5)
    qbits = analyze(query).bits.astype(int)
    for member, dist in ranked:
        hamming = int(np.abs(analyze(member).bits.astype(int) - qbits).sum())
        assert dist == pytest.approx(math.sqrt(hamming), rel=1e-12)
    dists = [d for _, d in ranked]
    assert dists == sorted(dists)


def test_nearest_permutation_invariant(layer):
    segs = tokenize("p b t d k ɡ a i u")
    a = nearest_in_embedding(layer, parse_segment("ç"), PhonemeInventory.from_segments("a", segs), 9)
    b = nearest_in_embedding(layer, parse_segment("ç"), PhonemeInventory.from_segments("b", segs[::-1]), 9)
    assert a == b


def test_cosine_metric(layer):
    inv = PhonemeInventory.from_segments("x", tokenize("p a"))
    top, d = nearest_in_embedding(layer, parse_segment("p"), inv, metric="cosine")[0]
    assert top.render() == "p" and d == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ProjectionError):
        nearest_in_embedding(layer, parse_segment("p"), inv, metric="manhattan")


def test_nearest_empty_inventory(layer):
    with pytest.raises(InventoryError):
        nearest_in_embedding(layer, parse_segment("p"), PhonemeInventory.from_segments("x", []))


def test_export_shape_and_determinism(tmp_path, layer):
    segs = tokenize("p a #")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_embeddings(layer, segs, a)
    export_embeddings(init_projection(4, 60, seed=7), segs, b)
    rows = list(csv.reader(a.open(encoding="utf-8")))
    assert rows[0] == ["ipa", "kind", "e0", "e1", "e2", "e3"]
    assert len(rows) == 4 and all(len(r) == 6 for r in rows)
    assert a.read_bytes() == b.read_bytes()


def test_export_full_chart(tmp_path, layer):
    path = tmp_path / "chart.csv"
    export_embeddings(layer, chart_segments(), path)
    assert len(path.read_text(encoding="utf-8").splitlines()) - 1 == len(DEFAULT_CHART)


def test_export_io_error(tmp_path, layer):
    with pytest.raises(ProjectionError):
        export_embeddings(layer, tokenize("p"), tmp_path / "missing" / "x.csv")


def test_weights_round_trip(tmp_path, layer):
    path = tmp_path / "w.csv"
    save_weights(layer, path)
    assert path.read_text().splitlines()[:2] == ["dim,total_bits", "4,60"]
    loaded = load_weights(path)
    assert np.array_equal(loaded.weights, layer.weights)
    assert np.array_equal(loaded.bias, layer.bias)


def test_bad_weights_file(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("dim,total_bits\n2,3\n1,2,3\n")
    with pytest.raises(ProjectionError):
        load_weights(path)
    path.write_text("rows,cols\n")
    with pytest.raises(ProjectionError, match="header"):
        load_weights(path)


def test_injectivity_on_chart():
    probe = chart_bit_matrix()
    lay = init_projection(16, 60, seed=1, probe=probe)
    distinct = np.unique(probe, axis=0)
    emb = project(lay, distinct)
    diffs = np.linalg.norm(emb[:, None, :] - emb[None, :, :], axis=-1)
    assert np.all(diffs[~np.eye(len(distinct), dtype=bool)] > 0)
    assert not _is_injective(np.zeros((4, 60)), np.zeros(4), probe)


def test_parameter_counts():
    assert pf_param_count(512, 60) == 512 * 60 + 512
    assert table_param_count(512, 73) == 73 * 512
    assert init_projection(8, 60, 0).n_params == pf_param_count(8, 60)
