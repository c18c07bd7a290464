import datetime
import json
import os

import numpy as np
import pydot
import pytest

from wcnet.api import BandMatrix, FrequencyBand, TimeWindow, ClusterAssignment, build_network, network_to_dot, \
    network_to_json, network_from_json, network_to_adjacency, export_graph, noise_threshold, threshold_to_json, \
    make_scale_grid, default_bands, DataError, EXPORT_FORMATS, PAIRING_FIXED


ASSETS = ["Gold", "S&P 500", 'Say "hi"', "Oil"]


def _band_matrix() -> BandMatrix:
    mean_r2 = np.array([
        [1.0, 0.6, 0.2, 0.5],
        [0.6, 1.0, 0.4, 0.1],
        [0.2, 0.4, 1.0, 0.3],
        [0.5, 0.1, 0.3, 1.0],
    ])
    oriented = np.array([
        [1.0, 0.6, 0.1, 0.5],
        [0.3, 1.0, 0.4, 0.05],
        [0.2, 0.2, 1.0, 0.3],
        [0.25, 0.1, 0.1, 1.0],
    ])
    return BandMatrix(band=FrequencyBand("medium", 5.0, 22.0),
                      window=TimeWindow("full", datetime.date(2010, 1, 4), datetime.date(2020, 11, 13)),
                      assets=list(ASSETS), mean_r2=mean_r2, mean_oriented=oriented)


def _clusters() -> ClusterAssignment:
    return ClusterAssignment(k=2, medoids=[0, 2], labels=[0, 0, 1, 0], total_cost=1.0)


def test_network_threshold_one_has_no_edges():
    network = build_network(_band_matrix(), _clusters(), 1.0)
    assert network.edges == []
    assert network.assets == ASSETS


def test_network_threshold_zero_has_all_edges():
    network = build_network(_band_matrix(), _clusters(), 0.0)
    assert len(network.edges) == 6


def test_network_edges_and_nodes():
    network = build_network(_band_matrix(), _clusters(), 0.38)
    pairs = [(e.source, e.target) for e in network.edges]
    assert pairs == [("Gold", "S&P 500"), ("Gold", "Oil"), ("S&P 500", 'Say "hi"')]
    first = network.edges[0]
    assert first.weight_forward == 0.6
    assert first.weight_backward == 0.3
    assert first.display_weight == 0.6
    assert network.nodes[0].strength == pytest.approx((0.6 + 0.1 + 0.5) / 3)
    assert [n.cluster for n in network.nodes] == [0, 0, 1, 0]
    assert network.threshold == 0.38


def test_network_size_mismatch():
    with pytest.raises(ValueError):
        build_network(_band_matrix(), ClusterAssignment(k=1, medoids=[0], labels=[0, 0], total_cost=0.0), 0.38)


def test_dot_parses():
    network = build_network(_band_matrix(), _clusters(), 0.38)
    graphs = pydot.graph_from_dot_data(network_to_dot(network))
    assert len(graphs) == 1
    graph = graphs[0]
    assert len(graph.get_edges()) == 3
    names = [n.get_name() for n in graph.get_nodes() if n.get_name() not in ["node", "edge", "graph"]]
    assert '"S&P 500"' in names
    edge = graph.get_edges()[0]
    assert edge.get("dir") == "both"
    assert edge.get("headlabel") == '"0.60"'
    assert edge.get("taillabel") == '"0.30"'


def test_json_round_trip():
    network = build_network(_band_matrix(), _clusters(), 0.38)
    s = network_to_json(network)
    assert json.loads(s)["schema"] == "wcnet.network/1"
    assert network_from_json(s) == network
    with pytest.raises(ValueError):
        network_from_json('{"schema": "wcnet.network/0"}')


def test_adjacency():
    network = build_network(_band_matrix(), _clusters(), 0.38)
    table = network_to_adjacency(network)
    assert list(table.columns) == ["matrix", "asset"] + ASSETS
    assert len(table) == 8
    display = table[table["matrix"] == "display"][ASSETS].to_numpy()
    oriented = table[table["matrix"] == "oriented"][ASSETS].to_numpy()
    assert np.allclose(display, display.T)
    assert display[0, 2] == 0.0
    assert oriented[0, 1] == 0.6
    assert oriented[1, 0] == 0.3


def test_export_graph(tmp_path):
    network = build_network(_band_matrix(), _clusters(), 0.38)
    for fmt in EXPORT_FORMATS:
        path = os.path.join(str(tmp_path), "network." + fmt)
        export_graph(network, fmt, path)
        assert os.path.getsize(path) > 0
    with pytest.raises(ValueError):
        export_graph(network, "png", os.path.join(str(tmp_path), "network.png"))


def test_export_graph_unwritable(tmp_path):
    network = build_network(_band_matrix(), _clusters(), 0.38)
    with pytest.raises(DataError):
        export_graph(network, "json", os.path.join(str(tmp_path), "missing", "network.json"))


def test_noise_threshold_small():
    bands = default_bands()
    estimate = noise_threshold([1.0, 2.0, 0.5], 256, bands, reps=5, seed=3)
    assert set(estimate.per_band.keys()) == {"short", "medium", "long"}
    assert estimate.value == max(estimate.per_band.values())
    assert all(0.0 <= v <= 1.0 for v in estimate.per_band.values())
    assert estimate.reps == 5
    again = noise_threshold([1.0, 2.0, 0.5], 256, bands, reps=5, seed=3, n_jobs=2)
    assert again == estimate
    fixed = noise_threshold([1.0, 2.0], 256, bands, grid=make_scale_grid(256), reps=2, seed=3, pairing=PAIRING_FIXED)
    assert fixed.reps == 2


def test_noise_threshold_preconditions():
    bands = default_bands()
    with pytest.raises(ValueError):
        noise_threshold([1.0], 256, bands, reps=0)
    with pytest.raises(ValueError):
        noise_threshold([1.0], 256, bands, quantile=1.5)
    with pytest.raises(ValueError):
        noise_threshold([-1.0], 256, bands)
    with pytest.raises(ValueError):
        noise_threshold([1.0], 256, bands, pairing="other")


def test_threshold_json():
    estimate = noise_threshold([1.0, 1.0], 128, [FrequencyBand("long", 22.0, None)], reps=3, seed=0)
    report = json.loads(threshold_to_json(estimate, 0.38))
    assert report["schema"] == "wcnet.threshold/1"
    assert report["override"] == 0.38
    assert report["per_band"]["long"] == estimate.value


def test_noise_threshold_full_quantile_is_maximum():
    bands = default_bands()
    top = noise_threshold([1.0, 2.0], 256, bands, reps=8, quantile=1.0, seed=5)
    upper = noise_threshold([1.0, 2.0], 256, bands, reps=8, quantile=0.95, seed=5)
    for label in top.per_band:
        assert top.per_band[label] >= upper.per_band[label]


def test_noise_threshold_single_repetition_ignores_quantile():
    bands = default_bands()
    low = noise_threshold([1.0, 2.0], 256, bands, reps=1, quantile=0.05, seed=9)
    high = noise_threshold([1.0, 2.0], 256, bands, reps=1, quantile=0.95, seed=9)
    assert low.per_band == high.per_band


def test_noise_threshold_monotone_in_quantile():
    bands = default_bands()
    previous = None
    for q in [0.1, 0.5, 0.9, 0.95, 1.0]:
        estimate = noise_threshold([1.0, 2.0], 256, bands, reps=6, quantile=q, seed=13)
        if previous is not None:
            for label in estimate.per_band:
                assert estimate.per_band[label] >= previous.per_band[label]
        previous = estimate


def test_noise_threshold_brackets_reference_value():
    estimate = noise_threshold(np.linspace(0.5, 2.0, 14) ** 2, 2541, default_bands(), reps=100, quantile=0.95,
                               seed=42, n_jobs=-1)
    for value in estimate.per_band.values():
        assert 0.32 <= value <= 0.44
