import json
import logging
import math
from dataclasses import dataclass, field
from typing import List, Dict, Optional, Sequence

import numpy as np
import pandas as pd
import pydot
from joblib import Parallel, delayed

from ._clustering import ClusterAssignment
from ._coherence import (BandMatrix, FrequencyBand, TimeWindow, SmoothingParams, COI_INCLUDE, pair_band_averages,
                         band_to_dict, band_from_dict, window_to_dict, window_from_dict)
from ._cwt import ScaleGrid, MorletParams, cwt, make_scale_grid
from ._errors import DataError

NETWORK_SCHEMA = "wcnet.network/1"
THRESHOLD_SCHEMA = "wcnet.threshold/1"

DEFAULT_REPS = 100
DEFAULT_QUANTILE = 0.95
DEFAULT_THRESHOLD = 0.38

PAIRING_RANDOM = "random"
PAIRING_FIXED = "fixed"
PAIRINGS = [
    PAIRING_RANDOM,
    PAIRING_FIXED,
]

FORMAT_DOT = "dot"
FORMAT_JSON = "json"
FORMAT_ADJACENCY = "adjacency"
EXPORT_FORMATS = [
    FORMAT_DOT,
    FORMAT_JSON,
    FORMAT_ADJACENCY,
]

EXPORT_EXTENSIONS = {
    FORMAT_DOT: "dot",
    FORMAT_JSON: "json",
    FORMAT_ADJACENCY: "csv",
}

CLUSTER_COLORS = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


@dataclass
class ThresholdEstimate:
    """
    Significance level of the band-averaged coherence of independent Gaussian noise.
    value is the largest of the per-band quantiles.
    """
    value: float
    quantile: float
    reps: int
    per_band: Dict[str, float] = field(default_factory=dict)


@dataclass
class NetworkNode:
    name: str
    cluster: int
    strength: float


@dataclass
class NetworkEdge:
    """
    Displayed (undirected) edge with both directed weights.
    """
    source: str
    target: str
    weight_forward: float
    weight_backward: float
    display_weight: float


@dataclass
class Network:
    band: FrequencyBand
    window: TimeWindow
    threshold: float
    nodes: List[NetworkNode]
    edges: List[NetworkEdge]

    @property
    def assets(self) -> List[str]:
        return [n.name for n in self.nodes]


def _pick_variances(variances: np.ndarray, rep: int, rng: np.random.Generator, pairing: str):
    m = len(variances)
    if pairing == PAIRING_FIXED:
        return variances[(2 * rep) % m], variances[(2 * rep + 1) % m]
    if m == 1:
        return variances[0], variances[0]
    first, second = rng.choice(m, size=2, replace=False)
    return variances[first], variances[second]


def _noise_repetition(variances: np.ndarray, n: int, bands: Sequence[FrequencyBand], grid: ScaleGrid,
                      params: MorletParams, smoothing: SmoothingParams, coi_policy: str, seed: int, rep: int,
                      pairing: str) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([seed, rep]))
    var_x, var_y = _pick_variances(variances, rep, rng, pairing)
    x = rng.normal(0.0, math.sqrt(var_x), size=n)
    y = rng.normal(0.0, math.sqrt(var_y), size=n)
    averages = pair_band_averages(cwt(x, grid, params), cwt(y, grid, params), bands, [(0, n - 1)],
                                  coi_policy=coi_policy, smoothing=smoothing)
    return averages[0, :, 0]


def noise_threshold(variances: Sequence[float], n: int, bands: Sequence[FrequencyBand], grid: Optional[ScaleGrid] = None,
                    params: MorletParams = MorletParams(), smoothing: SmoothingParams = SmoothingParams(),
                    reps: int = DEFAULT_REPS, quantile: float = DEFAULT_QUANTILE, seed: int = 0,
                    pairing: str = PAIRING_RANDOM, coi_policy: str = COI_INCLUDE, dt: float = 1.0,
                    n_jobs: int = 1, logger: logging.Logger = None) -> ThresholdEstimate:
    """
    Monte Carlo estimate of the coherence significance threshold: every repetition draws
    two independent zero-mean Gaussian series with variances taken from the supplied set
    and computes their band-averaged squared coherence. The threshold is the empirical
    quantile (linear interpolation) across repetitions, per band.

    :param variances: the variances of the real assets
    :type variances: list
    :param n: the length of the series
    :type n: int
    :param bands: the bands to evaluate
    :type bands: list
    :param grid: the scale grid, default grid for n if None
    :type grid: ScaleGrid
    :param reps: the number of repetitions
    :type reps: int
    :param quantile: the quantile to report, in [0, 1]
    :type quantile: float
    :param seed: the seed, repetition r uses the generator seeded with (seed, r)
    :type seed: int
    :param pairing: random (two distinct variances per repetition) or fixed (consecutive pairs)
    :type pairing: str
    :param n_jobs: the number of parallel workers
    :type n_jobs: int
    :param logger: the optional logger
    :type logger: logging.Logger
    :return: the threshold
    :rtype: ThresholdEstimate
    """
    if reps < 1:
        raise ValueError("At least one repetition required, supplied: %d" % reps)
    if not 0.0 <= quantile <= 1.0:
        raise ValueError("Quantile must be in [0, 1], supplied: %s" % str(quantile))
    if pairing not in PAIRINGS:
        raise ValueError("Unknown variance pairing: %s" % pairing)
    variances = np.asarray(variances, dtype=float)
    if (len(variances) == 0) or np.any(~np.isfinite(variances)) or np.any(variances < 0):
        raise ValueError("Variances must be finite and non-negative!")
    if grid is None:
        grid = make_scale_grid(n, dt=dt)
    if logger is not None:
        logger.info("Noise threshold: %d repetitions of length %d" % (reps, n))
    values = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_noise_repetition)(variances, n, bands, grid, params, smoothing, coi_policy, seed, r, pairing)
        for r in range(reps))
    values = np.array(values)
    per_band = {}
    for b, band in enumerate(bands):
        per_band[band.label] = float(np.clip(np.quantile(values[:, b], quantile), 0.0, 1.0))
    return ThresholdEstimate(value=max(per_band.values()), quantile=float(quantile), reps=int(reps), per_band=per_band)


def build_network(band_matrix: BandMatrix, clusters: ClusterAssignment, threshold: float) -> Network:
    """
    Assembles the network: an edge for every pair with mean coherence above the threshold,
    carrying both oriented means; node strength is the mean outgoing oriented coherence.

    :param band_matrix: the averaged coherences
    :type band_matrix: BandMatrix
    :param clusters: the cluster assignment for the same assets
    :type clusters: ClusterAssignment
    :param threshold: the display threshold
    :type threshold: float
    :return: the network
    :rtype: Network
    """
    assets = list(band_matrix.assets)
    num = len(assets)
    if len(clusters.labels) != num:
        raise ValueError("Cluster assignment covers %d assets, band matrix has %d" % (len(clusters.labels), num))
    mean_r2 = np.asarray(band_matrix.mean_r2, dtype=float)
    oriented = np.asarray(band_matrix.mean_oriented, dtype=float)

    nodes = []
    for i, name in enumerate(assets):
        if num > 1:
            strength = float((oriented[i, :].sum() - oriented[i, i]) / (num - 1))
        else:
            strength = 0.0
        nodes.append(NetworkNode(name=name, cluster=int(clusters.labels[i]), strength=min(max(strength, 0.0), 1.0)))

    edges = []
    for i in range(num):
        for j in range(i + 1, num):
            if mean_r2[i, j] > threshold:
                edges.append(NetworkEdge(source=assets[i], target=assets[j],
                                         weight_forward=float(oriented[i, j]), weight_backward=float(oriented[j, i]),
                                         display_weight=float(mean_r2[i, j])))
    return Network(band=band_matrix.band, window=band_matrix.window, threshold=float(threshold), nodes=nodes, edges=edges)


def _quote(s: str) -> str:
    return '"%s"' % str(s).replace("\\", "\\\\").replace('"', '\\"')


def _gray(weight: float) -> str:
    level = int(round(220.0 * (1.0 - min(max(weight, 0.0), 1.0))))
    return "#%02x%02x%02x" % (level, level, level)


def network_to_dot(network: Network) -> str:
    """
    Renders the network in DOT: edge darkness and pen width follow the mean coherence,
    the head/tail labels carry the oriented means (arrow size follows the larger one),
    node diameter follows the strength and the fill color the cluster.

    :param network: the network to render
    :type network: Network
    :return: the DOT source
    :rtype: str
    """
    name = "%s %s" % (network.window.label, network.band.label)
    graph = pydot.Dot(graph_name=_quote(name), graph_type="digraph")
    graph.set("label", _quote("%s, threshold %.2f" % (name, network.threshold)))
    graph.set("layout", "circo")
    for node in network.nodes:
        graph.add_node(pydot.Node(
            _quote(node.name),
            label=_quote(node.name),
            shape="circle",
            style="filled",
            fixedsize="true",
            width="%.3f" % (0.4 + 1.2 * node.strength),
            fillcolor=_quote(CLUSTER_COLORS[node.cluster % len(CLUSTER_COLORS)]),
            tooltip=_quote("cluster %d, strength %.4f" % (node.cluster, node.strength))))
    for edge in network.edges:
        graph.add_edge(pydot.Edge(
            _quote(edge.source),
            _quote(edge.target),
            dir="both",
            arrowhead="normal",
            arrowtail="normal",
            arrowsize="%.3f" % (0.3 + 1.5 * max(edge.weight_forward, edge.weight_backward)),
            headlabel=_quote("%.2f" % edge.weight_forward),
            taillabel=_quote("%.2f" % edge.weight_backward),
            color=_quote(_gray(edge.display_weight)),
            penwidth="%.3f" % (0.5 + 2.5 * edge.display_weight)))
    return graph.to_string()


def network_to_dict(network: Network) -> dict:
    return {
        "schema": NETWORK_SCHEMA,
        "band": band_to_dict(network.band),
        "window": window_to_dict(network.window),
        "threshold": network.threshold,
        "nodes": [{"name": n.name, "cluster": n.cluster, "strength": n.strength} for n in network.nodes],
        "edges": [{"source": e.source, "target": e.target, "weight_forward": e.weight_forward,
                   "weight_backward": e.weight_backward, "display_weight": e.display_weight} for e in network.edges],
    }


def network_to_json(network: Network) -> str:
    """
    Serializes the complete network.

    :param network: the network
    :type network: Network
    :return: the JSON string
    :rtype: str
    """
    return json.dumps(network_to_dict(network), indent=2, sort_keys=True)


def network_from_json(s: str) -> Network:
    """
    Restores a network from its JSON representation.

    :param s: the JSON string
    :type s: str
    :return: the network
    :rtype: Network
    """
    d = json.loads(s)
    if d.get("schema") != NETWORK_SCHEMA:
        raise ValueError("Unsupported network schema: %s" % str(d.get("schema")))
    return Network(
        band=band_from_dict(d["band"]),
        window=window_from_dict(d["window"]),
        threshold=float(d["threshold"]),
        nodes=[NetworkNode(name=str(n["name"]), cluster=int(n["cluster"]), strength=float(n["strength"]))
               for n in d["nodes"]],
        edges=[NetworkEdge(source=str(e["source"]), target=str(e["target"]),
                           weight_forward=float(e["weight_forward"]), weight_backward=float(e["weight_backward"]),
                           display_weight=float(e["display_weight"]))
               for e in d["edges"]])


def network_to_adjacency(network: Network) -> pd.DataFrame:
    """
    Generates both thresholded matrices stacked in one table: the rows with matrix=display
    hold the mean coherence of the displayed edges, the rows with matrix=oriented the
    directed weights (row -> column). Absent edges are 0.

    :param network: the network
    :type network: Network
    :return: the table with columns matrix, asset and one column per asset
    :rtype: pd.DataFrame
    """
    assets = network.assets
    index = {a: i for i, a in enumerate(assets)}
    display = np.zeros((len(assets), len(assets)))
    oriented = np.zeros((len(assets), len(assets)))
    for e in network.edges:
        i, j = index[e.source], index[e.target]
        display[i, j] = display[j, i] = e.display_weight
        oriented[i, j] = e.weight_forward
        oriented[j, i] = e.weight_backward
    frames = []
    for label, values in [("display", display), ("oriented", oriented)]:
        frame = pd.DataFrame(values, columns=assets)
        frame.insert(0, "asset", assets)
        frame.insert(0, "matrix", label)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def export_graph(network: Network, fmt: str, path: str):
    """
    Writes the network in the specified format.

    :param network: the network to export
    :type network: Network
    :param fmt: dot|json|adjacency
    :type fmt: str
    :param path: the file to write to
    :type path: str
    """
    if fmt == FORMAT_DOT:
        content = network_to_dot(network)
    elif fmt == FORMAT_JSON:
        content = network_to_json(network)
    elif fmt == FORMAT_ADJACENCY:
        content = network_to_adjacency(network).to_csv(index=False, float_format="%.10g", lineterminator="\n")
    else:
        raise ValueError("Unknown export format: %s" % fmt)
    try:
        with open(path, "w", newline="\n") as fp:
            fp.write(content)
            if not content.endswith("\n"):
                fp.write("\n")
    except OSError as e:
        raise DataError("Failed to write network to '%s': %s" % (path, str(e)))


def threshold_to_json(estimate: ThresholdEstimate, override: Optional[float] = None) -> str:
    """
    Generates the threshold report.

    :param estimate: the Monte Carlo estimate
    :type estimate: ThresholdEstimate
    :param override: the fixed threshold in use instead of the estimate, if any
    :type override: float
    :return: the JSON string
    :rtype: str
    """
    d = {
        "schema": THRESHOLD_SCHEMA,
        "value": estimate.value,
        "quantile": estimate.quantile,
        "reps": estimate.reps,
        "per_band": dict(estimate.per_band),
        "override": override,
    }
    return json.dumps(d, indent=2, sort_keys=True)
