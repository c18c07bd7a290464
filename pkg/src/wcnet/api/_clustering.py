import json
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from ._coherence import BandMatrix, FrequencyBand, TimeWindow, SmoothingParams, band_matrices, COI_INCLUDE
from ._cwt import ScaleGrid, MorletParams
from ._ingest import ReturnPanel

REFERENCE_PANEL = "panel"
REFERENCE_UNIFORM = "uniform"
REFERENCE_MODES = [
    REFERENCE_PANEL,
    REFERENCE_UNIFORM,
]

DEFAULT_NUM_REFS = 50

DISPERSION_FLOOR = 1e-12

SWAP_TOLERANCE = 1e-12

DEFAULT_RESTARTS = 10
""" random SWAP restarts on top of BUILD. """


@dataclass
class DissimMatrix:
    """
    Symmetric dissimilarities 1 - mean_r2 with zero diagonal.
    """
    assets: List[str]
    values: np.ndarray

    @property
    def size(self) -> int:
        return len(self.assets)


@dataclass
class ClusterAssignment:
    """
    The k-medoids result: medoids (sorted asset indices), per-asset cluster ids (index into medoids).
    """
    k: int
    medoids: List[int]
    labels: List[int]
    total_cost: float


@dataclass
class GapResult:
    """
    The Gap curve for k = 1..k_max: log dispersion of the real data, mean log dispersion
    of the references, gap and the standard error used by the selection rule.
    """
    ks: List[int]
    log_w: List[float]
    log_w_ref: List[float]
    gap: List[float]
    sd: List[float]
    k: int
    fallback: bool = False
    num_refs: int = 0
    dispersions: List[float] = field(default_factory=list)


def dissimilarity_matrix(band_matrix: BandMatrix) -> DissimMatrix:
    """
    Turns the mean coherence into dissimilarities: D = 1 - mean_r2, zero diagonal.

    :param band_matrix: the averaged coherences
    :type band_matrix: BandMatrix
    :return: the dissimilarities
    :rtype: DissimMatrix
    """
    values = 1.0 - np.asarray(band_matrix.mean_r2, dtype=float)
    np.fill_diagonal(values, 0.0)
    return DissimMatrix(assets=list(band_matrix.assets), values=values)


def _total_cost(d: np.ndarray, medoids: Sequence[int]) -> float:
    return float(np.sum(np.min(d[:, list(medoids)], axis=1)))


def _build(d: np.ndarray, k: int) -> List[int]:
    """
    Greedy BUILD: starts with the most central object, then repeatedly adds the object
    that reduces the cost the most (lowest index on ties).
    """
    medoids = [int(np.argmin(d.sum(axis=0)))]
    nearest = d[:, medoids[0]].copy()
    while len(medoids) < k:
        gains = np.maximum(nearest[:, None] - d, 0.0).sum(axis=0)
        gains[medoids] = -np.inf
        best = int(np.argmax(gains))
        medoids.append(best)
        nearest = np.minimum(nearest, d[:, best])
    return medoids


def _swap(d: np.ndarray, medoids: List[int]):
    """
    SWAP: applies the best cost-reducing medoid/non-medoid exchange until none is left.

    :return: tuple of medoids and cost
    :rtype: tuple
    """
    n = d.shape[0]
    medoids = list(medoids)
    cost = _total_cost(d, medoids)
    while True:
        best_cost = cost
        best_move = None
        for p in range(len(medoids)):
            others = medoids[:p] + medoids[p + 1:]
            if len(others) > 0:
                base = np.min(d[:, others], axis=1)
            else:
                base = np.full(n, np.inf)
            candidates = np.minimum(base[:, None], d).sum(axis=0)
            candidates[medoids] = np.inf
            h = int(np.argmin(candidates))
            if candidates[h] < best_cost - SWAP_TOLERANCE:
                best_cost = float(candidates[h])
                best_move = (p, h)
        if best_move is None:
            return medoids, cost
        medoids[best_move[0]] = best_move[1]
        cost = best_cost


def _assign(d: np.ndarray, medoids: Sequence[int]) -> ClusterAssignment:
    medoids = sorted(int(m) for m in medoids)
    labels = np.argmin(d[:, medoids], axis=1)
    for c, m in enumerate(medoids):
        labels[m] = c
    cost = float(np.sum(d[np.arange(d.shape[0]), np.asarray(medoids)[labels]]))
    return ClusterAssignment(k=len(medoids), medoids=medoids, labels=[int(x) for x in labels], total_cost=cost)


def pam(d: DissimMatrix, k: int, seed: int = 0, restarts: int = DEFAULT_RESTARTS) -> ClusterAssignment:
    """
    Partitioning around medoids: BUILD initialization followed by SWAP local search.
    The restarts begin the SWAP phase from random medoid sets drawn with the seed,
    the cheapest result wins (BUILD result on ties). SWAP alone stops in a local
    optimum, the restarts make the global optimum likely for small panels.

    :param d: the dissimilarities
    :type d: DissimMatrix
    :param k: the number of clusters
    :type k: int
    :param seed: the seed for the restarts
    :type seed: int
    :param restarts: the number of random restarts
    :type restarts: int
    :return: the assignment
    :rtype: ClusterAssignment
    """
    values = np.asarray(d.values, dtype=float)
    n = values.shape[0]
    if (k < 1) or (k > n):
        raise ValueError("k must satisfy 1 <= k <= %d, supplied: %d" % (n, k))
    medoids, cost = _swap(values, _build(values, k))
    if (restarts > 0) and (1 < k < n):
        rng = np.random.default_rng(seed)
        for _ in range(restarts):
            start = [int(x) for x in rng.choice(n, size=k, replace=False)]
            candidate, candidate_cost = _swap(values, start)
            if candidate_cost < cost - SWAP_TOLERANCE:
                medoids, cost = candidate, candidate_cost
    return _assign(values, medoids)


def dispersion(d: np.ndarray, labels: Sequence[int]) -> float:
    """
    Within-cluster dispersion W = sum over clusters of (1/(2|C|)) * sum_{i,j in C} D[i][j].

    :param d: the dissimilarity values
    :type d: np.ndarray
    :param labels: the cluster id per object
    :return: the dispersion
    :rtype: float
    """
    d = np.asarray(d, dtype=float)
    labels = np.asarray(labels)
    result = 0.0
    for c in np.unique(labels):
        members = np.nonzero(labels == c)[0]
        result += float(d[np.ix_(members, members)].sum()) / (2.0 * len(members))
    return result


def _log_dispersions(d: np.ndarray, k_max: int, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> np.ndarray:
    matrix = DissimMatrix(assets=[str(i) for i in range(d.shape[0])], values=d)
    result = []
    for k in range(1, k_max + 1):
        assignment = pam(matrix, k, seed=seed, restarts=restarts)
        result.append(np.log(max(dispersion(d, assignment.labels), DISPERSION_FLOOR)))
    return np.array(result)


def gap_statistic(d_real: DissimMatrix, d_refs: Sequence[np.ndarray], k_max: int, restarts: int = DEFAULT_RESTARTS,
                  seed: int = 0, logger: logging.Logger = None) -> GapResult:
    """
    Computes the Gap curve and selects the smallest k with Gap(k) >= Gap(k+1) - sd(k+1),
    where sd includes the sqrt(1 + 1/B) correction. Falls back to the maximum Gap if no k
    satisfies the rule. An all-zero dissimilarity matrix yields k = 1.

    :param d_real: the dissimilarities of the data
    :type d_real: DissimMatrix
    :param d_refs: the dissimilarity values of the reference replicates
    :type d_refs: list
    :param k_max: the largest number of clusters to evaluate, less than the number of assets
    :type k_max: int
    :param restarts: the random PAM restarts
    :type restarts: int
    :param seed: the seed for the PAM restarts
    :type seed: int
    :param logger: the optional logger
    :type logger: logging.Logger
    :return: the Gap curve and the selected k
    :rtype: GapResult
    """
    n = d_real.size
    if (k_max < 1) or (k_max >= n):
        raise ValueError("k_max must satisfy 1 <= k_max < %d, supplied: %d" % (n, k_max))
    if len(d_refs) < 1:
        raise ValueError("At least one reference replicate required!")
    ks = list(range(1, k_max + 1))
    real = np.asarray(d_real.values, dtype=float)
    log_w = _log_dispersions(real, k_max, restarts=restarts, seed=seed)
    refs = np.array([_log_dispersions(np.asarray(r, dtype=float), k_max, restarts=restarts, seed=seed) for r in d_refs])
    log_w_ref = refs.mean(axis=0)
    gap = log_w_ref - log_w
    sd = refs.std(axis=0, ddof=0) * np.sqrt(1.0 + 1.0 / len(d_refs))
    result = GapResult(ks=ks, log_w=log_w.tolist(), log_w_ref=log_w_ref.tolist(), gap=gap.tolist(), sd=sd.tolist(),
                       k=1, num_refs=len(d_refs), dispersions=np.exp(log_w).tolist())

    if not np.any(real > 0):
        if logger is not None:
            logger.warning("All dissimilarities are zero, using k=1")
        return result
    for i in range(len(ks) - 1):
        if gap[i] >= gap[i + 1] - sd[i + 1]:
            result.k = ks[i]
            return result
    if len(ks) == 1:
        return result
    result.k = ks[int(np.argmax(gap))]
    result.fallback = True
    if logger is not None:
        logger.warning("No k satisfies the Gap rule, using the maximum Gap: k=%d" % result.k)
    return result


def uniform_reference_panel(panel: ReturnPanel, rng: np.random.Generator) -> ReturnPanel:
    """
    Draws a panel without structure: at each date, every asset is uniform over the
    cross-asset [min, max] of the real panel at that date.

    :param panel: the real panel
    :type panel: ReturnPanel
    :param rng: the random generator
    :type rng: np.random.Generator
    :return: the reference panel (same dates and assets)
    :rtype: ReturnPanel
    """
    values = panel.values
    lo = values.min(axis=1)
    hi = values.max(axis=1)
    ref = lo[:, None] + (hi - lo)[:, None] * rng.random(values.shape)
    frame = panel.frame.copy()
    frame.loc[:, :] = ref
    return ReturnPanel(frame=frame, dt=panel.dt, scale=panel.scale)


def _reference_replicate(panel: ReturnPanel, bands: Sequence[FrequencyBand], seed: int, replicate: int,
                         grid: Optional[ScaleGrid], params: MorletParams, smoothing: SmoothingParams,
                         window: Optional[TimeWindow], coi_policy: str) -> List[np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, replicate]))
    ref = uniform_reference_panel(panel, rng)
    matrices = band_matrices(ref, bands, grid=grid, params=params, smoothing=smoothing,
                             windows=None if window is None else [window], coi_policy=coi_policy, n_jobs=1)
    return [dissimilarity_matrix(m).values for m in matrices]


def reference_dissimilarities(panel: ReturnPanel, bands: Sequence[FrequencyBand], num_refs: int = DEFAULT_NUM_REFS,
                              seed: int = 0, grid: Optional[ScaleGrid] = None, params: MorletParams = MorletParams(),
                              smoothing: SmoothingParams = SmoothingParams(), window: Optional[TimeWindow] = None,
                              coi_policy: str = COI_INCLUDE, n_jobs: int = 1,
                              logger: logging.Logger = None) -> List[List[np.ndarray]]:
    """
    Pushes num_refs uniform reference panels through the coherence pipeline. The replicates
    are shared by all bands, replicate r uses the generator seeded with (seed, r).

    :param panel: the real panel
    :type panel: ReturnPanel
    :param bands: the bands to compute
    :type bands: list
    :param num_refs: the number of replicates
    :type num_refs: int
    :param seed: the seed
    :type seed: int
    :param window: the time window to average over, the complete panel if None
    :type window: TimeWindow
    :param n_jobs: the number of parallel workers
    :type n_jobs: int
    :param logger: the optional logger
    :type logger: logging.Logger
    :return: per band the list of reference dissimilarity values
    :rtype: list
    """
    if num_refs < 1:
        raise ValueError("At least one reference replicate required, supplied: %d" % num_refs)
    if logger is not None:
        logger.info("Generating %d reference panels" % num_refs)
    replicates = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_reference_replicate)(panel, bands, seed, r, grid, params, smoothing, window, coi_policy)
        for r in range(num_refs))
    return [[replicate[b] for replicate in replicates] for b in range(len(bands))]


def uniform_dissimilarities(d_real: DissimMatrix, num_refs: int = DEFAULT_NUM_REFS, seed: int = 0) -> List[np.ndarray]:
    """
    Cheap references: symmetric matrices with off-diagonal entries uniform over the
    [min, max] of the real off-diagonal dissimilarities.

    :param d_real: the real dissimilarities
    :type d_real: DissimMatrix
    :param num_refs: the number of replicates
    :type num_refs: int
    :param seed: the seed
    :type seed: int
    :return: the reference dissimilarity values
    :rtype: list
    """
    if num_refs < 1:
        raise ValueError("At least one reference replicate required, supplied: %d" % num_refs)
    values = np.asarray(d_real.values, dtype=float)
    n = values.shape[0]
    upper = np.triu_indices(n, k=1)
    lo = float(values[upper].min())
    hi = float(values[upper].max())
    result = []
    for r in range(num_refs):
        rng = np.random.default_rng(np.random.SeedSequence([seed, r]))
        ref = np.zeros((n, n))
        ref[upper] = rng.uniform(lo, hi, size=len(upper[0]))
        result.append(ref + ref.T)
    return result


def gap_select_k(panel_window: ReturnPanel, d_real: DissimMatrix, k_max: int, num_refs: int = DEFAULT_NUM_REFS,
                 seed: int = 0, band: Optional[FrequencyBand] = None, reference_mode: str = REFERENCE_PANEL,
                 grid: Optional[ScaleGrid] = None, params: MorletParams = MorletParams(),
                 smoothing: SmoothingParams = SmoothingParams(), window: Optional[TimeWindow] = None,
                 coi_policy: str = COI_INCLUDE, refs: Optional[Sequence[np.ndarray]] = None,
                 restarts: int = DEFAULT_RESTARTS, pam_seed: int = 0, n_jobs: int = 1,
                 logger: logging.Logger = None, full_output: bool = False) -> Union[int, GapResult]:
    """
    Selects the number of clusters for the window with the Gap statistic.

    :param panel_window: the returns the dissimilarities were computed from
    :type panel_window: ReturnPanel
    :param d_real: the dissimilarities
    :type d_real: DissimMatrix
    :param k_max: the largest number of clusters to consider
    :type k_max: int
    :param num_refs: the number of reference replicates
    :type num_refs: int
    :param seed: the seed for generating the references
    :type seed: int
    :param band: the band the dissimilarities belong to (panel mode)
    :type band: FrequencyBand
    :param reference_mode: panel|uniform
    :type reference_mode: str
    :param window: the time window to average the reference coherences over (panel mode), all times if None
    :type window: TimeWindow
    :param refs: the already computed reference dissimilarities, skips the generation
    :type refs: list
    :param restarts: the random PAM restarts
    :type restarts: int
    :param pam_seed: the seed for the PAM restarts
    :type pam_seed: int
    :param n_jobs: the number of parallel workers
    :type n_jobs: int
    :param logger: the optional logger
    :type logger: logging.Logger
    :param full_output: whether to return the complete Gap curve instead of just k
    :type full_output: bool
    :return: the selected k or the Gap curve
    :rtype: int or GapResult
    """
    if refs is None:
        if reference_mode == REFERENCE_UNIFORM:
            refs = uniform_dissimilarities(d_real, num_refs=num_refs, seed=seed)
        elif reference_mode == REFERENCE_PANEL:
            if band is None:
                raise ValueError("Band required for reference mode '%s'" % REFERENCE_PANEL)
            refs = reference_dissimilarities(panel_window, [band], num_refs=num_refs, seed=seed, grid=grid,
                                             params=params, smoothing=smoothing, window=window, coi_policy=coi_policy,
                                             n_jobs=n_jobs, logger=logger)[0]
        else:
            raise ValueError("Unknown reference mode: %s" % reference_mode)
    result = gap_statistic(d_real, refs, k_max, restarts=restarts, seed=pam_seed, logger=logger)
    if full_output:
        return result
    return result.k


def clusters_to_json(assignment: ClusterAssignment, assets: Sequence[str], gap: Optional[GapResult] = None) -> str:
    """
    Generates the cluster report: k, medoids, labels and the Gap curve (if available).

    :param assignment: the assignment
    :type assignment: ClusterAssignment
    :param assets: the asset names
    :type assets: list
    :param gap: the Gap curve
    :type gap: GapResult
    :return: the JSON string
    :rtype: str
    """
    d = {
        "schema": "wcnet.clusters/1",
        "k": assignment.k,
        "medoids": [assets[m] for m in assignment.medoids],
        "labels": {assets[i]: label for i, label in enumerate(assignment.labels)},
        "total_cost": assignment.total_cost,
        "gap": None,
    }
    if gap is not None:
        d["gap"] = {
            "ks": gap.ks,
            "gap": gap.gap,
            "sd": gap.sd,
            "log_w": gap.log_w,
            "log_w_ref": gap.log_w_ref,
            "dispersion": gap.dispersions,
            "num_refs": gap.num_refs,
            "fallback": gap.fallback,
        }
    return json.dumps(d, indent=2, sort_keys=True)
