import contextlib
import importlib.metadata
import json
import logging
import os
import time
import traceback
from dataclasses import dataclass, field
from typing import List, Dict, Optional, Any, Tuple

import numpy as np
import pandas as pd

from ._clustering import (dissimilarity_matrix, pam, gap_select_k, reference_dissimilarities, clusters_to_json,
                          REFERENCE_UNIFORM, GapResult, ClusterAssignment)
from ._coherence import TimeWindow, BandMatrix, band_matrices, band_matrix_to_json, write_band_matrix, full_window
from ._config import PipelineConfig, validate_config, config_to_dict, WINDOW_MODE_AVERAGE, FULL_WINDOW
from ._cwt import ScaleGrid, make_scale_grid, cwt, dump_power
from ._errors import ConfigError, StageError
from ._ingest import (load_price_table, align_and_clean, log_returns, slice_period, descriptive_stats,
                      pearson_matrix, write_stats, write_matrix, ReturnPanel)
from ._netgraph import (noise_threshold, build_network, export_graph, threshold_to_json, ThresholdEstimate,
                        FORMAT_DOT, FORMAT_JSON, FORMAT_ADJACENCY)
from ._utils import fingerprint_file, derive_seed, safe_name

MODE_RUN = "run"
MODE_STATS = "stats"
MODE_THRESHOLD = "threshold"
MODES = [
    MODE_RUN,
    MODE_STATS,
    MODE_THRESHOLD,
]

STAGE_INGEST = "ingest"
STAGE_RETURNS = "returns"
STAGE_STATS = "stats"
STAGE_COHERENCE = "coherence"
STAGE_THRESHOLD = "threshold"
STAGE_CLUSTERING = "clustering"
STAGE_NETWORK = "network"
STAGE_EXPORT = "export"

STATUS_OK = "ok"
STATUS_FAILED = "failed"

MANIFEST_FILE = "manifest.json"
TIMINGS_FILE = "timings.json"
MANIFEST_SCHEMA = "wcnet.manifest/1"

NETWORK_ARTIFACTS = {
    FORMAT_DOT: "network.dot",
    FORMAT_JSON: "network.json",
    FORMAT_ADJACENCY: "network_adjacency.csv",
}


@dataclass
class RunManifest:
    """
    Record of a pipeline run: resolved configuration, input fingerprint, the emitted
    artifacts (paths relative to the output directory) and library versions.
    The wall-clock timings go into a separate file, the manifest content only
    depends on configuration and input.
    """
    config: Dict[str, Any]
    mode: str
    input_path: Optional[str] = None
    input_sha256: Optional[str] = None
    artifacts: List[Dict[str, str]] = field(default_factory=list)
    versions: Dict[str, str] = field(default_factory=dict)
    status: str = STATUS_OK
    failed_stage: Optional[str] = None
    error: Optional[str] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": MANIFEST_SCHEMA,
            "config": self.config,
            "mode": self.mode,
            "input": {"path": self.input_path, "sha256": self.input_sha256},
            "artifacts": self.artifacts,
            "versions": self.versions,
            "status": self.status,
            "failed_stage": self.failed_stage,
            "error": self.error,
            "timings": TIMINGS_FILE,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def artifact_paths(self) -> List[str]:
        return [a["path"] for a in self.artifacts]


def library_versions() -> Dict[str, str]:
    """
    Returns the versions of the libraries that determine the numeric results.

    :return: the name/version mapping
    :rtype: dict
    """
    result = {}
    for name in ["wcnet", "numpy", "scipy", "pandas", "pydot"]:
        try:
            result[name] = importlib.metadata.version(name)
        except importlib.metadata.PackageNotFoundError:
            result[name] = "unknown"
    return result


def artifact_name(window: str, artifact: str, band: Optional[str] = None) -> str:
    """
    Generates the file name <window>__<band>__<artifact>, or <window>__<artifact> for per-window artifacts.

    :param window: the window label
    :type window: str
    :param artifact: the artifact name including extension
    :type artifact: str
    :param band: the band label, if any
    :type band: str
    :return: the file name
    :rtype: str
    """
    if band is None:
        return "%s__%s" % (safe_name(window), artifact)
    return "%s__%s__%s" % (safe_name(window), safe_name(band), artifact)


class _Run:
    """
    Book-keeping for a single run: stage timing, failure tagging and artifact registration.
    """

    def __init__(self, config: PipelineConfig, mode: str, logger: logging.Logger):
        self.config = config
        self.logger = logger
        self.output_dir = config.output_dir
        self.manifest = RunManifest(config=config_to_dict(config), mode=mode, input_path=config.input.path,
                                    versions=library_versions())

    @contextlib.contextmanager
    def stage(self, name: str):
        self.logger.info("Stage: %s" % name)
        start = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except Exception as e:
            self.logger.debug(traceback.format_exc())
            raise StageError(name, e)
        finally:
            self.manifest.timings[name] = self.manifest.timings.get(name, 0.0) + time.perf_counter() - start

    def path(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def register(self, name: str):
        self.manifest.artifacts.append({"path": name, "sha256": fingerprint_file(self.path(name))})

    def write_text(self, name: str, content: str):
        with open(self.path(name), "w", newline="\n") as fp:
            fp.write(content)
            if not content.endswith("\n"):
                fp.write("\n")
        self.register(name)

    def finish(self):
        self.manifest.artifacts.sort(key=lambda a: a["path"])
        with open(self.path(TIMINGS_FILE), "w", newline="\n") as fp:
            json.dump({k: round(v, 6) for k, v in self.manifest.timings.items()}, fp, indent=2, sort_keys=True)
            fp.write("\n")
        # last
        with open(self.path(MANIFEST_FILE), "w", newline="\n") as fp:
            fp.write(self.manifest.to_json())
            fp.write("\n")


def _window_grid(config: PipelineConfig, n: int, dt: float, logger: logging.Logger) -> ScaleGrid:
    s_max = config.grid.s_max
    if (s_max is not None) and (s_max > n * dt / 2.0):
        logger.warning("grid.s_max=%g exceeds half the window length (%d), using the default" % (s_max, n))
        s_max = None
    return make_scale_grid(n, dt=dt, voices=config.grid.voices, s0=config.grid.s0, s_max=s_max)


def _windows(config: PipelineConfig, panel: ReturnPanel) -> List[Tuple[TimeWindow, ReturnPanel, ReturnPanel]]:
    """
    Returns the full sample plus the sub-periods, each with the panel to transform and
    the returns inside the window. In average mode every window transforms the full panel.
    """
    result = [(full_window(panel, label=FULL_WINDOW), panel, panel)]
    for window in config.sub_periods:
        sub = slice_period(panel, window.start, window.end)
        if config.coherence.window_mode == WINDOW_MODE_AVERAGE:
            result.append((window, panel, sub))
        else:
            result.append((window, sub, sub))
    return result


def _run_stats(run: _Run, window: TimeWindow, returns: ReturnPanel):
    name = artifact_name(window.label, "stats.csv")
    write_stats(descriptive_stats(returns), run.path(name))
    run.register(name)
    name = artifact_name(window.label, "pearson.csv")
    write_matrix(pearson_matrix(returns), run.path(name))
    run.register(name)


def _run_coherence(run: _Run, window: TimeWindow, panel: ReturnPanel, grid: ScaleGrid,
                   dump: bool) -> List[BandMatrix]:
    config = run.config
    matrices = band_matrices(
        panel, config.bands, grid=grid, params=config.morlet.to_params(),
        smoothing=config.smoothing.to_params(), windows=[window],
        coi_policy=config.coherence.coi_policy, n_jobs=config.n_jobs, logger=run.logger)
    for matrix in matrices:
        band = matrix.band.label
        name_r2 = artifact_name(window.label, "band_r2.csv", band)
        name_oriented = artifact_name(window.label, "band_oriented.csv", band)
        write_band_matrix(matrix, run.path(name_r2), run.path(name_oriented))
        run.register(name_r2)
        run.register(name_oriented)
        run.write_text(artifact_name(window.label, "band.json", band), band_matrix_to_json(matrix))
    if dump:
        values = panel.values
        for i, asset in enumerate(panel.assets):
            name = artifact_name(window.label, "power__%s.csv" % safe_name(asset))
            dump_power(cwt(values[:, i], grid, config.morlet.to_params()), run.path(name))
            run.register(name)
    return matrices


def _run_threshold(run: _Run, window: TimeWindow, returns: ReturnPanel) -> ThresholdEstimate:
    config = run.config
    n = len(returns)
    estimate = noise_threshold(
        np.var(returns.values, axis=0, ddof=1), n, config.bands, grid=_window_grid(config, n, returns.dt, run.logger),
        params=config.morlet.to_params(), smoothing=config.smoothing.to_params(),
        reps=config.threshold.reps, quantile=config.threshold.quantile,
        seed=derive_seed(config.seed, "threshold", window.label), pairing=config.threshold.pairing,
        coi_policy=config.coherence.coi_policy, dt=returns.dt, n_jobs=config.n_jobs, logger=run.logger)
    run.write_text(artifact_name(window.label, "threshold.json"), threshold_to_json(estimate, config.threshold.override))
    run.logger.info("Noise threshold for '%s': %s" % (window.label, str(estimate.per_band)))
    return estimate


def _run_clustering(run: _Run, window: TimeWindow, panel: ReturnPanel, grid: ScaleGrid,
                    matrices: List[BandMatrix]) -> Dict[str, ClusterAssignment]:
    config = run.config
    result = {}
    refs = None
    # one set of reference panels per window, shared by all bands
    if config.gap.enabled and (config.gap.reference_mode != REFERENCE_UNIFORM):
        refs = reference_dissimilarities(
            panel, config.bands, num_refs=config.gap.num_refs, seed=derive_seed(config.seed, "gap", window.label),
            grid=grid, params=config.morlet.to_params(), smoothing=config.smoothing.to_params(),
            window=window if config.coherence.window_mode == WINDOW_MODE_AVERAGE else None,
            coi_policy=config.coherence.coi_policy, n_jobs=config.n_jobs, logger=run.logger)
    for b, matrix in enumerate(matrices):
        band = matrix.band.label
        d = dissimilarity_matrix(matrix)
        name = artifact_name(window.label, "dissimilarity.csv", band)
        write_matrix(pd.DataFrame(d.values, index=d.assets, columns=d.assets), run.path(name))
        run.register(name)
        gap: Optional[GapResult] = None
        k = 1
        pam_seed = derive_seed(config.seed, "pam", window.label, band)
        if config.gap.enabled:
            gap = gap_select_k(panel, d, min(config.gap.k_max, d.size - 1), num_refs=config.gap.num_refs,
                               seed=derive_seed(config.seed, "gap", window.label, band), band=matrix.band,
                               reference_mode=config.gap.reference_mode, refs=None if refs is None else refs[b],
                               restarts=config.pam.restarts, pam_seed=pam_seed, logger=run.logger, full_output=True)
            k = gap.k
        assignment = pam(d, k, seed=pam_seed, restarts=config.pam.restarts)
        run.write_text(artifact_name(window.label, "clusters.json", band), clusters_to_json(assignment, d.assets, gap))
        run.logger.info("Clusters for '%s'/'%s': k=%d" % (window.label, band, k))
        result[band] = assignment
    return result


def run_pipeline(config: PipelineConfig, mode: str = MODE_RUN, logger: logging.Logger = None) -> RunManifest:
    """
    Runs the analysis for the full sample and every sub-period and writes all artifacts
    plus the manifest (written last) to the output directory.

    Modes: run (everything), stats (descriptive statistics and correlations only),
    threshold (noise threshold study only).

    :param config: the configuration
    :type config: PipelineConfig
    :param mode: run|stats|threshold
    :type mode: str
    :param logger: the logger to use, uses the 'wcnet' logger if None
    :type logger: logging.Logger
    :return: the manifest
    :rtype: RunManifest
    """
    if logger is None:
        logger = logging.getLogger("wcnet")
    if mode not in MODES:
        raise ConfigError("Unknown mode: %s" % mode)
    diagnostics = validate_config(config)
    if len(diagnostics) > 0:
        raise ConfigError("Invalid configuration", diagnostics=diagnostics)
    os.makedirs(config.output_dir, exist_ok=True)

    run = _Run(config, mode, logger)
    try:
        with run.stage(STAGE_INGEST):
            table = load_price_table(config.input.path, date_column=config.input.date_column,
                                     date_format=config.input.date_format, delimiter=config.input.delimiter)
            num_rows = len(table)
            table = align_and_clean(table)
            if len(table) < num_rows:
                logger.warning("Dropped %d incomplete rows" % (num_rows - len(table)))
            run.manifest.input_sha256 = fingerprint_file(config.input.path)

        with run.stage(STAGE_RETURNS):
            panel = log_returns(table, scale=config.returns.scale)
            windows = _windows(config, panel)

        if mode in [MODE_RUN, MODE_STATS]:
            with run.stage(STAGE_STATS):
                for window, _, returns in windows:
                    _run_stats(run, window, returns)

        if mode == MODE_THRESHOLD:
            with run.stage(STAGE_THRESHOLD):
                for window, _, returns in windows:
                    _run_threshold(run, window, returns)

        if mode == MODE_RUN:
            average = config.coherence.window_mode == WINDOW_MODE_AVERAGE
            for window, transformed, returns in windows:
                logger.info("Window '%s': %d observations" % (window.label, len(returns)))
                grid = _window_grid(config, len(transformed), transformed.dt, logger)

                with run.stage(STAGE_COHERENCE):
                    dump = config.dump_power and ((not average) or (window.label == FULL_WINDOW))
                    matrices = _run_coherence(run, window, transformed, grid, dump)

                with run.stage(STAGE_THRESHOLD):
                    estimate = _run_threshold(run, window, returns)

                with run.stage(STAGE_CLUSTERING):
                    clusters = _run_clustering(run, window, transformed, grid, matrices)

                with run.stage(STAGE_NETWORK):
                    networks = []
                    for matrix in matrices:
                        threshold = config.threshold.override
                        if threshold is None:
                            threshold = estimate.per_band[matrix.band.label]
                        networks.append(build_network(matrix, clusters[matrix.band.label], threshold))

                with run.stage(STAGE_EXPORT):
                    for network in networks:
                        for fmt in config.export.formats:
                            name = artifact_name(window.label, NETWORK_ARTIFACTS[fmt], network.band.label)
                            export_graph(network, fmt, run.path(name))
                            run.register(name)
    except StageError as e:
        logger.error(str(e))
        run.manifest.status = STATUS_FAILED
        run.manifest.failed_stage = e.stage
        run.manifest.error = str(e.cause)
        run.finish()
        raise

    run.finish()
    logger.info("Wrote %d artifacts to: %s" % (len(run.manifest.artifacts), config.output_dir))
    return run.manifest
