import json
import os

import pytest

from wcnet.api import default_config, parse_sub_period, run_pipeline, artifact_name, derive_seed, ConfigError, \
    StageError, DataError, REFERENCE_UNIFORM, MANIFEST_FILE, TIMINGS_FILE, STATUS_OK, STATUS_FAILED, MODE_STATS, \
    MODE_THRESHOLD, WINDOW_MODE_AVERAGE

BANDS = ["short", "medium", "long"]
WINDOW_ARTIFACTS = ["stats.csv", "pearson.csv", "threshold.json"]
BAND_ARTIFACTS = ["band_r2.csv", "band_oriented.csv", "band.json", "dissimilarity.csv", "clusters.json",
                  "network.dot", "network.json", "network_adjacency.csv"]


def _config(prices_csv, tmp_path, name="out"):
    config = default_config()
    config.input.path = prices_csv
    config.sub_periods = [parse_sub_period("summer:2019-03-01:2019-08-30")]
    config.gap.k_max = 3
    config.gap.num_refs = 5
    config.gap.reference_mode = REFERENCE_UNIFORM
    config.threshold.reps = 4
    config.output_dir = os.path.join(str(tmp_path), name)
    return config


def _files(output_dir):
    return sorted(x for x in os.listdir(output_dir) if x not in [MANIFEST_FILE, TIMINGS_FILE])


def _contents(output_dir):
    result = {}
    for name in os.listdir(output_dir):
        if name == TIMINGS_FILE:
            continue
        with open(os.path.join(output_dir, name), "rb") as fp:
            result[name] = fp.read()
    return result


def test_derive_seed():
    assert derive_seed(42, "gap", "full") == derive_seed(42, "gap", "full")
    assert derive_seed(42, "gap", "full") != derive_seed(42, "gap", "oil")
    assert derive_seed(42, "gap", "full") != derive_seed(43, "gap", "full")
    assert 0 <= derive_seed(1, "x") < 2 ** 63


def test_artifact_name():
    assert artifact_name("full", "stats.csv") == "full__stats.csv"
    assert artifact_name("full", "network.dot", "long") == "full__long__network.dot"
    assert artifact_name("my window", "network.dot", "a/b") == "my_window__a_b__network.dot"


def test_run(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    manifest = run_pipeline(config)
    assert manifest.status == STATUS_OK
    expected = []
    for window in ["full", "summer"]:
        expected.extend(artifact_name(window, a) for a in WINDOW_ARTIFACTS)
        for band in BANDS:
            expected.extend(artifact_name(window, a, band) for a in BAND_ARTIFACTS)
    assert sorted(manifest.artifact_paths()) == sorted(expected)
    assert _files(config.output_dir) == sorted(expected)

    with open(os.path.join(config.output_dir, MANIFEST_FILE)) as fp:
        written = json.load(fp)
    assert written["status"] == STATUS_OK
    assert written["timings"] == TIMINGS_FILE
    assert written["input"]["sha256"] == manifest.input_sha256
    assert written["config"]["gap"]["k_max"] == 3
    assert len(written["artifacts"]) == len(expected)
    assert all(len(a["sha256"]) == 64 for a in written["artifacts"])
    with open(os.path.join(config.output_dir, TIMINGS_FILE)) as fp:
        assert "coherence" in json.load(fp)

    with open(os.path.join(config.output_dir, artifact_name("full", "clusters.json", "medium"))) as fp:
        clusters = json.load(fp)
    assert 1 <= clusters["k"] <= 3
    assert set(clusters["labels"].keys()) == {"Gold", "Silver", "S&P 500", "Euro Stoxx"}
    with open(os.path.join(config.output_dir, artifact_name("full", "network.json", "medium"))) as fp:
        network = json.load(fp)
    # fixed display threshold by default
    assert network["threshold"] == 0.38


def test_run_is_deterministic(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    run_pipeline(config)
    first = _contents(config.output_dir)
    run_pipeline(config)
    second = _contents(config.output_dir)
    assert first.keys() == second.keys()
    for name in first:
        assert first[name] == second[name], name


def test_no_sub_periods(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    config.sub_periods = []
    run_pipeline(config)
    networks = [x for x in os.listdir(config.output_dir) if x.endswith("__network.dot")]
    assert len(networks) == 3


def test_estimated_threshold(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    config.sub_periods = []
    config.threshold.override = None
    run_pipeline(config)
    with open(os.path.join(config.output_dir, artifact_name("full", "threshold.json"))) as fp:
        threshold = json.load(fp)
    with open(os.path.join(config.output_dir, artifact_name("full", "network.json", "short"))) as fp:
        network = json.load(fp)
    assert threshold["override"] is None
    assert network["threshold"] == threshold["per_band"]["short"]


def test_clustering_disabled(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    config.gap.enabled = False
    config.export.formats = ["json"]
    manifest = run_pipeline(config)
    paths = manifest.artifact_paths()
    assert artifact_name("summer", "band.json", "long") in paths
    assert artifact_name("summer", "threshold.json") in paths
    assert artifact_name("summer", "network.dot", "long") not in paths
    with open(os.path.join(config.output_dir, artifact_name("full", "clusters.json", "short"))) as fp:
        clusters = json.load(fp)
    assert clusters["k"] == 1
    assert clusters["gap"] is None


def test_average_window_mode(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    config.coherence.window_mode = WINDOW_MODE_AVERAGE
    config.dump_power = True
    manifest = run_pipeline(config)
    paths = manifest.artifact_paths()
    assert artifact_name("summer", "network.json", "medium") in paths
    assert artifact_name("full", "power__Gold.csv") in paths
    assert artifact_name("summer", "power__Gold.csv") not in paths


def test_stats_mode(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    manifest = run_pipeline(config, mode=MODE_STATS)
    assert sorted(manifest.artifact_paths()) == sorted(
        [artifact_name(w, a) for w in ["full", "summer"] for a in ["stats.csv", "pearson.csv"]])


def test_threshold_mode(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    manifest = run_pipeline(config, mode=MODE_THRESHOLD)
    assert sorted(manifest.artifact_paths()) == [artifact_name("full", "threshold.json"),
                                                 artifact_name("summer", "threshold.json")]


def test_failure_is_recorded(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    config.sub_periods = [parse_sub_period("future:2030-01-01:2030-06-30")]
    with pytest.raises(StageError) as e:
        run_pipeline(config)
    assert e.value.stage == "returns"
    assert isinstance(e.value.cause, DataError)
    with open(os.path.join(config.output_dir, MANIFEST_FILE)) as fp:
        manifest = json.load(fp)
    assert manifest["status"] == STATUS_FAILED
    assert manifest["failed_stage"] == "returns"


def test_invalid_config(prices_csv, tmp_path):
    config = _config(prices_csv, tmp_path)
    config.gap.k_max = 10
    with pytest.raises(ConfigError) as e:
        run_pipeline(config)
    assert len(e.value.diagnostics) == 1
    assert not os.path.exists(config.output_dir)
    with pytest.raises(ConfigError):
        run_pipeline(_config(prices_csv, tmp_path), mode="other")
