import argparse
import datetime
import os

import pytest

from wcnet.api import default_config, validate_config, load_config, save_config, config_to_dict, config_from_dict, \
    resolve_config, apply_args, config_params, params_to_parser, parse_band, parse_sub_period, set_config_value, \
    ConfigError, FrequencyBand, ENV_WCNET_OUTPUT_DIR

from conftest import write_prices, returns_to_prices


def _parse(args):
    parser = argparse.ArgumentParser()
    params_to_parser(parser, config_params())
    return parser.parse_args(args)


def _write(tmp_path, content, name="config.yaml"):
    path = os.path.join(str(tmp_path), name)
    with open(path, "w") as fp:
        fp.write(content)
    return path


@pytest.fixture
def fourteen_assets(tmp_path, rng):
    path = os.path.join(str(tmp_path), "fourteen.csv")
    return write_prices(path, returns_to_prices(0.01 * rng.normal(size=(50, 14))), ["A%02d" % i for i in range(14)])


def test_defaults():
    config = default_config()
    assert [b.label for b in config.bands] == ["short", "medium", "long"]
    assert config.bands[2].s_hi is None
    assert [w.label for w in config.sub_periods] == ["eurozone", "oil", "covid"]
    assert config.sub_periods[2].end == datetime.date(2020, 11, 13)
    assert config.threshold.override == 0.38
    assert config.gap.num_refs == 50
    assert config.threshold.reps == 100
    assert validate_config(config, check_input=False) == []


def test_defaults_with_input(fourteen_assets):
    config = default_config()
    config.input.path = fourteen_assets
    assert validate_config(config) == []


def test_missing_input():
    assert validate_config(default_config()) == ["No input file provided!"]


def test_reversed_band():
    config = default_config()
    config.bands.append(FrequencyBand("bad", 22.0, 5.0))
    diagnostics = validate_config(config, check_input=False)
    assert len(diagnostics) == 1
    assert "'bad'" in diagnostics[0]


def test_k_max_against_assets(fourteen_assets):
    config = default_config()
    config.input.path = fourteen_assets
    config.gap.k_max = 20
    diagnostics = validate_config(config)
    assert len(diagnostics) == 1
    assert "k_max" in diagnostics[0]
    config.gap.enabled = False
    assert validate_config(config) == []


def test_collects_all_problems():
    config = default_config()
    config.threshold.quantile = 2.0
    config.coherence.coi_policy = "other"
    config.seed = -1
    assert len(validate_config(config, check_input=False)) == 3


def test_load_config(tmp_path):
    path = _write(tmp_path,
                  "input:\n"
                  "  path: prices.csv\n"
                  "bands:\n"
                  "  - {label: fast, s_lo: 2, s_hi: 8}\n"
                  "sub_periods:\n"
                  "  - {label: covid, start: 2020-01-01, end: 2020-11-13}\n"
                  "gap:\n"
                  "  k_max: 4\n"
                  "seed: 7\n")
    config = load_config(path)
    assert config.input.path == "prices.csv"
    assert config.bands == [FrequencyBand("fast", 2.0, 8.0)]
    assert config.sub_periods[0].start == datetime.date(2020, 1, 1)
    assert config.gap.k_max == 4
    assert config.gap.num_refs == 50
    assert config.seed == 7


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError) as e:
        load_config(_write(tmp_path, "gap:\n  kmax: 4\nother: 1\n"))
    assert len(e.value.diagnostics) == 2
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "- a\n- b\n", "list.yaml"))
    with pytest.raises(ConfigError):
        load_config(os.path.join(str(tmp_path), "missing.yaml"))


def test_save_and_load(tmp_path):
    config = default_config()
    config.input.path = "prices.csv"
    config.threshold.override = None
    path = os.path.join(str(tmp_path), "saved.yaml")
    save_config(config, path)
    assert load_config(path) == config
    assert config_from_dict(config_to_dict(config)) == config


def test_flags_override_file(tmp_path, monkeypatch):
    monkeypatch.delenv(ENV_WCNET_OUTPUT_DIR, raising=False)
    path = _write(tmp_path, "gap:\n  k_max: 4\n  num_refs: 10\noutput_dir: from_file\n")
    ns = _parse(["--k_max", "3", "--band", "a:2:5", "--band", "b:5:", "--no_sub_periods",
                 "--threshold_override", "none", "--formats", "dot", "json"])
    config = resolve_config(path, ns)
    assert config.gap.k_max == 3
    assert config.gap.num_refs == 10
    assert config.bands == [FrequencyBand("a", 2.0, 5.0), FrequencyBand("b", 5.0, None)]
    assert config.sub_periods == []
    assert config.threshold.override is None
    assert config.export.formats == ["dot", "json"]
    assert config.output_dir == "from_file"


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_WCNET_OUTPUT_DIR, "from_env")
    path = _write(tmp_path, "output_dir: from_file\n")
    assert resolve_config(path).output_dir == "from_env"
    assert resolve_config(path, _parse(["-o", "from_flag"])).output_dir == "from_flag"


def test_unset_flags_keep_values():
    config = default_config()
    apply_args(config, _parse([]))
    assert config == default_config()
    apply_args(config, _parse(["--no_clustering", "--dump_power", "--sub_period", "x:2020-01-01:2020-02-01"]))
    assert config.gap.enabled is False
    assert config.dump_power is True
    assert [w.label for w in config.sub_periods] == ["x"]


def test_parse_band_and_sub_period():
    assert parse_band("long:22:") == FrequencyBand("long", 22.0, None)
    assert parse_band("long:22:inf") == FrequencyBand("long", 22.0, None)
    with pytest.raises(ConfigError):
        parse_band("long:22")
    with pytest.raises(ConfigError):
        parse_band("long:x:5")
    window = parse_sub_period("oil:2014-06-20:2016-02-28")
    assert window.start == datetime.date(2014, 6, 20)
    with pytest.raises(ConfigError):
        parse_sub_period("oil:2014-06-20:someday")


def test_set_config_value():
    config = default_config()
    set_config_value(config, "pam.restarts", 3)
    assert config.pam.restarts == 3
    with pytest.raises(ConfigError):
        set_config_value(config, "pam.unknown", 3)


def test_wrong_types_are_reported():
    config = config_from_dict({"gap": {"k_max": "six"}, "threshold": {"quantile": "high", "override": None},
                               "dump_power": "yes", "export": {"formats": ["dot", 3]}})
    diagnostics = validate_config(config, check_input=False)
    assert len(diagnostics) == 4
    assert any(d.startswith("gap.k_max must be an integer") for d in diagnostics)
    assert any(d.startswith("threshold.quantile must be a number") for d in diagnostics)
    assert any(d.startswith("dump_power must be a boolean") for d in diagnostics)
    assert any(d.startswith("export.formats must be a list of strings") for d in diagnostics)
    assert config.gap.k_max == "six"


def test_integers_accepted_as_numbers():
    config = config_from_dict({"returns": {"scale": 100}, "grid": {"s0": 2}, "threshold": {"override": 0}})
    assert validate_config(config, check_input=False) == []
