import argparse
import copy
import datetime
import os
from dataclasses import dataclass, field, asdict, fields, is_dataclass
from typing import List, Optional, Dict, Any, Union, get_origin, get_args

import yaml

from ._coherence import FrequencyBand, TimeWindow, COI_POLICIES, COI_INCLUDE, SmoothingParams
from ._clustering import REFERENCE_MODES, REFERENCE_PANEL, DEFAULT_NUM_REFS, DEFAULT_RESTARTS
from ._cwt import DEFAULT_VOICES, DEFAULT_OMEGA0, MorletParams
from ._errors import ConfigError, DataError
from ._help import CommandlineParameter
from ._ingest import DEFAULT_DATE_FORMAT, DEFAULT_DELIMITER, read_asset_names
from ._netgraph import PAIRINGS, PAIRING_RANDOM, EXPORT_FORMATS, DEFAULT_REPS, DEFAULT_QUANTILE, DEFAULT_THRESHOLD

ENV_WCNET_OUTPUT_DIR = "WCNET_OUTPUT_DIR"

WINDOW_MODE_SLICE = "slice"
WINDOW_MODE_AVERAGE = "average"
WINDOW_MODES = [
    WINDOW_MODE_SLICE,
    WINDOW_MODE_AVERAGE,
]

FULL_WINDOW = "full"

DEFAULT_SEED = 42
DEFAULT_OUTPUT_DIR = "output"
DEFAULT_K_MAX = 6


@dataclass
class InputConfig:
    path: Optional[str] = None
    date_column: str = "Date"
    date_format: str = DEFAULT_DATE_FORMAT
    delimiter: str = DEFAULT_DELIMITER


@dataclass
class ReturnsConfig:
    scale: float = 1.0


@dataclass
class GridConfig:
    voices: int = DEFAULT_VOICES
    s0: Optional[float] = None
    s_max: Optional[float] = None


@dataclass
class MorletConfig:
    omega0: float = DEFAULT_OMEGA0

    def to_params(self) -> MorletParams:
        return MorletParams(omega0=self.omega0)


@dataclass
class SmoothingConfig:
    time_factor: float = 1.0
    truncate: float = 4.0
    scale_width: float = 0.6

    def to_params(self) -> SmoothingParams:
        return SmoothingParams(time_factor=self.time_factor, truncate=self.truncate, scale_width=self.scale_width)


@dataclass
class CoherenceConfig:
    coi_policy: str = COI_INCLUDE
    window_mode: str = WINDOW_MODE_SLICE


@dataclass
class GapConfig:
    enabled: bool = True
    k_max: int = DEFAULT_K_MAX
    num_refs: int = DEFAULT_NUM_REFS
    reference_mode: str = REFERENCE_PANEL


@dataclass
class ThresholdConfig:
    reps: int = DEFAULT_REPS
    quantile: float = DEFAULT_QUANTILE
    override: Optional[float] = DEFAULT_THRESHOLD
    pairing: str = PAIRING_RANDOM


@dataclass
class PamConfig:
    restarts: int = DEFAULT_RESTARTS


@dataclass
class ExportConfig:
    formats: List[str] = field(default_factory=lambda: list(EXPORT_FORMATS))


def default_bands() -> List[FrequencyBand]:
    """
    The investment horizons in days: short (2-5), medium (5-22) and long (above 22).
    """
    return [
        FrequencyBand("short", 2.0, 5.0),
        FrequencyBand("medium", 5.0, 22.0),
        FrequencyBand("long", 22.0, None),
    ]


def default_sub_periods() -> List[TimeWindow]:
    """
    The crisis periods: sovereign debt crisis, oil price collapse and pandemic.
    """
    return [
        TimeWindow("eurozone", datetime.date(2010, 10, 13), datetime.date(2012, 7, 31)),
        TimeWindow("oil", datetime.date(2014, 6, 20), datetime.date(2016, 2, 28)),
        TimeWindow("covid", datetime.date(2020, 1, 1), datetime.date(2020, 11, 13)),
    ]


@dataclass
class PipelineConfig:
    input: InputConfig = field(default_factory=InputConfig)
    returns: ReturnsConfig = field(default_factory=ReturnsConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    morlet: MorletConfig = field(default_factory=MorletConfig)
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    bands: List[FrequencyBand] = field(default_factory=default_bands)
    sub_periods: List[TimeWindow] = field(default_factory=default_sub_periods)
    coherence: CoherenceConfig = field(default_factory=CoherenceConfig)
    gap: GapConfig = field(default_factory=GapConfig)
    threshold: ThresholdConfig = field(default_factory=ThresholdConfig)
    pam: PamConfig = field(default_factory=PamConfig)
    export: ExportConfig = field(default_factory=ExportConfig)
    dump_power: bool = False
    seed: int = DEFAULT_SEED
    output_dir: str = DEFAULT_OUTPUT_DIR
    n_jobs: int = 1


def default_config() -> PipelineConfig:
    """
    Returns the default configuration: three bands, full sample plus three crisis
    sub-periods, Gap statistic with 50 references, 100 noise repetitions at the 95%
    quantile and the fixed display threshold of 0.38.

    :return: the configuration
    :rtype: PipelineConfig
    """
    return PipelineConfig()


def config_to_dict(config: PipelineConfig) -> Dict[str, Any]:
    """
    Turns the configuration into plain data (dates as ISO strings).

    :param config: the configuration
    :type config: PipelineConfig
    :return: the dictionary
    :rtype: dict
    """
    result = asdict(config)
    result["bands"] = [{"label": b.label, "s_lo": b.s_lo, "s_hi": b.s_hi} for b in config.bands]
    result["sub_periods"] = [{"label": w.label, "start": w.start.isoformat(), "end": w.end.isoformat()}
                             for w in config.sub_periods]
    return result


def _to_date(value, what: str, errors: List[str]) -> Optional[datetime.date]:
    if isinstance(value, datetime.datetime):
        return value.date()
    if isinstance(value, datetime.date):
        return value
    try:
        return datetime.datetime.strptime(str(value).strip(), "%Y-%m-%d").date()
    except ValueError:
        errors.append("Invalid date for %s: %s" % (what, str(value)))
        return None


def parse_band(s: str) -> FrequencyBand:
    """
    Parses a band definition of the form LABEL:S_LO:S_HI, with S_HI empty or 'inf' for unbounded.

    :param s: the definition to parse
    :type s: str
    :return: the band
    :rtype: FrequencyBand
    """
    parts = s.split(":")
    if len(parts) != 3:
        raise ConfigError("Band definition must be LABEL:S_LO:S_HI, supplied: %s" % s)
    try:
        s_lo = float(parts[1])
        s_hi = None if parts[2].strip().lower() in ["", "inf", "none"] else float(parts[2])
    except ValueError:
        raise ConfigError("Invalid scales in band definition: %s" % s)
    return FrequencyBand(parts[0], s_lo, s_hi)


def parse_sub_period(s: str) -> TimeWindow:
    """
    Parses a sub-period definition of the form LABEL:YYYY-MM-DD:YYYY-MM-DD.

    :param s: the definition to parse
    :type s: str
    :return: the window
    :rtype: TimeWindow
    """
    parts = s.split(":")
    if len(parts) != 3:
        raise ConfigError("Sub-period definition must be LABEL:START:END, supplied: %s" % s)
    errors = []
    start = _to_date(parts[1], "sub-period '%s'" % parts[0], errors)
    end = _to_date(parts[2], "sub-period '%s'" % parts[0], errors)
    if len(errors) > 0:
        raise ConfigError("Invalid sub-period: %s" % s, diagnostics=errors)
    return TimeWindow(parts[0], start, end)


def _update_section(section, values: Dict[str, Any], path: str, errors: List[str]):
    if not isinstance(values, dict):
        errors.append("Section '%s' must be a mapping" % path)
        return
    for key, value in values.items():
        if not hasattr(section, key):
            errors.append("Unknown configuration key: %s%s" % ("" if path == "" else path + ".", key))
            continue
        setattr(section, key, value)


def config_from_dict(d: Optional[Dict[str, Any]], base: Optional[PipelineConfig] = None) -> PipelineConfig:
    """
    Overlays the (nested) dictionary onto the base configuration (defaults if None).

    :param d: the values to apply
    :type d: dict
    :param base: the configuration to start from
    :type base: PipelineConfig
    :return: the new configuration
    :rtype: PipelineConfig
    """
    result = copy.deepcopy(base) if base is not None else default_config()
    if d is None:
        return result
    errors = []
    for key, value in d.items():
        if key == "bands":
            bands = []
            for b in (value or []):
                try:
                    bands.append(FrequencyBand(str(b["label"]), float(b["s_lo"]),
                                               None if b.get("s_hi") is None else float(b["s_hi"])))
                except (KeyError, TypeError, ValueError):
                    errors.append("Invalid band definition: %s" % str(b))
            result.bands = bands
        elif key == "sub_periods":
            periods = []
            for p in (value or []):
                try:
                    label = str(p["label"])
                    start = _to_date(p["start"], "sub-period '%s'" % label, errors)
                    end = _to_date(p["end"], "sub-period '%s'" % label, errors)
                    if (start is not None) and (end is not None):
                        periods.append(TimeWindow(label, start, end))
                except (KeyError, TypeError):
                    errors.append("Invalid sub-period definition: %s" % str(p))
            result.sub_periods = periods
        elif key in ["dump_power", "seed", "output_dir", "n_jobs"]:
            setattr(result, key, value)
        elif hasattr(result, key):
            _update_section(getattr(result, key), value, key, errors)
        else:
            errors.append("Unknown configuration key: %s" % key)
    if len(errors) > 0:
        raise ConfigError("Invalid configuration", diagnostics=errors)
    return result


def load_config(path: str, base: Optional[PipelineConfig] = None) -> PipelineConfig:
    """
    Loads the YAML configuration file and overlays it onto the base configuration.

    :param path: the file to load
    :type path: str
    :param base: the configuration to start from, defaults if None
    :type base: PipelineConfig
    :return: the configuration
    :rtype: PipelineConfig
    """
    if not os.path.exists(path):
        raise ConfigError("Configuration file not found: %s" % path)
    try:
        with open(path, "r") as fp:
            d = yaml.safe_load(fp)
    except yaml.YAMLError as e:
        raise ConfigError("Failed to parse configuration file '%s': %s" % (path, str(e)))
    if (d is not None) and not isinstance(d, dict):
        raise ConfigError("Configuration file must contain a mapping: %s" % path)
    return config_from_dict(d, base=base)


def save_config(config: PipelineConfig, path: str):
    """
    Saves the configuration as YAML.

    :param config: the configuration to save
    :type config: PipelineConfig
    :param path: the file to write to
    :type path: str
    """
    with open(path, "w") as fp:
        yaml.safe_dump(config_to_dict(config), fp, sort_keys=True, default_flow_style=False)


def apply_env(config: PipelineConfig) -> PipelineConfig:
    """
    Applies the environment overrides (output directory).

    :param config: the configuration to update
    :type config: PipelineConfig
    :return: the updated configuration
    :rtype: PipelineConfig
    """
    output_dir = os.getenv(ENV_WCNET_OUTPUT_DIR)
    if (output_dir is not None) and (len(output_dir) > 0):
        config.output_dir = output_dir
    return config


def config_params() -> List[CommandlineParameter]:
    """
    Returns the command-line flags that mirror the configuration values.

    :return: the parameter definitions
    :rtype: list
    """
    return [
        CommandlineParameter(short_opt="-i", long_opt="--input", metavar="FILE", help="The CSV file with the closing prices.", config_key="input.path"),
        CommandlineParameter(long_opt="--date_column", metavar="NAME", help="The column with the dates.", config_key="input.date_column"),
        CommandlineParameter(long_opt="--date_format", metavar="FORMAT", help="The strptime format of the dates.", config_key="input.date_format"),
        CommandlineParameter(long_opt="--delimiter", metavar="CHAR", help="The column delimiter.", config_key="input.delimiter"),
        CommandlineParameter(long_opt="--return_scale", metavar="FACTOR", help="The factor to multiply the log-returns with.", type=float, config_key="returns.scale"),
        CommandlineParameter(long_opt="--voices", metavar="NUM", help="The number of scales per octave.", type=int, config_key="grid.voices"),
        CommandlineParameter(long_opt="--s0", metavar="DAYS", help="The smallest scale.", type=float, config_key="grid.s0"),
        CommandlineParameter(long_opt="--s_max", metavar="DAYS", help="The largest scale.", type=float, config_key="grid.s_max"),
        CommandlineParameter(long_opt="--omega0", metavar="FREQ", help="The Morlet center frequency.", type=float, config_key="morlet.omega0"),
        CommandlineParameter(long_opt="--time_factor", metavar="FACTOR", help="The std of the time smoothing as multiple of the scale.", type=float, config_key="smoothing.time_factor"),
        CommandlineParameter(long_opt="--scale_width", metavar="OCTAVES", help="The width of the scale smoothing.", type=float, config_key="smoothing.scale_width"),
        CommandlineParameter(long_opt="--band", metavar="LABEL:S_LO:S_HI", help="The frequency band(s) to analyze, replaces the configured ones.", action="append", config_key="bands"),
        CommandlineParameter(long_opt="--sub_period", metavar="LABEL:START:END", help="The sub-period(s) to analyze, replaces the configured ones.", action="append", config_key="sub_periods"),
        CommandlineParameter(long_opt="--no_sub_periods", help="Analyzes only the full sample.", action="store_const", const=[], config_key="sub_periods"),
        CommandlineParameter(long_opt="--coi_policy", choices=COI_POLICIES, help="How to treat cells outside the cone of influence.", config_key="coherence.coi_policy"),
        CommandlineParameter(long_opt="--window_mode", choices=WINDOW_MODES, help="Whether to transform each sub-period separately or to average a full-sample transform.", config_key="coherence.window_mode"),
        CommandlineParameter(long_opt="--no_clustering", help="Skips the Gap statistic and uses a single cluster.", action="store_const", const=False, config_key="gap.enabled"),
        CommandlineParameter(long_opt="--k_max", metavar="NUM", help="The largest number of clusters to consider.", type=int, config_key="gap.k_max"),
        CommandlineParameter(long_opt="--num_refs", metavar="NUM", help="The number of Gap reference replicates.", type=int, config_key="gap.num_refs"),
        CommandlineParameter(long_opt="--reference_mode", choices=REFERENCE_MODES, help="How to generate the Gap references.", config_key="gap.reference_mode"),
        CommandlineParameter(long_opt="--reps", metavar="NUM", help="The number of noise repetitions for the threshold.", type=int, config_key="threshold.reps"),
        CommandlineParameter(long_opt="--quantile", metavar="Q", help="The quantile of the noise coherence to use.", type=float, config_key="threshold.quantile"),
        CommandlineParameter(long_opt="--threshold_override", metavar="VALUE", help="The fixed display threshold, use 'none' for the estimated one.", type=_optional_float, config_key="threshold.override"),
        CommandlineParameter(long_opt="--pairing", choices=PAIRINGS, help="How to pair the variances of the noise series.", config_key="threshold.pairing"),
        CommandlineParameter(long_opt="--restarts", metavar="NUM", help="The number of random PAM restarts.", type=int, config_key="pam.restarts"),
        CommandlineParameter(long_opt="--formats", metavar="FORMAT", help="The network export formats.", nargs="+", choices=EXPORT_FORMATS, config_key="export.formats"),
        CommandlineParameter(long_opt="--dump_power", help="Writes the wavelet power of every asset.", action="store_const", const=True, config_key="dump_power"),
        CommandlineParameter(long_opt="--seed", metavar="SEED", help="The master seed.", type=int, config_key="seed"),
        CommandlineParameter(short_opt="-o", long_opt="--output_dir", metavar="DIR", help="The directory to store the artifacts in.", config_key="output_dir"),
        CommandlineParameter(short_opt="-j", long_opt="--n_jobs", metavar="NUM", help="The number of parallel workers.", type=int, config_key="n_jobs"),
    ]


NONE_VALUE = "none"


def _optional_float(s: str):
    if s.strip().lower() in [NONE_VALUE, "null", ""]:
        return NONE_VALUE
    return float(s)


def set_config_value(config: PipelineConfig, key: str, value):
    """
    Sets the value for the dotted key, e.g., 'gap.k_max'.

    :param config: the configuration to update
    :type config: PipelineConfig
    :param key: the dotted key
    :type key: str
    :param value: the value to set
    """
    if key == "bands":
        value = [x if isinstance(x, FrequencyBand) else parse_band(x) for x in value]
    elif key == "sub_periods":
        value = [x if isinstance(x, TimeWindow) else parse_sub_period(x) for x in value]
    if value == NONE_VALUE:
        value = None
    parts = key.split(".")
    obj = config
    for part in parts[:-1]:
        obj = getattr(obj, part)
    if not hasattr(obj, parts[-1]):
        raise ConfigError("Unknown configuration key: %s" % key)
    setattr(obj, parts[-1], value)


def apply_args(config: PipelineConfig, ns: argparse.Namespace,
               params: Optional[List[CommandlineParameter]] = None) -> PipelineConfig:
    """
    Transfers all the flags that were supplied onto the configuration.

    :param config: the configuration to update
    :type config: PipelineConfig
    :param ns: the parsed arguments
    :type ns: argparse.Namespace
    :param params: the parameter definitions, uses config_params() if None
    :type params: list
    :return: the updated configuration
    :rtype: PipelineConfig
    """
    if params is None:
        params = config_params()
    for param in params:
        if param.config_key is None:
            continue
        value = getattr(ns, param.dest(), None)
        if value is None:
            continue
        set_config_value(config, param.config_key, value)
    return config


def resolve_config(path: Optional[str], ns: Optional[argparse.Namespace] = None) -> PipelineConfig:
    """
    Builds the effective configuration: defaults < file < environment < flags.

    :param path: the configuration file, can be None
    :type path: str
    :param ns: the parsed flags, can be None
    :type ns: argparse.Namespace
    :return: the configuration
    :rtype: PipelineConfig
    """
    config = default_config() if path is None else load_config(path)
    apply_env(config)
    if ns is not None:
        apply_args(config, ns)
    return config


def _check_choice(value, choices: List[str], key: str, errors: List[str]):
    if value not in choices:
        errors.append("%s must be one of %s, supplied: %s" % (key, "|".join(choices), str(value)))


def _type_name(tp) -> str:
    if tp is bool:
        return "a boolean"
    if tp is int:
        return "an integer"
    if tp is float:
        return "a number"
    if tp is str:
        return "a string"
    if get_origin(tp) is list:
        return "a list of %ss" % _type_name(get_args(tp)[0]).split(" ", 1)[1]
    if get_origin(tp) is Union:
        return " or ".join(["null" if x is type(None) else _type_name(x) for x in get_args(tp)])
    return str(tp)


def _has_type(value, tp) -> bool:
    if get_origin(tp) is Union:
        return any(_has_type(value, x) for x in get_args(tp))
    if tp is type(None):
        return value is None
    if get_origin(tp) is list:
        return isinstance(value, list) and all(_has_type(x, get_args(tp)[0]) for x in value)
    if tp is bool:
        return isinstance(value, bool)
    if tp is int:
        return isinstance(value, int) and not isinstance(value, bool)
    if tp is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if tp is str:
        return isinstance(value, str)
    return True


def _check_types(config: PipelineConfig, errors: List[str]) -> PipelineConfig:
    """
    Appends a diagnostic for every value that doesn't match the declared type and
    returns a copy of the configuration with these values reset to their defaults.
    """
    result = copy.deepcopy(config)
    defaults = default_config()
    for f in fields(result):
        if f.name in ["bands", "sub_periods"]:
            continue
        value = getattr(result, f.name)
        if is_dataclass(value):
            for sf in fields(value):
                if not _has_type(getattr(value, sf.name), sf.type):
                    errors.append("%s.%s must be %s: %s" % (f.name, sf.name, _type_name(sf.type), repr(getattr(value, sf.name))))
                    setattr(value, sf.name, getattr(getattr(defaults, f.name), sf.name))
        elif not _has_type(value, f.type):
            errors.append("%s must be %s: %s" % (f.name, _type_name(f.type), repr(value)))
            setattr(result, f.name, getattr(defaults, f.name))
    return result


def validate_config(config: PipelineConfig, check_input: bool = True) -> List[str]:
    """
    Checks the configuration and returns all the problems found. Does not modify anything.

    :param config: the configuration to check
    :type config: PipelineConfig
    :param check_input: whether to check the input file (existence, number of assets)
    :type check_input: bool
    :return: the diagnostics, empty if valid
    :rtype: list
    """
    result = []
    config = _check_types(config, result)

    num_assets = None
    if check_input:
        if config.input.path is None:
            result.append("No input file provided!")
        elif not os.path.exists(config.input.path):
            result.append("Input file not found: %s" % config.input.path)
        elif os.path.isdir(config.input.path):
            result.append("Input points to a directory: %s" % config.input.path)
        else:
            try:
                names = read_asset_names(config.input.path, date_column=config.input.date_column,
                                         delimiter=config.input.delimiter)
                num_assets = len(names)
                if num_assets < 2:
                    result.append("At least 2 assets required, found %d in: %s" % (num_assets, config.input.path))
            except DataError as e:
                result.append(str(e))

    if not config.returns.scale > 0:
        result.append("returns.scale must be positive: %s" % str(config.returns.scale))
    if config.grid.voices < 1:
        result.append("grid.voices must be at least 1: %s" % str(config.grid.voices))
    if (config.grid.s0 is not None) and not config.grid.s0 > 0:
        result.append("grid.s0 must be positive: %s" % str(config.grid.s0))
    if (config.grid.s0 is not None) and (config.grid.s_max is not None) and (config.grid.s_max < config.grid.s0):
        result.append("grid.s_max must not be below grid.s0: %s < %s" % (str(config.grid.s_max), str(config.grid.s0)))
    if not config.morlet.omega0 > 0:
        result.append("morlet.omega0 must be positive: %s" % str(config.morlet.omega0))
    for key in ["time_factor", "truncate", "scale_width"]:
        if not getattr(config.smoothing, key) > 0:
            result.append("smoothing.%s must be positive: %s" % (key, str(getattr(config.smoothing, key))))

    if len(config.bands) == 0:
        result.append("At least one band required!")
    labels = set()
    for band in config.bands:
        if band.label in labels:
            result.append("Duplicate band label: %s" % band.label)
        labels.add(band.label)
        if not band.s_lo > 0:
            result.append("Band '%s': s_lo must be positive: %s" % (band.label, str(band.s_lo)))
        if (band.s_hi is not None) and (band.s_lo >= band.s_hi):
            result.append("Band '%s': s_lo >= s_hi (%g >= %g)" % (band.label, band.s_lo, band.s_hi))

    labels = {FULL_WINDOW}
    for window in config.sub_periods:
        if window.label in labels:
            result.append("Duplicate or reserved sub-period label: %s" % window.label)
        labels.add(window.label)
        if window.start > window.end:
            result.append("Sub-period '%s': start after end (%s > %s)" % (window.label, window.start, window.end))

    _check_choice(config.coherence.coi_policy, COI_POLICIES, "coherence.coi_policy", result)
    _check_choice(config.coherence.window_mode, WINDOW_MODES, "coherence.window_mode", result)
    _check_choice(config.gap.reference_mode, REFERENCE_MODES, "gap.reference_mode", result)
    _check_choice(config.threshold.pairing, PAIRINGS, "threshold.pairing", result)
    for fmt in config.export.formats:
        _check_choice(fmt, EXPORT_FORMATS, "export.formats", result)

    if config.gap.enabled:
        if config.gap.k_max < 1:
            result.append("gap.k_max must be at least 1: %d" % config.gap.k_max)
        elif (num_assets is not None) and (num_assets >= 2) and (config.gap.k_max >= num_assets):
            result.append("gap.k_max=%d must be less than the number of assets (%d)" % (config.gap.k_max, num_assets))
        if config.gap.num_refs < 1:
            result.append("gap.num_refs must be at least 1: %d" % config.gap.num_refs)
    if config.threshold.reps < 1:
        result.append("threshold.reps must be at least 1: %d" % config.threshold.reps)
    if not 0 < config.threshold.quantile <= 1:
        result.append("threshold.quantile must be in (0, 1]: %s" % str(config.threshold.quantile))
    if (config.threshold.override is not None) and not 0 <= config.threshold.override <= 1:
        result.append("threshold.override must be in [0, 1]: %s" % str(config.threshold.override))
    if config.pam.restarts < 0:
        result.append("pam.restarts must not be negative: %d" % config.pam.restarts)
    if (config.seed is None) or (config.seed < 0):
        result.append("seed must be a non-negative integer: %s" % str(config.seed))
    if config.n_jobs == 0:
        result.append("n_jobs must not be 0")
    if (config.output_dir is None) or (len(str(config.output_dir)) == 0):
        result.append("No output directory provided!")
    return result
