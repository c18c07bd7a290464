from ._errors import WcnetError, ConfigError, DataError, StageError
from ._utils import check_dir, check_file, fingerprint_file, derive_seed, safe_name
from ._session import Session
from ._ingest import PriceTable, ReturnPanel, StatsTable, load_price_table, align_and_clean, log_returns, \
    slice_period, descriptive_stats, pearson_matrix, write_stats, write_matrix, read_asset_names, stats_to_frame, \
    DEFAULT_DATE_FORMAT, DEFAULT_DELIMITER, MIN_STATS_OBSERVATIONS, STATS_COLUMNS
from ._cwt import ScaleGrid, MorletParams, CwtField, make_scale_grid, fourier_factor, period_to_scale, \
    scale_to_period, morlet_fourier, cone_of_influence, cwt, power, dump_power, DEFAULT_VOICES, DEFAULT_OMEGA0
from ._coherence import SmoothingParams, FrequencyBand, TimeWindow, CoherenceField, BandMatrix, smooth, \
    cross_wavelet, oriented_coherences, coherence_pair, band_indices, band_average, window_indices, full_window, \
    pair_band_averages, transform_panel, band_matrices, band_matrix_to_json, band_matrix_from_json, \
    write_band_matrix, COI_POLICIES, COI_INCLUDE, COI_EXCLUDE
from ._clustering import DissimMatrix, ClusterAssignment, GapResult, dissimilarity_matrix, pam, dispersion, \
    gap_statistic, uniform_reference_panel, reference_dissimilarities, uniform_dissimilarities, gap_select_k, \
    clusters_to_json, REFERENCE_MODES, REFERENCE_PANEL, REFERENCE_UNIFORM, DEFAULT_RESTARTS
from ._netgraph import ThresholdEstimate, NetworkNode, NetworkEdge, Network, noise_threshold, build_network, \
    network_to_dot, network_to_json, network_from_json, network_to_adjacency, export_graph, threshold_to_json, \
    PAIRINGS, PAIRING_RANDOM, PAIRING_FIXED, EXPORT_FORMATS, FORMAT_DOT, FORMAT_JSON, FORMAT_ADJACENCY, \
    DEFAULT_THRESHOLD, DEFAULT_REPS, DEFAULT_QUANTILE
from ._help import CommandlineParameter, params_to_parser, param_to_parser, params_to_short, param_to_short, \
    param_to_help
from ._config import PipelineConfig, default_config, default_bands, default_sub_periods, config_to_dict, \
    config_from_dict, load_config, save_config, apply_env, apply_args, config_params, resolve_config, \
    validate_config, parse_band, parse_sub_period, set_config_value, ENV_WCNET_OUTPUT_DIR, WINDOW_MODES, \
    WINDOW_MODE_SLICE, WINDOW_MODE_AVERAGE, FULL_WINDOW
from ._pipeline import RunManifest, run_pipeline, artifact_name, library_versions, MODES, MODE_RUN, MODE_STATS, \
    MODE_THRESHOLD, MANIFEST_FILE, TIMINGS_FILE, STATUS_OK, STATUS_FAILED, NETWORK_ARTIFACTS
from ._data import as_items, unwrap_items, WindowAnalysis
from ._plugins import Reader, StreamWriter, WaveletFilter
from ._conversion import parse_conversion_args, print_conversion_usage, perform_conversion
