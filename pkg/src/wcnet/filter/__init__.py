from ._clean_prices import CleanPrices
from ._log_returns import LogReturns
from ._sub_periods import SubPeriods
from ._band_coherence import BandCoherence
from ._noise_threshold import NoiseThreshold
from ._gap_cluster import GapCluster
from ._build_network import BuildNetwork
