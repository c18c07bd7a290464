import abc
import argparse
from typing import List

from wai.logging import LOGGING_WARNING

import seppl.io
from seppl import Initializable

from ._coherence import FrequencyBand, COI_POLICIES, COI_INCLUDE, SmoothingParams
from ._config import parse_band, default_bands
from ._cwt import ScaleGrid, MorletParams, DEFAULT_VOICES, DEFAULT_OMEGA0, make_scale_grid
from ._ingest import ReturnPanel


class Reader(seppl.io.Reader, Initializable, abc.ABC):
    """
    Ancestor for readers.
    """
    pass


class StreamWriter(seppl.io.StreamWriter, Initializable, abc.ABC):
    """
    Ancestor for stream writers.
    """

    def __init__(self, logger_name: str = None, logging_level: str = LOGGING_WARNING):
        """
        Initializes the writer.

        :param logger_name: the name to use for the logger
        :type logger_name: str
        :param logging_level: the logging level to use
        :type logging_level: str
        """
        super().__init__(logger_name=logger_name, logging_level=logging_level)


class WaveletFilter(seppl.io.BatchFilter, abc.ABC):
    """
    Ancestor for filters that transform the returns: manages the bands, the scale grid,
    the wavelet and the cone of influence policy.
    """

    def __init__(self, bands: List[str] = None, voices: int = DEFAULT_VOICES, s0: float = None, s_max: float = None,
                 omega0: float = DEFAULT_OMEGA0, coi_policy: str = COI_INCLUDE, seed: int = None, n_jobs: int = 1,
                 logger_name: str = None, logging_level: str = LOGGING_WARNING):
        """
        Initializes the filter.

        :param bands: the band definitions (LABEL:S_LO:S_HI), default bands if None
        :type bands: list
        :param voices: the scales per octave
        :type voices: int
        :param s0: the smallest scale
        :type s0: float
        :param s_max: the largest scale
        :type s_max: float
        :param omega0: the Morlet center frequency
        :type omega0: float
        :param coi_policy: include|exclude
        :type coi_policy: str
        :param seed: the seed for stochastic steps
        :type seed: int
        :param n_jobs: the number of parallel workers
        :type n_jobs: int
        :param logger_name: the name to use for the logger
        :type logger_name: str
        :param logging_level: the logging level to use
        :type logging_level: str
        """
        super().__init__(logger_name=logger_name, logging_level=logging_level)
        self.bands = bands
        self.voices = voices
        self.s0 = s0
        self.s_max = s_max
        self.omega0 = omega0
        self.coi_policy = coi_policy
        self.seed = seed
        self.n_jobs = n_jobs
        self._bands = None

    def _create_argparser(self) -> argparse.ArgumentParser:
        """
        Creates an argument parser. Derived classes need to fill in the options.

        :return: the parser
        :rtype: argparse.ArgumentParser
        """
        parser = super()._create_argparser()
        parser.add_argument("-b", "--band", metavar="LABEL:S_LO:S_HI", type=str, help="The frequency band(s), S_HI empty for unbounded; uses short/medium/long if omitted.", required=False, nargs="*")
        parser.add_argument("--voices", metavar="NUM", type=int, help="The number of scales per octave.", required=False, default=DEFAULT_VOICES)
        parser.add_argument("--s0", metavar="DAYS", type=float, help="The smallest scale, 2 days if omitted.", required=False, default=None)
        parser.add_argument("--s_max", metavar="DAYS", type=float, help="The largest scale, a third of the series length if omitted.", required=False, default=None)
        parser.add_argument("--omega0", metavar="FREQ", type=float, help="The Morlet center frequency.", required=False, default=DEFAULT_OMEGA0)
        parser.add_argument("--coi_policy", choices=COI_POLICIES, help="How to treat cells outside the cone of influence.", required=False, default=COI_INCLUDE)
        parser.add_argument("--seed", metavar="SEED", type=int, help="The seed for the Monte Carlo steps.", required=False, default=42)
        parser.add_argument("-j", "--n_jobs", metavar="NUM", type=int, help="The number of parallel workers.", required=False, default=1)
        return parser

    def _apply_args(self, ns: argparse.Namespace):
        """
        Initializes the object with the arguments of the parsed namespace.

        :param ns: the parsed arguments
        :type ns: argparse.Namespace
        """
        super()._apply_args(ns)
        self.bands = ns.band
        self.voices = ns.voices
        self.s0 = ns.s0
        self.s_max = ns.s_max
        self.omega0 = ns.omega0
        self.coi_policy = ns.coi_policy
        self.seed = ns.seed
        self.n_jobs = ns.n_jobs

    def initialize(self):
        """
        Initializes the processing, e.g., for opening files or databases.
        """
        super().initialize()
        if (self.bands is None) or (len(self.bands) == 0):
            self._bands = default_bands()
        else:
            self._bands = [parse_band(x) for x in self.bands]
        if self.seed is None:
            self.seed = 42
        if self.coi_policy is None:
            self.coi_policy = COI_INCLUDE

    def _frequency_bands(self) -> List[FrequencyBand]:
        return self._bands

    def _morlet(self) -> MorletParams:
        return MorletParams(omega0=self.omega0)

    def _smoothing(self) -> SmoothingParams:
        return SmoothingParams()

    def _grid(self, panel: ReturnPanel) -> ScaleGrid:
        """
        Returns the grid for the panel, the largest scale is capped at half the panel length.

        :param panel: the panel to generate the grid for
        :type panel: ReturnPanel
        :return: the grid
        :rtype: ScaleGrid
        """
        s_max = self.s_max
        if (s_max is not None) and (s_max > len(panel) * panel.dt / 2.0):
            self.logger().warning("s_max=%g too large for %d observations, using default" % (s_max, len(panel)))
            s_max = None
        return make_scale_grid(len(panel), dt=panel.dt, voices=self.voices, s0=self.s0, s_max=s_max)
