import argparse
from typing import List

import numpy as np
from wai.logging import LOGGING_WARNING

from wcnet.api import unwrap_items, as_items, WindowAnalysis, WaveletFilter, noise_threshold, derive_seed, \
    PAIRINGS, PAIRING_RANDOM, DEFAULT_REPS, DEFAULT_QUANTILE


class NoiseThreshold(WaveletFilter):
    """
    Estimates the coherence level of independent Gaussian noise per band.
    """

    def __init__(self, reps: int = DEFAULT_REPS, quantile: float = DEFAULT_QUANTILE, pairing: str = PAIRING_RANDOM,
                 logger_name: str = None, logging_level: str = LOGGING_WARNING, **kwargs):
        """
        Initializes the filter.

        :param reps: the number of Monte Carlo repetitions
        :type reps: int
        :param quantile: the quantile to report
        :type quantile: float
        :param pairing: how to pair the variances (random|fixed)
        :type pairing: str
        :param logger_name: the name to use for the logger
        :type logger_name: str
        :param logging_level: the logging level to use
        :type logging_level: str
        """
        super().__init__(logger_name=logger_name, logging_level=logging_level, **kwargs)
        self.reps = reps
        self.quantile = quantile
        self.pairing = pairing

    def name(self) -> str:
        """
        Returns the name of the handler, used as sub-command.

        :return: the name
        :rtype: str
        """
        return "noise-threshold"

    def description(self) -> str:
        """
        Returns a description of the filter.

        :return: the description
        :rtype: str
        """
        return "Monte Carlo estimate of the band-averaged squared coherence of pairs of independent Gaussian noise " \
               "series with the variances of the assets; reports the quantile per band."

    def accepts(self) -> List:
        """
        Returns the list of classes that are accepted.

        :return: the list of classes
        :rtype: list
        """
        return [WindowAnalysis]

    def generates(self) -> List:
        """
        Returns the list of classes that get produced.

        :return: the list of classes
        :rtype: list
        """
        return [WindowAnalysis]

    def _create_argparser(self) -> argparse.ArgumentParser:
        """
        Creates an argument parser. Derived classes need to fill in the options.

        :return: the parser
        :rtype: argparse.ArgumentParser
        """
        parser = super()._create_argparser()
        parser.add_argument("-r", "--reps", metavar="NUM", type=int, help="The number of repetitions.", required=False, default=DEFAULT_REPS)
        parser.add_argument("-q", "--quantile", metavar="Q", type=float, help="The quantile to use as threshold.", required=False, default=DEFAULT_QUANTILE)
        parser.add_argument("--pairing", choices=PAIRINGS, help="How to pair the variances of the noise series.", required=False, default=PAIRING_RANDOM)
        return parser

    def _apply_args(self, ns: argparse.Namespace):
        """
        Initializes the object with the arguments of the parsed namespace.

        :param ns: the parsed arguments
        :type ns: argparse.Namespace
        """
        super()._apply_args(ns)
        self.reps = ns.reps
        self.quantile = ns.quantile
        self.pairing = ns.pairing

    def _do_process(self, data):
        """
        Processes the data record(s).

        :param data: the record(s) to process
        :return: the potentially updated record(s)
        """
        result = []
        for item in as_items(data):
            item.threshold = noise_threshold(
                np.var(item.panel.values, axis=0, ddof=1), len(item.panel), self._frequency_bands(),
                grid=self._grid(item.panel), params=self._morlet(), smoothing=self._smoothing(),
                reps=self.reps, quantile=self.quantile, seed=derive_seed(self.seed, "threshold", item.label),
                pairing=self.pairing, coi_policy=self.coi_policy, dt=item.panel.dt, n_jobs=self.n_jobs,
                logger=self.logger())
            self.logger().info("Threshold '%s': %s" % (item.label, str(item.threshold.per_band)))
            result.append(item)
        return unwrap_items(result)
