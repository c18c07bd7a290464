import argparse
from typing import List

from seppl.io import BatchFilter
from wai.logging import LOGGING_WARNING

from wcnet.api import unwrap_items, as_items, WindowAnalysis, ClusterAssignment, build_network, DEFAULT_THRESHOLD


class BuildNetwork(BatchFilter):
    """
    Assembles the thresholded, clustered network of every band.
    """

    def __init__(self, threshold: float = None, estimated: bool = False,
                 logger_name: str = None, logging_level: str = LOGGING_WARNING):
        """
        Initializes the filter.

        :param threshold: the fixed display threshold
        :type threshold: float
        :param estimated: whether to use the Monte Carlo threshold of the window instead
        :type estimated: bool
        :param logger_name: the name to use for the logger
        :type logger_name: str
        :param logging_level: the logging level to use
        :type logging_level: str
        """
        super().__init__(logger_name=logger_name, logging_level=logging_level)
        self.threshold = threshold
        self.estimated = estimated

    def name(self) -> str:
        """
        Returns the name of the handler, used as sub-command.

        :return: the name
        :rtype: str
        """
        return "build-network"

    def description(self) -> str:
        """
        Returns a description of the filter.

        :return: the description
        :rtype: str
        """
        return "Builds the network of each band: edges for mean coherence above the threshold, weighted with " \
               "the oriented coherences, nodes sized by strength and colored by cluster."

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
        parser.add_argument("-t", "--threshold", metavar="VALUE", type=float, help="The display threshold for the mean coherence.", required=False, default=DEFAULT_THRESHOLD)
        parser.add_argument("-e", "--estimated", action="store_true", help="Whether to use the per-band noise threshold of the window (requires noise-threshold).")
        return parser

    def _apply_args(self, ns: argparse.Namespace):
        """
        Initializes the object with the arguments of the parsed namespace.

        :param ns: the parsed arguments
        :type ns: argparse.Namespace
        """
        super()._apply_args(ns)
        self.threshold = ns.threshold
        self.estimated = ns.estimated

    def initialize(self):
        """
        Initializes the processing, e.g., for opening files or databases.
        """
        super().initialize()
        if self.threshold is None:
            self.threshold = DEFAULT_THRESHOLD

    def _do_process(self, data):
        """
        Processes the data record(s).

        :param data: the record(s) to process
        :return: the potentially updated record(s)
        """
        result = []
        for item in as_items(data):
            if self.estimated and (item.threshold is None):
                raise Exception("No noise threshold available for window '%s'!" % item.label)
            item.networks = []
            for matrix in item.band_matrices:
                band = matrix.band.label
                threshold = item.threshold.per_band[band] if self.estimated else self.threshold
                clusters = item.clusters.get(band)
                if clusters is None:
                    self.logger().warning("No clusters for '%s'/'%s', using a single cluster" % (item.label, band))
                    clusters = ClusterAssignment(k=1, medoids=[0], labels=[0] * len(matrix.assets), total_cost=0.0)
                item.networks.append(build_network(matrix, clusters, threshold))
            result.append(item)
        return unwrap_items(result)
