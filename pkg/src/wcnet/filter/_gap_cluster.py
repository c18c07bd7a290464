import argparse
from typing import List

from wai.logging import LOGGING_WARNING

from wcnet.api import unwrap_items, as_items, WindowAnalysis, WaveletFilter, dissimilarity_matrix, pam, \
    gap_select_k, reference_dissimilarities, derive_seed, REFERENCE_MODES, REFERENCE_PANEL, REFERENCE_UNIFORM, \
    DEFAULT_RESTARTS


class GapCluster(WaveletFilter):
    """
    Clusters the assets of every band with PAM, k selected by the Gap statistic.
    """

    def __init__(self, k_max: int = 6, num_refs: int = 50, reference_mode: str = REFERENCE_PANEL,
                 restarts: int = DEFAULT_RESTARTS, k: int = None, logger_name: str = None,
                 logging_level: str = LOGGING_WARNING, **kwargs):
        """
        Initializes the filter.

        :param k_max: the largest number of clusters to consider
        :type k_max: int
        :param num_refs: the number of reference replicates
        :type num_refs: int
        :param reference_mode: panel|uniform
        :type reference_mode: str
        :param restarts: the number of random PAM restarts
        :type restarts: int
        :param k: the fixed number of clusters, skips the Gap statistic
        :type k: int
        :param logger_name: the name to use for the logger
        :type logger_name: str
        :param logging_level: the logging level to use
        :type logging_level: str
        """
        super().__init__(logger_name=logger_name, logging_level=logging_level, **kwargs)
        self.k_max = k_max
        self.num_refs = num_refs
        self.reference_mode = reference_mode
        self.restarts = restarts
        self.k = k

    def name(self) -> str:
        """
        Returns the name of the handler, used as sub-command.

        :return: the name
        :rtype: str
        """
        return "gap-cluster"

    def description(self) -> str:
        """
        Returns a description of the filter.

        :return: the description
        :rtype: str
        """
        return "Clusters the assets on the dissimilarity 1-R2 of each band with k-medoids (PAM), selecting the " \
               "number of clusters with the Gap statistic against uniform reference data."

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
        parser.add_argument("--k_max", metavar="NUM", type=int, help="The largest number of clusters to consider.", required=False, default=6)
        parser.add_argument("--num_refs", metavar="NUM", type=int, help="The number of reference replicates.", required=False, default=50)
        parser.add_argument("--reference_mode", choices=REFERENCE_MODES, help="Whether to push uniform panels through the wavelet pipeline or to draw uniform dissimilarities.", required=False, default=REFERENCE_PANEL)
        parser.add_argument("--restarts", metavar="NUM", type=int, help="The number of random PAM restarts.", required=False, default=DEFAULT_RESTARTS)
        parser.add_argument("-k", metavar="NUM", type=int, help="The fixed number of clusters, skips the Gap statistic.", required=False, default=None)
        return parser

    def _apply_args(self, ns: argparse.Namespace):
        """
        Initializes the object with the arguments of the parsed namespace.

        :param ns: the parsed arguments
        :type ns: argparse.Namespace
        """
        super()._apply_args(ns)
        self.k_max = ns.k_max
        self.num_refs = ns.num_refs
        self.reference_mode = ns.reference_mode
        self.restarts = ns.restarts
        self.k = ns.k

    def _do_process(self, data):
        """
        Processes the data record(s).

        :param data: the record(s) to process
        :return: the potentially updated record(s)
        """
        result = []
        for item in as_items(data):
            if len(item.band_matrices) == 0:
                raise Exception("No band matrices available for window '%s', missing band-coherence?" % item.label)
            refs = None
            if (self.k is None) and (self.reference_mode != REFERENCE_UNIFORM):
                bands = [m.band for m in item.band_matrices]
                refs = reference_dissimilarities(
                    item.panel, bands, num_refs=self.num_refs, seed=derive_seed(self.seed, "gap", item.label),
                    grid=self._grid(item.panel), params=self._morlet(), smoothing=self._smoothing(),
                    coi_policy=self.coi_policy, n_jobs=self.n_jobs, logger=self.logger())
            for b, matrix in enumerate(item.band_matrices):
                band = matrix.band.label
                d = dissimilarity_matrix(matrix)
                pam_seed = derive_seed(self.seed, "pam", item.label, band)
                if self.k is not None:
                    k = self.k
                else:
                    gap = gap_select_k(item.panel, d, min(self.k_max, d.size - 1), num_refs=self.num_refs,
                                       seed=derive_seed(self.seed, "gap", item.label, band), band=matrix.band,
                                       reference_mode=self.reference_mode, refs=None if refs is None else refs[b],
                                       restarts=self.restarts, pam_seed=pam_seed, logger=self.logger(),
                                       full_output=True)
                    item.gap[band] = gap
                    k = gap.k
                item.clusters[band] = pam(d, k, seed=pam_seed, restarts=self.restarts)
                self.logger().info("Clusters '%s'/'%s': k=%d" % (item.label, band, k))
            result.append(item)
        return unwrap_items(result)
