import argparse
import os
from typing import List

import pandas as pd
from wai.logging import LOGGING_WARNING
from seppl.variables import variable_list, InputBasedVariableSupporter

from wcnet.api import as_items, StreamWriter, WindowAnalysis, artifact_name, band_matrix_to_json, \
    write_band_matrix, dissimilarity_matrix, clusters_to_json, threshold_to_json, export_graph, write_matrix, \
    EXPORT_FORMATS, NETWORK_ARTIFACTS


class ArtifactsWriter(StreamWriter, InputBasedVariableSupporter):
    """
    Writes the per-window artifacts of the plugin pipeline: band matrices, dissimilarities, clusters,
    noise threshold and the networks in the selected export formats.
    """

    def __init__(self, output_dir: str = None, formats: List[str] = None,
                 logger_name: str = None, logging_level: str = LOGGING_WARNING):
        """
        Initializes the writer.

        :param output_dir: the directory to write the artifacts to
        :type output_dir: str
        :param formats: the network export formats
        :type formats: list
        :param logger_name: the name to use for the logger
        :type logger_name: str
        :param logging_level: the logging level to use
        :type logging_level: str
        """
        super().__init__(logger_name=logger_name, logging_level=logging_level)
        self.output_dir = output_dir
        self.formats = formats

    def name(self) -> str:
        """
        Returns the name of the handler, used as sub-command.

        :return: the name
        :rtype: str
        """
        return "to-artifacts"

    def description(self) -> str:
        """
        Returns a description of the writer.

        :return: the description
        :rtype: str
        """
        return "Writes everything computed for a window (band matrices, dissimilarities, clusters, threshold, " \
               "networks) using the <window>__<band>__<artifact> naming scheme of the pipeline."

    def _create_argparser(self) -> argparse.ArgumentParser:
        """
        Creates an argument parser. Derived classes need to fill in the options.

        :return: the parser
        :rtype: argparse.ArgumentParser
        """
        parser = super()._create_argparser()
        parser.add_argument("-o", "--output_dir", metavar="DIR", type=str, help="The directory to store the artifacts in; " + variable_list(obj=self), required=True)
        parser.add_argument("-f", "--formats", choices=EXPORT_FORMATS, help="The network export formats.", required=False, default=list(EXPORT_FORMATS), nargs="*")
        return parser

    def _apply_args(self, ns: argparse.Namespace):
        """
        Initializes the object with the arguments of the parsed namespace.

        :param ns: the parsed arguments
        :type ns: argparse.Namespace
        """
        super()._apply_args(ns)
        self.output_dir = ns.output_dir
        self.formats = ns.formats

    def accepts(self) -> List:
        """
        Returns the list of classes that are accepted.

        :return: the list of classes
        :rtype: list
        """
        return [WindowAnalysis]

    def initialize(self):
        """
        Initializes the processing, e.g., for opening files or databases.
        """
        super().initialize()
        if (self.formats is None) or (len(self.formats) == 0):
            self.formats = list(EXPORT_FORMATS)

    def write_stream(self, data):
        """
        Saves the data one by one.

        :param data: the data to write (single record or iterable of records)
        """
        for item in as_items(data):
            output_dir = self.session.expand_variables(self.output_dir)
            os.makedirs(output_dir, exist_ok=True)
            window = item.label
            self.logger().info("Writing artifacts of '%s' to: %s" % (window, output_dir))

            for matrix in item.band_matrices:
                band = matrix.band.label
                write_band_matrix(matrix, os.path.join(output_dir, artifact_name(window, "band_r2.csv", band)),
                                  os.path.join(output_dir, artifact_name(window, "band_oriented.csv", band)))
                with open(os.path.join(output_dir, artifact_name(window, "band.json", band)), "w") as fp:
                    fp.write(band_matrix_to_json(matrix))
                    fp.write("\n")
                d = dissimilarity_matrix(matrix)
                write_matrix(pd.DataFrame(d.values, index=d.assets, columns=d.assets),
                             os.path.join(output_dir, artifact_name(window, "dissimilarity.csv", band)))
                if band in item.clusters:
                    with open(os.path.join(output_dir, artifact_name(window, "clusters.json", band)), "w") as fp:
                        fp.write(clusters_to_json(item.clusters[band], d.assets, item.gap.get(band)))
                        fp.write("\n")

            if item.threshold is not None:
                with open(os.path.join(output_dir, artifact_name(window, "threshold.json")), "w") as fp:
                    fp.write(threshold_to_json(item.threshold))
                    fp.write("\n")

            for network in item.networks:
                for fmt in self.formats:
                    export_graph(network, fmt, os.path.join(output_dir, artifact_name(window, NETWORK_ARTIFACTS[fmt], network.band.label)))
