from dataclasses import dataclass, field
from typing import List, Dict, Optional

from ._clustering import ClusterAssignment, GapResult
from ._coherence import TimeWindow, BandMatrix
from ._ingest import ReturnPanel
from ._netgraph import ThresholdEstimate, Network


def as_items(data) -> List:
    """
    Plugins receive a single item or, once sub-periods were split off, a list of items.
    Returns the items as list.

    :param data: the item(s)
    :return: the list of items
    :rtype: list
    """
    if isinstance(data, (list, tuple)):
        return list(data)
    return [data]


def unwrap_items(items: List):
    """
    Returns the only item if there is just one, so that single-window pipelines pass plain items.

    :param items: the processed items
    :type items: list
    :return: the item or the list
    """
    return items[0] if (len(items) == 1) else items


@dataclass
class WindowAnalysis:
    """
    The record passed through plugin pipelines: the returns of one time window plus
    everything the stages have computed for it so far.
    """
    window: TimeWindow
    panel: ReturnPanel
    band_matrices: List[BandMatrix] = field(default_factory=list)
    threshold: Optional[ThresholdEstimate] = None
    clusters: Dict[str, ClusterAssignment] = field(default_factory=dict)
    gap: Dict[str, GapResult] = field(default_factory=dict)
    networks: List[Network] = field(default_factory=list)

    @property
    def label(self) -> str:
        return self.window.label

    def band_matrix(self, band: str) -> BandMatrix:
        """
        Returns the matrix for the band label.

        :param band: the label
        :type band: str
        :return: the matrix
        :rtype: BandMatrix
        """
        for matrix in self.band_matrices:
            if matrix.band.label == band:
                return matrix
        raise Exception("No band matrix for band: %s" % band)
