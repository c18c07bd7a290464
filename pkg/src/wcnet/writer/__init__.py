from ._stats import StatsWriter
from ._artifacts import ArtifactsWriter
