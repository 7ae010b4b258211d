"""Land-eligibility analysis engine.

Computes, for a study region, which pixels of land remain available after
applying exclusion constraints drawn from raster sources, vector sources
and edge-indexed proximity/value datasets, and quantifies how constraints
interact (independent impact, exclusivity, overlap, motivation maps).
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
from .srs import Srs, LaeaParams, EPSG3035, GRS80  # noqa: F401
