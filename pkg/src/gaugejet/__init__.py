"""Jets of bundle automorphisms, sections and connections on a trivial
principal bundle, with randomized equivariance checks built on second-order
Taylor arithmetic."""
from . import bundles, connections, groupoids, lie, prolongation, taylor
from .errors import GaugeJetError

__all__ = ["bundles", "connections", "groupoids", "lie", "prolongation", "taylor",
           "GaugeJetError"]
__version__ = "0.1.0"
