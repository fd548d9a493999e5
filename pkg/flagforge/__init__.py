"""flagforge package."""

from flagforge.complex import VertexColoredGraph, clique_f_vector
from flagforge.construct import construct_hvec, construct_main
from flagforge.errors import FlagForgeError
from flagforge.models import FaceVector, HVector
from flagforge.verify import verify_graph

__all__ = [
    "FaceVector",
    "FlagForgeError",
    "HVector",
    "VertexColoredGraph",
    "clique_f_vector",
    "construct_hvec",
    "construct_main",
    "verify_graph",
]
