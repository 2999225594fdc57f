"""The K-NNG under construction and its exported table form."""

from turbo_knng.graph.heap import FLAG_NEW, FLAG_OLD
from turbo_knng.graph.knn_graph import KnnGraph, init_random
from turbo_knng.graph.table import NeighborTable, sort_rows

__all__ = ["FLAG_NEW", "FLAG_OLD", "KnnGraph", "NeighborTable", "init_random", "sort_rows"]
