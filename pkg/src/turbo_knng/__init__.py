"""turbo_knng - single-core NN-Descent for approximate K-nearest-neighbor graphs.

Builds K-NNGs under squared Euclidean distance with heapless candidate
sampling, blocked distance kernels and a greedy locality reordering.
"""

__version__ = "0.1.0"
