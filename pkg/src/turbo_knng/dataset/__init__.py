"""Point storage, synthetic generators and dataset files."""

from turbo_knng.dataset.generators import cluster_means, gen_clustered, gen_gaussian
from turbo_knng.dataset.io import (
    labels_path_for,
    load_binary,
    load_labels,
    save_binary,
    save_labels,
)
from turbo_knng.dataset.storage import (
    ALIGNMENT_BYTES,
    LANES,
    ClusterLabels,
    Dataset,
    aligned_zeros,
    apply_permutation,
    padded_width,
)

__all__ = [
    "ALIGNMENT_BYTES",
    "LANES",
    "ClusterLabels",
    "Dataset",
    "aligned_zeros",
    "apply_permutation",
    "cluster_means",
    "gen_clustered",
    "gen_gaussian",
    "labels_path_for",
    "load_binary",
    "load_labels",
    "padded_width",
    "save_binary",
    "save_labels",
]
