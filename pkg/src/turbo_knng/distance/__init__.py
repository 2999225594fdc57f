"""Squared-L2 kernels and distance evaluation accounting."""

from turbo_knng.distance.counter import EvalCounter
from turbo_knng.distance.kernels import TILE, block_l2_sq, l2_sq, mutual_block_distances

__all__ = ["TILE", "EvalCounter", "block_l2_sq", "l2_sq", "mutual_block_distances"]
