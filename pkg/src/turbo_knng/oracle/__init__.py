"""Exact ground truth, recall and scaling fits."""

from turbo_knng.oracle.brute_force import ExactGraph, brute_force_knng
from turbo_knng.oracle.recall import recall
from turbo_knng.oracle.scaling import scaling_exponent

__all__ = ["ExactGraph", "brute_force_knng", "recall", "scaling_exponent"]
