"""Bijections on [0, n) with a maintained inverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from turbo_knng.errors import ParameterError


@dataclass(frozen=True, eq=False)
class Permutation:
    """Permutation sigma: node -> position, with sigma_inv: position -> node.

    Attributes:
        sigma: int64 array; sigma[i] is the position node i moves to.
        sigma_inv: int64 array; sigma_inv[p] is the node placed at position p.
    """

    sigma: NDArray[np.int64]
    sigma_inv: NDArray[np.int64]

    def __post_init__(self) -> None:
        if self.sigma.ndim != 1 or self.sigma.shape != self.sigma_inv.shape:
            raise ParameterError("sigma and sigma_inv must be 1-D arrays of equal length")
        n = self.sigma.shape[0]
        if n and (self.sigma.min() < 0 or self.sigma.max() >= n):
            raise ParameterError("sigma entries must lie in [0, n)")
        if not np.array_equal(self.sigma_inv[self.sigma], np.arange(n)):
            raise ParameterError("sigma_inv is not the inverse of sigma")
        self.sigma.flags.writeable = False
        self.sigma_inv.flags.writeable = False

    @classmethod
    def identity(cls, n: int) -> Permutation:
        """Identity permutation on n elements."""
        return cls(sigma=np.arange(n, dtype=np.int64), sigma_inv=np.arange(n, dtype=np.int64))

    @classmethod
    def from_sigma(cls, sigma: ArrayLike) -> Permutation:
        """Build from the forward map, deriving the inverse.

        Raises:
            ParameterError: If sigma is not a bijection.
        """
        forward = np.array(sigma, dtype=np.int64)
        n = forward.shape[0]
        if forward.ndim != 1 or (n and (forward.min() < 0 or forward.max() >= n)):
            raise ParameterError("sigma must be a 1-D array with entries in [0, n)")
        inverse = np.full(n, -1, dtype=np.int64)
        inverse[forward] = np.arange(n)
        if np.any(inverse < 0):
            raise ParameterError("sigma is not a bijection")
        return cls(sigma=forward, sigma_inv=inverse)

    @property
    def n(self) -> int:
        return int(self.sigma.shape[0])

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.sigma, np.arange(self.n)))

    def inverse(self) -> Permutation:
        """The permutation that undoes this one."""
        return Permutation(sigma=self.sigma_inv.copy(), sigma_inv=self.sigma.copy())
