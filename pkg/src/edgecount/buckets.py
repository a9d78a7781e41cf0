"""Geometric degree buckets shared by the estimator and its exact test oracles."""

from __future__ import annotations

import math

import numpy as np


def bucket_count(n: int, gamma: float) -> int:
    """Number of geometric degree buckets needed to cover degrees up to ``n``."""
    if n < 2:
        raise ValueError("bucket_count requires n >= 2")
    if gamma <= 0:
        raise ValueError("bucket_count requires gamma > 0")
    return math.ceil(math.log(n) / math.log1p(gamma)) + 1


class BucketConfig:
    """Degree bucket ``i`` holds degrees in ``(powers[i-1], powers[i]]``.

    The boundary table ``powers[i] = (1 + gamma)^i`` is built once by repeated
    multiplication, and every consumer (index lookup, sampled mass estimate,
    exact mass oracle) compares against this same table, so a degree can never
    land in different buckets in different code paths. Degree 1 sits in bucket
    0; degree-0 vertices belong to no bucket.
    """

    __slots__ = ("n", "gamma", "t", "powers")

    def __init__(self, n: int, gamma: float):
        t = bucket_count(n, gamma)
        powers = np.empty(t, dtype=np.float64)
        powers[0] = 1.0
        for i in range(1, t):
            powers[i] = powers[i - 1] * (1.0 + gamma)
        # the formula already overshoots by one bucket; this guard only fires
        # if float rounding ever leaves the top degree uncovered
        while powers[-1] < n:
            powers = np.append(powers, powers[-1] * (1.0 + gamma))
            t += 1
        powers.setflags(write=False)
        self.n = n
        self.gamma = gamma
        self.t = t
        self.powers = powers

    @classmethod
    def from_epsilon(cls, n: int, epsilon: float) -> "BucketConfig":
        return cls(n, epsilon / 10.0)

    def bucket_index(self, degree: int) -> int:
        """Index of the unique bucket containing ``degree``."""
        if degree < 1:
            raise ValueError("degrees below 1 belong to no bucket")
        if degree > self.n:
            raise ValueError(f"degree {degree} exceeds the covered range for n={self.n}")
        return int(np.searchsorted(self.powers, degree, side="left"))

    def bucket_indices(self, degrees: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`bucket_index`; every degree must be in ``1..n``."""
        degrees = np.asarray(degrees)
        if degrees.size and (degrees.min() < 1 or degrees.max() > self.n):
            raise ValueError("degrees must lie in 1..n")
        return np.searchsorted(self.powers, degrees, side="left")
