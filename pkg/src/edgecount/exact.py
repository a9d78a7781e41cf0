"""Full-visibility oracles used to validate the sampled estimator in tests.

These read the whole graph, so they must never sit on a query-metered path;
they exist to give tests exact reference values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .buckets import BucketConfig
from .graph import Graph


def exact_bucket_sizes(graph: Graph, config: BucketConfig) -> np.ndarray:
    """True per-bucket vertex counts; degree-0 vertices appear nowhere."""
    nonzero = graph.degrees >= 1
    return np.bincount(config.bucket_indices(graph.degrees[nonzero]), minlength=config.t).astype(np.int64)


@dataclass(frozen=True)
class HeavyLightDecomposition:
    """Exact split of edges by which side of the heavy classification they touch."""

    heavy_degree_mass: int
    edges_heavy: int
    edges_light: int
    edges_cross: int
    m: int


def heavy_vertex_mask(graph: Graph, heavy_indices: np.ndarray, config: BucketConfig) -> np.ndarray:
    bucket_is_heavy = np.zeros(config.t, dtype=bool)
    bucket_is_heavy[np.asarray(heavy_indices, dtype=np.int64)] = True
    mask = np.zeros(graph.n, dtype=bool)
    nonzero = graph.degrees >= 1
    mask[nonzero] = bucket_is_heavy[config.bucket_indices(graph.degrees[nonzero])]
    return mask


def heavy_light_decomposition(graph: Graph, heavy_indices: np.ndarray, config: BucketConfig) -> HeavyLightDecomposition:
    """Count heavy/light/cross edges and the heavy degree mass, checking the
    bookkeeping identities on every call."""
    mask = heavy_vertex_mask(graph, heavy_indices, config)
    heavy_u = mask[graph.edges[:, 0]] if graph.m else np.zeros(0, bool)
    heavy_v = mask[graph.edges[:, 1]] if graph.m else np.zeros(0, bool)
    edges_heavy = int((heavy_u & heavy_v).sum())
    edges_light = int((~heavy_u & ~heavy_v).sum())
    edges_cross = graph.m - edges_heavy - edges_light
    mass = int(graph.degrees[mask].sum())
    assert edges_heavy + edges_light + edges_cross == graph.m
    assert mass == 2 * edges_heavy + edges_cross
    return HeavyLightDecomposition(
        heavy_degree_mass=mass,
        edges_heavy=edges_heavy,
        edges_light=edges_light,
        edges_cross=edges_cross,
        m=graph.m,
    )


def exact_heavy_degree_mass(graph: Graph, heavy_indices: np.ndarray, config: BucketConfig) -> int:
    return heavy_light_decomposition(graph, heavy_indices, config).heavy_degree_mass


def exact_heavy_fraction(graph: Graph, heavy_indices: np.ndarray, config: BucketConfig) -> float:
    """True probability that a degree-proportional vertex draw is heavy."""
    if graph.m == 0:
        raise ValueError("heavy fraction undefined on an edgeless graph")
    return exact_heavy_degree_mass(graph, heavy_indices, config) / (2.0 * graph.m)
