import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgecount import (
    BucketConfig,
    build_graph,
    exact_bucket_sizes,
    exact_heavy_degree_mass,
    exact_heavy_fraction,
    gen_clique_plus_isolated,
    gen_star,
    heavy_light_decomposition,
    heavy_vertex_mask,
)


@pytest.fixture
def clique100():
    return gen_clique_plus_isolated(100, 100)


def test_bucket_sizes_on_clique(clique100):
    config = BucketConfig(100, 0.025)
    sizes = exact_bucket_sizes(clique100, config)
    idx = config.bucket_index(99)
    assert sizes[idx] == 100
    assert sizes.sum() == 100


def test_bucket_sizes_on_star():
    g = gen_star(10)
    config = BucketConfig(10, 0.1)
    sizes = exact_bucket_sizes(g, config)
    assert sizes[config.bucket_index(1)] == 9
    assert sizes[config.bucket_index(9)] == 1
    assert sizes.sum() == 10


def test_clique_decomposition_is_all_heavy(clique100):
    config = BucketConfig(100, 0.025)
    heavy = np.array([config.bucket_index(99)])
    decomp = heavy_light_decomposition(clique100, heavy, config)
    assert decomp.edges_heavy == 4950
    assert decomp.edges_cross == 0
    assert decomp.edges_light == 0
    assert decomp.heavy_degree_mass == 9900
    assert decomp.m == 4950
    assert exact_heavy_fraction(clique100, heavy, config) == 1.0


def test_empty_heavy_set_sees_no_mass(clique100):
    config = BucketConfig(100, 0.025)
    none = np.zeros(0, dtype=np.int64)
    decomp = heavy_light_decomposition(clique100, none, config)
    assert decomp.heavy_degree_mass == 0
    assert decomp.edges_heavy == 0
    assert decomp.edges_light == 4950
    assert exact_heavy_degree_mass(clique100, none, config) == 0
    assert exact_heavy_fraction(clique100, none, config) == 0.0


def test_heavy_fraction_needs_edges():
    g = build_graph(5, [])
    config = BucketConfig(5, 0.1)
    with pytest.raises(ValueError):
        exact_heavy_fraction(g, np.array([0]), config)


@st.composite
def graph_and_heavy_choice(draw):
    n = draw(st.integers(2, 40))
    pairs = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1]),
            max_size=80,
        )
    )
    gamma = draw(st.floats(0.05, 1.0))
    config = BucketConfig(n, gamma)
    heavy = draw(st.sets(st.integers(0, config.t - 1), max_size=config.t))
    return build_graph(n, pairs), config, np.array(sorted(heavy), dtype=np.int64)


@settings(max_examples=80, deadline=None)
@given(graph_and_heavy_choice())
def test_decomposition_matches_direct_count(case):
    g, config, heavy = case
    heavy_buckets = set(heavy.tolist())
    flags = [
        d >= 1 and config.bucket_index(int(d)) in heavy_buckets for d in g.degrees.tolist()
    ]
    expected_heavy = sum(1 for u, v in g.edges.tolist() if flags[u] and flags[v])
    expected_light = sum(1 for u, v in g.edges.tolist() if not flags[u] and not flags[v])
    decomp = heavy_light_decomposition(g, heavy, config)
    assert decomp.edges_heavy == expected_heavy
    assert decomp.edges_light == expected_light
    assert decomp.edges_cross == g.m - expected_heavy - expected_light
    assert decomp.heavy_degree_mass == sum(
        int(d) for d, f in zip(g.degrees.tolist(), flags) if f
    )
    assert decomp.heavy_degree_mass == 2 * decomp.edges_heavy + decomp.edges_cross
    assert np.array_equal(heavy_vertex_mask(g, heavy, config), np.array(flags))


@settings(max_examples=80, deadline=None)
@given(graph_and_heavy_choice())
def test_scaled_bucket_mass_brackets_true_mass(case):
    g, config, heavy = case
    sizes = exact_bucket_sizes(g, config)
    scaled = float((sizes[heavy] * config.powers[heavy]).sum())
    mass = exact_heavy_degree_mass(g, heavy, config)
    assert mass <= scaled + 1e-9
    assert scaled <= (1.0 + config.gamma) * mass + 1e-9
