import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgecount import BucketConfig, bucket_count


def test_bucket_count_frozen_values():
    assert bucket_count(1000, 0.1) == 74
    assert bucket_count(1000, 0.1) == math.ceil(math.log(1000) / math.log(1.1)) + 1
    assert bucket_count(2, 0.5) == 3


def test_bucket_count_rejects_bad_inputs():
    with pytest.raises(ValueError):
        bucket_count(1, 0.1)
    with pytest.raises(ValueError):
        bucket_count(100, 0.0)
    with pytest.raises(ValueError):
        bucket_count(100, -0.5)


def test_degree_one_lands_in_first_bucket():
    config = BucketConfig(1000, 0.1)
    assert config.bucket_index(1) == 0


def test_degree_two_crosses_seven_doublings_of_ten_percent():
    assert 1.1**7 < 2 <= 1.1**8
    assert BucketConfig(1000, 0.1).bucket_index(2) == 8


def test_powers_cover_all_degrees():
    config = BucketConfig(1000, 0.1)
    assert config.powers[-1] >= 1000
    assert config.powers[0] == 1.0
    assert config.powers[1] == pytest.approx(1.1)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 5000), st.floats(0.01, 2.0))
def test_every_positive_degree_maps_into_the_table(n, gamma):
    config = BucketConfig(n, gamma)
    degrees = np.unique(np.concatenate([[1, n - 1], np.linspace(1, n - 1, 12, dtype=np.int64)]))
    indices = config.bucket_indices(degrees)
    assert np.all(indices >= 0)
    assert np.all(indices < config.t)
    for d, i in zip(degrees.tolist(), indices.tolist()):
        assert d <= config.powers[i]
        if i > 0:
            assert d > config.powers[i - 1]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 2000), st.floats(0.02, 1.0), st.integers(1, 1999))
def test_vector_and_scalar_indexers_agree(n, gamma, d):
    if d >= n:
        d = n - 1
    config = BucketConfig(n, gamma)
    assert config.bucket_indices(np.array([d]))[0] == config.bucket_index(d)


def test_out_of_range_degrees_rejected():
    config = BucketConfig(100, 0.1)
    with pytest.raises(ValueError):
        config.bucket_index(0)
    with pytest.raises(ValueError):
        config.bucket_index(101)
    with pytest.raises(ValueError):
        config.bucket_indices(np.array([5, 0]))
    with pytest.raises(ValueError):
        config.bucket_indices(np.array([5, 200]))


def test_epsilon_constructor_divides_by_ten():
    config = BucketConfig.from_epsilon(10_000, 0.25)
    assert config.gamma == pytest.approx(0.025)
    assert config.t == bucket_count(10_000, 0.025)


def test_powers_table_is_read_only():
    config = BucketConfig(50, 0.5)
    with pytest.raises(ValueError):
        config.powers[0] = 99.0
