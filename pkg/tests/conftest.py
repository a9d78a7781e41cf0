from __future__ import annotations

import pytest

from edgecount import build_graph


@pytest.fixture
def triangle():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3():
    return build_graph(3, [(0, 1), (1, 2)])
