"""Shared fixtures: the two four-node reference networks and friends.

``net_a`` (edges 0-1, 0-2 plus an isolated fourth node) and ``net_b``
(two disjoint edges) are the smallest pair of graphs with equal node and
edge totals but different induced edge-count distributions, which makes
them the canonical probes for everything downstream.
"""

import numpy as np
import pytest

from netgof import Graph, generate_gnm, parse_edge_list


@pytest.fixture(scope="session")
def net_a() -> Graph:
    return parse_edge_list("1 2\n1 3\n", node_count=4)


@pytest.fixture(scope="session")
def net_b() -> Graph:
    return parse_edge_list("1 2\n3 4\n")


@pytest.fixture(scope="session")
def k4() -> Graph:
    return generate_gnm(4, 6, 1)


@pytest.fixture(scope="session")
def medium_gnm() -> Graph:
    return generate_gnm(300, 900, 20240817)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(987654321)
