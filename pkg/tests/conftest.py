import pytest

from graphlim import (build_comma_prefix, build_prefix, constant_base,
                      discrete_graph, edge_graph, identity_map, classify)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # first kernel call pays any compilation cost; keep it out of timings
    classify(identity_map(edge_graph()))


@pytest.fixture(scope="session")
def plain_build():
    return build_prefix(size_cap=3, depth=8)


@pytest.fixture(scope="session")
def comma_build():
    return build_comma_prefix(constant_base(discrete_graph(2), 8))
