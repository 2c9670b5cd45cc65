import pytest

from topoforge.groups import build_group
from topoforge.lattice import honeycomb_torus
from topoforge.reps import f_symbols

GROUP_NAMES = ("Z2", "Z3", "Z4", "S3", "D4")


@pytest.fixture(scope="session")
def groups():
    return {name: build_group(name) for name in GROUP_NAMES}


@pytest.fixture(scope="session")
def tables(groups):
    return {name: f_symbols(G) for name, G in groups.items()}


@pytest.fixture(scope="session")
def torus22():
    return honeycomb_torus(2, 2)
