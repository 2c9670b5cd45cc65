import numpy as np
import pytest

from topoforge.errors import UnknownGroup
from topoforge.groups import (build_group, commuting_pair_orbit_count,
                              conjugacy_classes)

ORDERS = {"Z2": 2, "Z3": 3, "Z4": 4, "S3": 6, "D4": 8}
N_CLASSES = {"Z2": 2, "Z3": 3, "Z4": 4, "S3": 3, "D4": 5}
# anyon count of D(G) = number of conjugation orbits of commuting pairs
ANYONS = {"Z2": 4, "Z3": 9, "Z4": 16, "S3": 8, "D4": 22}


@pytest.mark.parametrize("name", list(ORDERS))
def test_group_table_axioms(name):
    G = build_group(name)
    n = G.order
    assert n == ORDERS[name]
    assert G.identity == 0
    m = G.mult
    # identity, inverses, associativity
    assert np.array_equal(m[0], np.arange(n))
    assert np.array_equal(m[:, 0], np.arange(n))
    assert np.array_equal(m[np.arange(n), G.inv], np.zeros(n, dtype=m.dtype))
    for a in range(n):
        assert np.array_equal(m[m[a]], m[a][m])


@pytest.mark.parametrize("name", list(ORDERS))
def test_conjugacy_classes(name):
    G = build_group(name)
    classes = conjugacy_classes(G)
    assert len(classes) == N_CLASSES[name]
    members = [x for c in classes for x in c.members]
    assert sorted(members) == list(range(G.order))
    for c in classes:
        assert c.representative in c.members


@pytest.mark.parametrize("name", list(ORDERS))
def test_commuting_pair_orbit_count(name):
    G = build_group(name)
    assert commuting_pair_orbit_count(G) == ANYONS[name]


def test_abelian_anyon_count_is_order_squared():
    for n in (2, 3, 4):
        G = build_group(f"Z{n}")
        assert commuting_pair_orbit_count(G) == n * n


def test_unknown_group():
    with pytest.raises(UnknownGroup):
        build_group("E8")
    with pytest.raises(UnknownGroup):
        build_group("Zx")


def test_s3_noncommutative():
    G = build_group("S3")
    assert not np.array_equal(G.mult, G.mult.T)
