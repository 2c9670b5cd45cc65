import itertools

import numpy as np
import pytest

from topoforge.reps import (f_symbols, fusion_coefficient, fusion_data,
                            intertwiner, irreps, tetrahedral_symmetry_residual,
                            verify_pentagon)

NAMES = ("Z2", "Z3", "Z4", "S3", "D4")
DIMS = {"Z2": [1, 1], "Z3": [1, 1, 1], "Z4": [1, 1, 1, 1],
        "S3": [1, 1, 2], "D4": [1, 1, 1, 1, 2]}


@pytest.mark.parametrize("name", NAMES)
def test_irrep_axioms(name, groups):
    G = groups[name]
    rs = irreps(G)
    assert [r.dim for r in rs] == DIMS[name]
    assert sum(r.dim ** 2 for r in rs) == G.order
    for r in rs:
        # homomorphism and unitarity
        for a in range(G.order):
            for b in range(G.order):
                assert np.allclose(r.matrices[G.mult[a, b]],
                                   r.matrices[a] @ r.matrices[b], atol=1e-12)
            u = r.matrices[a]
            assert np.allclose(u @ u.conj().T, np.eye(r.dim), atol=1e-12)


@pytest.mark.parametrize("name", NAMES)
def test_character_orthogonality(name, groups):
    G = groups[name]
    rs = irreps(G)
    chars = np.array([[np.trace(r.matrices[g]) for g in range(G.order)]
                      for r in rs])
    gram = chars @ chars.conj().T / G.order
    assert np.allclose(gram, np.eye(len(rs)), atol=1e-12)


@pytest.mark.parametrize("name", NAMES)
def test_fusion_properties(name, groups):
    G = groups[name]
    fus = fusion_data(G)
    R = len(fus.dual)
    for i, j, k in itertools.product(range(R), repeat=3):
        n = fusion_coefficient(G, i, j, k)
        assert n in (0, 1)                        # multiplicity-free groups
        assert n == fusion_coefficient(G, j, k, i)  # cyclic invariance
    for j, k in itertools.product(range(R), repeat=2):
        assert fusion_coefficient(G, 0, j, k) == (1 if k == fus.dual[j] else 0)


@pytest.mark.parametrize("name", NAMES)
def test_dual_is_involution(name, groups):
    fus = fusion_data(groups[name])
    d = np.asarray(fus.dual)
    assert np.array_equal(d[d], np.arange(len(d)))


@pytest.mark.parametrize("name", NAMES)
def test_intertwiner_invariance(name, groups):
    G = groups[name]
    fus = fusion_data(G)
    rs = irreps(G)
    R = len(rs)
    for i, j, k in itertools.product(range(R), repeat=3):
        if not fus.N[i, j, k]:
            continue
        T = intertwiner(G, i, j, k).tensor
        assert abs(np.linalg.norm(T) - 1.0) < 1e-12
        for g in range(G.order):
            rot = np.einsum("abc,ax,by,cz->xyz", T, rs[i].matrices[g],
                            rs[j].matrices[g], rs[k].matrices[g])
            assert np.allclose(rot, T, atol=1e-10)


@pytest.mark.parametrize("name", NAMES)
def test_f_support_and_quantum_dims(name, tables):
    table = tables[name]
    d = table.dims
    assert np.allclose(table.v ** 2, d)
    fus_support = np.abs(table.F) > 1e-12
    # nonzero entries only on admissible 6j supports
    from topoforge.groups import build_group
    from topoforge.reps import fusion_data
    fus = fusion_data(build_group(name))
    N, dual = fus.N, fus.dual
    for idx in np.argwhere(fus_support):
        i, j, m, k, l, n = (int(x) for x in idx)
        assert N[i, j, m] and N[dual[m], k, l] \
            and N[j, k, dual[n]] and N[i, n, l]


@pytest.mark.parametrize("name", NAMES)
def test_pentagon(name, tables):
    assert verify_pentagon(tables[name]) < 1e-9


@pytest.mark.parametrize("name", NAMES)
def test_tetrahedral_symmetry(name, tables):
    assert tetrahedral_symmetry_residual(tables[name]) < 1e-9


def test_z2_f_entries(tables):
    # Z2 F entries are +-1 on the admissible set
    F = tables["Z2"].F
    nz = F[np.abs(F) > 1e-12]
    assert np.allclose(np.abs(nz), 1.0, atol=1e-12)
    assert np.allclose(nz.imag, 0.0, atol=1e-12)
