import itertools

import numpy as np
import pytest

from topoforge.errors import NotGaugeInvariant
from topoforge.lattice import theta_graph
from topoforge.reps import fusion_data
from topoforge.states import (StateVector, admissible_colorings, amplitude,
                              fourier_overlap, is_admissible,
                              spin_state_group_expansion, to_group_basis,
                              to_spin_basis)


def _random_spin_state(graph, fus, rng, n=None):
    cols = admissible_colorings(graph, fus)
    coeffs = rng.standard_normal(len(cols)) + 1j * rng.standard_normal(len(cols))
    st = StateVector("spin", {c: a for c, a in zip(cols, coeffs)})
    return st.scale(1.0 / st.norm())


def test_theta_admissible_z2(groups):
    fus = fusion_data(groups["Z2"])
    cols = admissible_colorings(theta_graph(), fus)
    assert set(cols) == {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_torus_admissible_z2_cycle_space(groups, torus22):
    fus = fusion_data(groups["Z2"])
    cols = admissible_colorings(torus22, fus)
    # closed-loop configurations: 2^(E - V + 1)
    assert len(cols) == 2 ** (torus22.n_edges - torus22.n_vertices + 1)


def test_trivial_coloring_admissible(groups, torus22):
    for name, G in groups.items():
        fus = fusion_data(G)
        assert is_admissible(torus22, fus, (0,) * torus22.n_edges)


def test_theta_amplitude_sign_oracle(groups):
    # labels (1,1,0) on the Z2 theta graph: amplitude sign is (-1)^(a+b)
    G = groups["Z2"]
    th = theta_graph()
    vals = {}
    for g in itertools.product(range(2), repeat=3):
        vals[g] = amplitude(G, th, (1, 1, 0), g)
    scale = abs(vals[(0, 0, 0)])
    assert scale > 0
    for (a, b, c), v in vals.items():
        assert abs(v - (-1.0) ** (a + b) * scale) < 1e-12


def test_fourier_overlap_normalization(groups):
    G = groups["Z2"]
    th = theta_graph()
    for j in [(0, 0, 0), (1, 1, 0)]:
        tot = sum(abs(fourier_overlap(G, th, j, g)) ** 2
                  for g in itertools.product(range(2), repeat=3))
        assert abs(tot - 1.0) < 1e-10


def test_spin_expansion_norm(groups):
    G = groups["Z2"]
    th = theta_graph()
    st = spin_state_group_expansion(G, th, (1, 1, 0))
    assert abs(st.norm() - 1.0) < 1e-10
    assert len(st.amplitudes) == G.order ** th.n_edges


@pytest.mark.parametrize("graph_name", ["theta", "torus"])
def test_round_trip(graph_name, groups, torus22):
    G = groups["Z2"]
    graph = theta_graph() if graph_name == "theta" else torus22
    fus = fusion_data(G)
    rng = np.random.default_rng(7)
    for _ in range(5):
        spin = _random_spin_state(graph, fus, rng)
        grp = to_group_basis(G, graph, spin)
        back = to_spin_basis(G, graph, grp)
        assert back.copy().axpy(-1.0, spin).norm() < 1e-10
        assert abs(grp.norm() - 1.0) < 1e-10


def test_round_trip_s3_theta(groups):
    G = groups["S3"]
    th = theta_graph()
    fus = fusion_data(G)
    rng = np.random.default_rng(11)
    for _ in range(3):
        spin = _random_spin_state(th, fus, rng)
        grp = to_group_basis(G, th, spin)
        back = to_spin_basis(G, th, grp)
        assert back.copy().axpy(-1.0, spin).norm() < 1e-10


@pytest.mark.parametrize("graph_name", ["theta", "torus"])
def test_spin_gram_identity_z2(graph_name, groups, torus22):
    G = groups["Z2"]
    graph = theta_graph() if graph_name == "theta" else torus22
    fus = fusion_data(G)
    cols = admissible_colorings(graph, fus)
    states = [to_group_basis(G, graph, StateVector("spin", {c: 1.0}))
              for c in cols]
    gram = np.array([[a.dot(b) for b in states] for a in states])
    assert np.max(np.abs(gram - np.eye(len(cols)))) < 1e-9


def test_spin_gram_identity_s3_theta(groups):
    G = groups["S3"]
    th = theta_graph()
    fus = fusion_data(G)
    cols = admissible_colorings(th, fus)
    states = [to_group_basis(G, th, StateVector("spin", {c: 1.0}))
              for c in cols]
    gram = np.array([[a.dot(b) for b in states] for a in states])
    assert np.max(np.abs(gram - np.eye(len(cols)))) < 1e-9


def test_point_mass_not_gauge_invariant(groups):
    G = groups["Z2"]
    th = theta_graph()
    st = StateVector("group", {(0, 1, 0): 1.0})
    with pytest.raises(NotGaugeInvariant):
        to_spin_basis(G, th, st)
