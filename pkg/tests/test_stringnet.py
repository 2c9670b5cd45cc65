import numpy as np
import pytest

from topoforge.errors import ShapeMismatch
from topoforge.reps import f_symbols, fusion_data
from topoforge.states import StateVector, admissible_colorings, is_admissible
from topoforge.stringnet import (OmegaData, apply_Bp, apply_Bp_s,
                                 duality_compare_Bp, kitaev_B_matrix_element,
                                 load_omega, resample_plaquette,
                                 sample_admissible)


def test_duality_z2_exhaustive(groups, torus22):
    G = groups["Z2"]
    for p in range(torus22.n_plaquettes):
        assert duality_compare_Bp(G, torus22, p) < 1e-9


def test_duality_s3_sampled(groups, torus22):
    G = groups["S3"]
    assert duality_compare_Bp(G, torus22, 0, trials=25, seed=1) < 1e-8


def test_bp_idempotent_and_symmetric(groups, torus22):
    G = groups["Z2"]
    fus = fusion_data(G)
    cols = admissible_colorings(torus22, fus)
    rng = np.random.default_rng(2)
    coeffs = rng.standard_normal(len(cols))
    st = StateVector("spin", {c: a for c, a in zip(cols, coeffs)})
    once = apply_Bp(G, torus22, 0, st)
    twice = apply_Bp(G, torus22, 0, once)
    assert twice.copy().axpy(-1.0, once).norm() < 1e-9
    # hermiticity on the admissible basis
    basis = [StateVector("spin", {c: 1.0}) for c in cols[:12]]
    mat = np.array([[a.dot(apply_Bp(G, torus22, 1, b)) for b in basis]
                    for a in basis])
    assert np.max(np.abs(mat - mat.conj().T)) < 1e-9


def test_bp_preserves_admissibility(groups, torus22):
    G = groups["S3"]
    fus = fusion_data(G)
    rng = np.random.default_rng(4)
    col = sample_admissible(torus22, fus, rng)
    out = apply_Bp_s(G, torus22, 2, 1, StateVector("spin", {col: 1.0}))
    for key in out.amplitudes:
        assert is_admissible(torus22, fus, key)


def test_kitaev_B_matrix_element_delta(groups, torus22):
    # summing the magnetic matrix elements over g resolves the B_p-diagonal
    G = groups["Z3"]
    fus = fusion_data(G)
    rng = np.random.default_rng(6)
    a = sample_admissible(torus22, fus, rng)
    total = sum(kitaev_B_matrix_element(G, torus22, g, 0, a, a)
                for g in range(G.order))
    assert abs(total - 1.0) < 1e-9        # the B_g(p) resolve the identity
    bp = apply_Bp(G, torus22, 0,
                  StateVector("spin", {a: 1.0})).amplitudes.get(a, 0.0)
    elem = kitaev_B_matrix_element(G, torus22, 0, 0, a, a)
    assert abs(bp - elem) < 1e-9          # g = 1 case of the duality


def test_resample_plaquette_local(groups, torus22):
    G = groups["S3"]
    fus = fusion_data(G)
    rng = np.random.default_rng(8)
    col = sample_admissible(torus22, fus, rng)
    new = resample_plaquette(torus22, fus, 0, col, rng)
    assert is_admissible(torus22, fus, new)
    inner = {ei for ei, _ in torus22.plaquettes[0].walk}
    for ei in range(torus22.n_edges):
        if ei not in inner:
            assert new[ei] == col[ei]


def test_omega_io_round_trip(tmp_path):
    mats = {(0, 1, 1, 0): [[1.0 + 2.0j, 0.0], [0.5j, -1.0]],
            (1, 0, 0, 1): [[0.0, 1.0], [1.0, 0.0]]}
    om = OmegaData.build(mats)
    path = tmp_path / "omega.txt"
    lines = ["# test omega data"]
    for (ip, s, sp, i), m in mats.items():
        m = np.asarray(m, dtype=complex)
        lines.append(f"{ip} {s} {sp} {i} {m.shape[0]}")
        for row in m:
            lines.append(" ".join(f"{z.real} {z.imag}" for z in row))
    path.write_text("\n".join(lines) + "\n")
    loaded = load_omega(path)
    assert loaded.size == om.size
    for k, m in om.matrices.items():
        assert np.allclose(loaded.get(*k), m)


def test_omega_shape_errors():
    with pytest.raises(ShapeMismatch):
        OmegaData.build({(0, 0, 0, 0): [[1.0, 2.0]]})
    with pytest.raises(ShapeMismatch):
        OmegaData.build({})
    om = OmegaData.identity([0, 1], size=2)
    with pytest.raises(ShapeMismatch):
        om.get(5, 5, 5, 5)
