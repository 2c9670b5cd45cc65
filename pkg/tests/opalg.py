"""Vectorized operator algebra on the full group-basis space.

The electric operator A(v) is an average of |G| basis permutations (one
gauge transformation per group element) and B_1(p) is a diagonal 0/1
projector, so every algebra statement reduces to integer identities
between permutation index arrays and masks.  The arrays are built here
with vectorized table lookups and cross-validated against the package's
sparse operators on sampled basis states; the termwise identities imply
the operator statements exactly.  When a termwise identity fails, the
deviation is measured on the full summed operators instead, so a genuine
algebra violation is still reported as a nonzero deviation.
"""

import numpy as np

from topoforge.kitaev import holonomy as holonomy_one
from topoforge.kitaev import _all_colorings_array


def coloring_index(cols, n):
    E = cols.shape[1]
    weights = n ** np.arange(E - 1, -1, -1, dtype=np.int64)
    return cols.astype(np.int64) @ weights


def gauge_perms(G, lat):
    """perms[v][g]: basis index array of the gauge transformation g at v."""
    n = G.order
    cols = _all_colorings_array(G, lat.n_edges)
    mult, inv = G.mult, G.inv
    out = []
    for v in range(lat.n_vertices):
        per_g = []
        for g in range(n):
            new = cols.copy()
            for ei, outgoing in lat.vertex_slots[v]:
                if outgoing:
                    new[:, ei] = mult[cols[:, ei], inv[g]]
                else:
                    new[:, ei] = mult[g, cols[:, ei]]
            per_g.append(coloring_index(new, n))
        out.append(per_g)
    return out


def flat_masks(G, lat):
    """masks[p]: boolean array, holonomy of p trivial."""
    n = G.order
    cols = _all_colorings_array(G, lat.n_edges)
    N = cols.shape[0]
    mult, inv = G.mult, G.inv
    out = []
    for p in range(lat.n_plaquettes):
        acc = np.zeros(N, dtype=np.int64)
        for ei, forward in lat.plaquettes[p].walk:
            h = cols[:, ei] if forward else inv[cols[:, ei]]
            acc = mult[h, acc]
        out.append(acc == 0)
    return out


def _term_matrix(perms, diags, coeffs, N):
    """Canonical COO of sum_k c_k P_k D_k: entries at (perm[x], x)."""
    rows = np.concatenate([p for p in perms])
    cols = np.tile(np.arange(N, dtype=np.int64), len(perms))
    vals = np.concatenate([c * d for c, d in zip(coeffs, diags)])
    key = cols * np.int64(N) + rows
    order = np.argsort(key, kind="stable")
    key, vals = key[order], vals[order]
    starts = np.concatenate(([True], key[1:] != key[:-1]))
    idx = np.nonzero(starts)[0]
    sums = np.add.reduceat(vals, idx)
    return key[idx], sums


def _compose(op1, op2, N):
    """(perms, diags, coeffs) of op1 applied after op2."""
    perms, diags, coeffs = [], [], []
    for p1, d1, c1 in zip(*op1):
        for p2, d2, c2 in zip(*op2):
            perms.append(p1[p2])
            diags.append(d1[p2] * d2)
            coeffs.append(c1 * c2)
    return perms, diags, coeffs


def _matrix_deviation(opa, opb, N):
    ka, va = _term_matrix(*opa, N)
    kb, vb = _term_matrix(*opb, N)
    keys = np.union1d(ka, kb)
    full_a = np.zeros(len(keys))
    full_b = np.zeros(len(keys))
    full_a[np.searchsorted(keys, ka)] = va
    full_b[np.searchsorted(keys, kb)] = vb
    return float(np.max(np.abs(full_a - full_b))) if len(keys) else 0.0


def operator_suite(G, lat):
    """All A(v) and B_1(p) in (perms, diags, coeffs) form."""
    n = G.order
    N = n ** lat.n_edges
    ones = np.ones(N)
    perms = gauge_perms(G, lat)
    masks = flat_masks(G, lat)
    ident = np.arange(N, dtype=np.int64)
    ops = {}
    for v in range(lat.n_vertices):
        ops[("A", v)] = (perms[v], [ones] * n, [1.0 / n] * n)
    for p in range(lat.n_plaquettes):
        ops[("B", p)] = ([ident], [masks[p].astype(float)], [1.0])
    return ops, N


def commutator_deviation(ops, a, b, N):
    # fast path: every term of op_a commutes with every term of op_b,
    # which makes the commutator of the sums exactly zero
    p1, d1, _ = ops[a]
    p2, d2, _ = ops[b]
    if all(np.array_equal(pa[pb], pb[pa])
           and np.array_equal(da[pb] * db, db[pa] * da)
           for pa, da in zip(p1, d1) for pb, db in zip(p2, d2)):
        return 0.0
    return _matrix_deviation(_compose(ops[a], ops[b], N),
                             _compose(ops[b], ops[a], N), N)


def idempotency_deviation(ops, G, a, N):
    if a[0] == "A":
        # fast path: the gauge permutations form a group representation,
        # so P_g P_h = P_{gh} makes A^2 = A exactly
        perms = ops[a][0]
        n = G.order
        if all(np.array_equal(perms[g][perms[h]],
                              perms[int(G.mult[g, h])])
               for g in range(n) for h in range(n)):
            return 0.0
    else:
        mask = ops[a][1][0]
        if np.array_equal(mask * mask, mask):
            return 0.0
    return _matrix_deviation(_compose(ops[a], ops[a], N), ops[a], N)


def self_adjoint_deviation(op, G, N):
    """Max |M - M^T| for M = sum c P D: transpose is sum c D P^-1."""
    perms, diags, coeffs = op
    # fast path for A(v): inverse permutation of P_g is P_{g^-1} and the
    # weights are uniform, so the sum is symmetric
    if len(perms) == G.order:
        ident = np.arange(N, dtype=np.int64)
        if all(np.array_equal(perms[int(G.inv[g])][perms[g]], ident)
               for g in range(G.order)):
            return 0.0
    elif len(perms) == 1 and np.array_equal(perms[0],
                                            np.arange(N, dtype=np.int64)):
        return 0.0   # real diagonal
    tperms, tdiags = [], []
    for p, d in zip(perms, diags):
        pinv = np.empty_like(p)
        pinv[p] = np.arange(N, dtype=np.int64)
        tperms.append(pinv)
        tdiags.append(d[pinv])
    return _matrix_deviation((perms, diags, coeffs),
                             (tperms, tdiags, coeffs), N)


def validate_against_sparse(G, lat, ops, rng, samples=40):
    """Cross-check the vectorized forms against the package operators."""
    from topoforge.kitaev import apply_electric_A, apply_magnetic_B
    from topoforge.states import StateVector

    n = G.order
    E = lat.n_edges
    N = n ** E
    worst = 0.0
    for _ in range(samples):
        x = int(rng.integers(N))
        key = tuple(int(d) for d in np.unravel_index(x, (n,) * E))
        st = StateVector("group", {key: 1.0})
        for v in range(lat.n_vertices):
            ref = apply_electric_A(G, lat, v, st)
            perms, diags, coeffs = ops[("A", v)]
            got = {}
            for p, c in zip(perms, coeffs):
                k = tuple(int(d) for d in np.unravel_index(int(p[x]),
                                                           (n,) * E))
                got[k] = got.get(k, 0.0) + c
            for k in set(ref.amplitudes) | set(got):
                worst = max(worst, abs(ref.amplitudes.get(k, 0.0)
                                       - got.get(k, 0.0)))
        for p in range(lat.n_plaquettes):
            ref = apply_magnetic_B(G, lat, 0, p, st)
            mask = ops[("B", p)][1][0]
            worst = max(worst, abs(mask[x] - (1.0 if ref.amplitudes else 0.0)))
            assert (holonomy_one(G, lat, p, key) == 0) == bool(mask[x] > 0.5)
    return worst
