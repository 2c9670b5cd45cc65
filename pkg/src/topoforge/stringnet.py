"""Levin-Wen string-net operators in the spin-network basis.

B_p^s multiplies six F-symbols around a hexagon (one per plaquette vertex)
and sums over the primed inner labels; B_p is the quantum-dimension
average.  duality_compare_Bp checks those matrix elements against the
Kitaev magnetic projector computed in the group basis through the Fourier
transform.  apply_string_operator evaluates ribbon strings with
caller-supplied Omega data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotAdmissible, NotAPath, ShapeMismatch
from .groups import FiniteGroup
from .reps import FSymbolTable, f_symbols, fusion_data, intertwiner, irreps
from .states import (StateVector, _PRUNE, _spanning_tree, _vertex_tensor,
                     admissible_colorings, check_vertex, is_admissible)

__all__ = ["check_vertex", "plaquette_frame", "apply_Bp_s", "apply_Bp",
           "duality_compare_Bp", "kitaev_B_matrix_element", "OmegaData",
           "load_omega", "apply_string_operator", "sample_admissible",
           "resample_plaquette"]


def plaquette_frame(lat, p: int):
    """Per walk position: (inner edge, forward flag, vertex, external edge,
    external-out flag).

    The vertex at position t is where inner edge t-1 ends and inner edge t
    begins (along the ccw walk); the external edge is the third edge there.
    """
    walk = lat.plaquettes[p].walk
    verts = lat.plaquette_vertices(p)
    inner = {ei for ei, _ in walk}
    frame = []
    for (ei, fwd), v in zip(walk, verts):
        ext = [(e, o) for e, o in lat.vertex_slots[v] if e not in inner]
        if len(ext) != 1:
            raise NotAPath(f"vertex {v} of plaquette {p} lacks a unique "
                           f"external edge")
        frame.append((ei, fwd, v, ext[0][0], ext[0][1]))
    return tuple(frame)


def _effective(label: int, aligned: bool, dual) -> int:
    return label if aligned else int(dual[label])


_reorder_cache: dict = {}


def _leg_reorder(G: FiniteGroup, lat, v: int, ee: int, eo: bool,
                 ea: int, aal: bool, eb: int, bal: bool, key, dual):
    """Overlap between the stored vertex tensor and a walk-frame reading.

    The state's intertwiner at v is wired in vertex_slots order while the
    recoupling rules read the legs as (external, arriving, leaving) with
    effective (orientation-adjusted) labels.  The two unit tensors agree up
    to a phase (a sign for couplings that are antisymmetric under exchanging
    repeated labels); that phase multiplies the F-symbol product.
    """
    ck = (G.name, id(lat), v, ee, eo, ea, aal, eb, bal,
          key[ee], key[ea], key[eb])
    hit = _reorder_cache.get(ck)
    if hit is not None:
        return hit
    fus = fusion_data(G)
    t_state = _vertex_tensor(G, lat, v, key, fus)
    slots = [e for e, _ in lat.vertex_slots[v]]
    order = (slots.index(ee), slots.index(ea), slots.index(eb))
    u_in = _effective(key[ea], aal, dual)
    u_out = _effective(key[eb], bal, dual)
    b = _effective(key[ee], eo, dual)
    t_frame = intertwiner(G, b, int(dual[u_in]), u_out).tensor
    ov = complex(np.vdot(t_frame, np.transpose(t_state, order)))
    _reorder_cache[ck] = ov
    return ov


def _reorder_factor(G: FiniteGroup, lat, frame, inner, t: int, key, dual):
    """Leg-reorder phase at hexagon position t (see _leg_reorder)."""
    ei_t, fwd_t, v_t, ee, eo = frame[t]
    ei_prev, fwd_prev = frame[t - 1][0], frame[t - 1][1]
    return _leg_reorder(G, lat, v_t, ee, eo, ei_prev, fwd_prev,
                        ei_t, fwd_t, key, dual)


def apply_Bp_s(G: FiniteGroup, lat, s: int, p: int, state: StateVector,
               table: FSymbolTable | None = None) -> StateVector:
    """B_p^s: the six-F plaquette term of the string-net Hamiltonian.

    With ccw-oriented inner labels u_t and outward external labels b_t, the
    vertex at position t contributes F^{b_t u_{t-1}* u_t}_{s* u'_t u'_{t-1}*}
    and the primed labels are summed over admissible values.  Each vertex
    also carries the leg-reorder phases relating the stored intertwiners of
    the old and new colorings to the hexagon-frame reading.
    """
    if table is None:
        table = f_symbols(G)
    F, dual = table.F, table.dual
    fus = fusion_data(G)
    frame = plaquette_frame(lat, p)
    inner = [ei for ei, _, _, _, _ in frame]
    sdual = int(dual[s])
    out = StateVector("spin")
    for key, amp in state.amplitudes.items():
        u = [_effective(key[ei], fwd, dual) for ei, fwd, _, _, _ in frame]
        b = [_effective(key[ee], eo, dual) for _, _, _, ee, eo in frame]
        for t in range(6):
            amp = amp * _reorder_factor(G, lat, frame, inner, t, key, dual)
        # candidate primed labels: u_t* (x) s* -> u'_t* must be admissible
        cands = [np.nonzero(fus.N[dual[ut], sdual])[0] for ut in u]
        for up in itertools.product(*cands):
            coeff = amp
            for t in range(6):
                coeff *= F[b[t], dual[u[t - 1]], u[t],
                           sdual, up[t], dual[up[t - 1]]]
                if coeff == 0:
                    break
            if coeff == 0:
                continue
            new = list(key)
            for (ei, fwd, _, _, _), lab in zip(frame, up):
                new[ei] = int(lab) if fwd else int(dual[lab])
            new = tuple(new)
            for t in range(6):
                coeff *= np.conj(
                    _reorder_factor(G, lat, frame, inner, t, new, dual))
            out.add(new, coeff)
    out.prune()
    for key in out.amplitudes:
        if not is_admissible(lat, fus, key):
            raise NotAdmissible(f"B_p^{s} produced inadmissible {key}")
    return out


def apply_Bp(G: FiniteGroup, lat, p: int, state: StateVector,
             table: FSymbolTable | None = None) -> StateVector:
    """B_p = (1/d) sum_s d_s B_p^s with d = |G|."""
    if table is None:
        table = f_symbols(G)
    out = StateVector("spin")
    for s in range(table.n_labels):
        out.axpy(table.dims[s] / G.order,
                 apply_Bp_s(G, lat, s, p, state, table=table))
    return out.prune()


# ---------------------------------------------------------------------------
# Kitaev side: B_g(p) matrix elements between spin-network states, computed
# in the group basis with a tree gauge fixing.

_gf_cache: dict = {}


def _free_edges(graph):
    tree_edges = {t[0] for t in _spanning_tree(graph)}
    return [e.index for e in graph.edges if e.index not in tree_edges]


def _gauge_fixed_vector(G: FiniteGroup, graph, j_coloring) -> np.ndarray:
    """Unnormalized amplitudes on the tree-gauge-fixed colorings.

    Shape (|G|,) * n_free, indexed by the free-edge colors in increasing
    edge order; tree edges carry the identity.
    """
    key = (G.name, id(graph), tuple(j_coloring))
    if key in _gf_cache:
        return _gf_cache[key]
    fus = fusion_data(G)
    reps = irreps(G)
    free = _free_edges(graph)
    free_pos = {e: i for i, e in enumerate(free)}
    operands, subs = [], []
    next_idx = len(free)
    edge_row, edge_col = {}, {}
    for e in graph.edges:
        edge_row[e.index] = next_idx
        edge_col[e.index] = next_idx + 1
        mats = reps[j_coloring[e.index]].matrices
        if e.index in free_pos:
            operands.append(mats)
            subs.append([free_pos[e.index], next_idx, next_idx + 1])
        else:
            operands.append(mats[G.identity])
            subs.append([next_idx, next_idx + 1])
        next_idx += 2
    for v in range(graph.n_vertices):
        operands.append(_vertex_tensor(G, graph, v, j_coloring, fus))
        subs.append([edge_col[e] if out else edge_row[e]
                     for e, out in graph.vertex_slots[v]])
    args = []
    for op, sub in zip(operands, subs):
        args.extend((op, sub))
    args.append(list(range(len(free))))
    psi = np.einsum(*args, optimize=True)
    _gf_cache[key] = psi
    return psi


def _holonomy_values(G: FiniteGroup, lat, p: int) -> np.ndarray:
    """Holonomy of plaquette p on each tree-gauge-fixed coloring."""
    key = (G.name, id(lat), p)
    if key in _gf_cache:
        return _gf_cache[key]
    free = _free_edges(lat)
    free_pos = {e: i for i, e in enumerate(free)}
    n = G.order
    shape = (n,) * len(free)
    acc = np.zeros(shape, dtype=np.int64)
    ax = [np.arange(n).reshape((1,) * i + (n,) + (1,) * (len(free) - 1 - i))
          for i in range(len(free))]
    for ei, forward in lat.plaquettes[p].walk:
        if ei in free_pos:
            h = np.broadcast_to(ax[free_pos[ei]], shape)
        else:
            h = np.full(shape, G.identity, dtype=np.int64)
        if not forward:
            h = G.inv[h]
        acc = G.mult[h, acc]
    _gf_cache[key] = acc
    return acc


def kitaev_B_matrix_element(G: FiniteGroup, lat, g: int, p: int,
                            j_bra, j_ket) -> complex:
    """<S'|B_g(p)|S> in the group basis, via the tree-gauge-fixed sum.

    The integrand conj(Psi')'*delta(hol = g)*Psi is gauge invariant, so the
    gauge-volume factors cancel against the norms.
    """
    a_bra = _gauge_fixed_vector(G, lat, j_bra)
    a_ket = _gauge_fixed_vector(G, lat, j_ket)
    mask = _holonomy_values(G, lat, p) == g
    num = np.sum(np.conj(a_bra) * a_ket * mask)
    nb = np.sqrt(np.sum(np.abs(a_bra) ** 2))
    nk = np.sqrt(np.sum(np.abs(a_ket) ** 2))
    if nb < _PRUNE or nk < _PRUNE:
        raise NotAdmissible("zero-norm spin-network state in matrix element")
    return complex(num / (nb * nk))


def sample_admissible(graph, fus, rng) -> tuple:
    """One admissible coloring drawn by randomized backtracking."""
    E = graph.n_edges
    vertex_ready = [max(e for e, _ in graph.vertex_slots[v])
                    for v in range(graph.n_vertices)]
    by_depth = [[] for _ in range(E)]
    for v, d in enumerate(vertex_ready):
        by_depth[d].append(v)

    def rec(prefix):
        d = len(prefix) - 1
        if d >= 0:
            for v in by_depth[d]:
                if not check_vertex(graph, fus, prefix, v):
                    return None
        if len(prefix) == E:
            return tuple(prefix)
        for c in rng.permutation(fus.n_labels):
            prefix.append(int(c))
            got = rec(prefix)
            if got is not None:
                return got
            prefix.pop()
        return None

    got = rec([])
    if got is None:
        raise NotAdmissible("graph admits no admissible coloring")
    return got


def resample_plaquette(lat, fus, p: int, coloring, rng) -> tuple:
    """Redraw the six inner labels of plaquette p, keeping the rest."""
    inner = [ei for ei, _ in lat.plaquettes[p].walk]
    verts = set(lat.plaquette_vertices(p))

    def rec(work, pos):
        if pos == len(inner):
            return tuple(work)
        for c in rng.permutation(fus.n_labels):
            work[inner[pos]] = int(c)
            ok = True
            for v in verts:
                es = [e for e, _ in lat.vertex_slots[v]]
                if all(e not in inner[pos + 1:] for e in es):
                    if not check_vertex(lat, fus, work, v):
                        ok = False
                        break
            if ok:
                got = rec(work, pos + 1)
                if got is not None:
                    return got
        work[inner[pos]] = coloring[inner[pos]]
        return None

    got = rec(list(coloring), 0)
    if got is None:
        raise NotAdmissible(f"no admissible refill of plaquette {p}")
    return got


def duality_compare_Bp(G: FiniteGroup, lat, p: int, trials: int | None = None,
                       seed: int = 0,
                       table: FSymbolTable | None = None) -> float:
    """Max |<S'|B_1(p)>_Kitaev - <S'|B_p|S>_string-net| over state pairs.

    trials=None compares every admissible pair that agrees outside p
    (exhaustive); otherwise `trials` randomly sampled such pairs.
    """
    if table is None:
        table = f_symbols(G)
    fus = fusion_data(G)
    inner = [ei for ei, _ in lat.plaquettes[p].walk]
    pairs = []
    if trials is None:
        groups = {}
        for j in admissible_colorings(lat, fus):
            boundary = tuple(c for e, c in enumerate(j) if e not in inner)
            groups.setdefault(boundary, []).append(j)
        for members in groups.values():
            for j_ket in members:
                for j_bra in members:
                    pairs.append((j_bra, j_ket))
    else:
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            j_ket = sample_admissible(lat, fus, rng)
            j_bra = resample_plaquette(lat, fus, p, j_ket, rng)
            pairs.append((j_bra, j_ket))
    worst = 0.0
    ket_cache: dict = {}
    for j_bra, j_ket in pairs:
        if j_ket not in ket_cache:
            st = StateVector("spin", {j_ket: 1.0})
            ket_cache[j_ket] = apply_Bp(G, lat, p, st, table=table)
        lhs = kitaev_B_matrix_element(G, lat, G.identity, p, j_bra, j_ket)
        rhs = ket_cache[j_ket].amplitudes.get(j_bra, 0.0)
        worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# String operators (Eq.-20 style), with caller-supplied Omega data.

@dataclass(frozen=True)
class OmegaData:
    """Omega matrices for a string operator, keyed (i', s, s', i).

    Every matrix must be square and of one common size; the conjugate
    family is obtained by entrywise complex conjugation.
    """

    matrices: dict
    size: int

    @staticmethod
    def build(matrices: dict) -> "OmegaData":
        size = None
        store = {}
        for k, m in matrices.items():
            m = np.asarray(m, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ShapeMismatch(f"Omega{k} is not square: {m.shape}")
            if size is None:
                size = m.shape[0]
            elif m.shape[0] != size:
                raise ShapeMismatch(f"Omega{k} size {m.shape[0]} != {size}")
            store[tuple(int(x) for x in k)] = m
        if size is None:
            raise ShapeMismatch("empty Omega data")
        return OmegaData(matrices=store, size=size)

    @staticmethod
    def identity(labels, size: int = 1) -> "OmegaData":
        eye = np.eye(size, dtype=complex)
        mats = {}
        for ip, s, sp, i in itertools.product(labels, repeat=4):
            mats[(ip, s, sp, i)] = eye
        return OmegaData.build(mats)

    def get(self, ip: int, s: int, sp: int, i: int) -> np.ndarray:
        m = self.matrices.get((ip, s, sp, i))
        if m is None:
            raise ShapeMismatch(f"missing Omega^{ip}_[{s},{sp},{i}]")
        return m


def load_omega(path) -> OmegaData:
    """Read Omega matrices from a text file.

    Each block: a header line `i' s s' i n` followed by n rows of n
    complex entries written as `re im` pairs; blank lines and #-comments
    are skipped.
    """
    mats = {}
    with open(path) as fh:
        lines = [ln.strip() for ln in fh
                 if ln.strip() and not ln.lstrip().startswith("#")]
    pos = 0
    while pos < len(lines):
        head = lines[pos].split()
        if len(head) != 5:
            raise ShapeMismatch(f"bad Omega header: {lines[pos]!r}")
        ip, s, sp, i, n = (int(x) for x in head)
        rows = []
        for r in range(n):
            vals = [float(x) for x in lines[pos + 1 + r].split()]
            if len(vals) != 2 * n:
                raise ShapeMismatch(f"Omega row needs {n} re/im pairs")
            rows.append([complex(vals[2 * c], vals[2 * c + 1])
                         for c in range(n)])
        mats[(ip, s, sp, i)] = np.array(rows)
        pos += 1 + n
    return OmegaData.build(mats)


def _string_joints(lat, edge_path, closed: bool):
    """Joint data along a connected edge path.

    Returns (alignments, joints): alignments[k] says whether path edge k's
    stored orientation follows the walking direction; joints is a list of
    (vertex, turn, prev_pos, cur_pos, ext_edge, ext_out) where positions
    index the path edges meeting at the joint and turn is "L" when the walk
    follows the ccw face-tracing sense (as every ccw plaquette walk does).
    """
    path = list(edge_path)
    n = len(path)
    if n < 2:
        raise NotAPath("a string needs at least two edges")
    if len(set(path)) != n:
        raise NotAPath("string path revisits an edge")
    pairs = [(k, (k + 1) % n) for k in range(n)] if closed \
        else [(k, k + 1) for k in range(n - 1)]
    # chain the walk: determine alignments from shared endpoints
    alignments = [None] * n
    joints = []
    prev_v = None
    for a, b in pairs:
        ea, eb = lat.edges[path[a]], lat.edges[path[b]]
        shared = {ea.source, ea.target} & {eb.source, eb.target}
        shared.discard(prev_v)
        if not shared:
            raise NotAPath(f"edges {ea.index},{eb.index} do not chain")
        v = min(shared)
        a_aligned = ea.target == v      # walked toward v
        b_aligned = eb.source == v      # walked away from v
        if alignments[a] is None:
            alignments[a] = a_aligned
        elif alignments[a] != a_aligned:
            raise NotAPath("path doubles back on itself")
        alignments[b] = b_aligned
        ring = lat.vertex_slots[v]
        pa = ring.index((ea.index, ea.source == v))
        pb = ring.index((eb.index, eb.source == v))
        # the ccw face-tracing step is pb = pa - 1; its index structure in
        # Eq. (20) is the right-turn branch, fixing the handedness convention
        turn = "R" if (pa - 1) % len(ring) == pb else "L"
        ext = [(e, o) for e, o in ring if e not in (ea.index, eb.index)]
        joints.append((v, turn, a, b, ext[0][0], ext[0][1]))
        prev_v = v
    return alignments, joints


def apply_string_operator(G: FiniteGroup, lat, edge_path, s_labels,
                          omega: OmegaData, state: StateVector,
                          table: FSymbolTable | None = None) -> StateVector:
    """Eq.-20 string operator along a connected edge path.

    The path is closed when its first and last edge indices coincide (the
    repeat is dropped).  Each joint vertex contributes a turn-dependent
    F-symbol in its string type s_k (drawn from s_labels) together with the
    leg-reorder phases of the old and new colorings; each segment between
    consecutive joints contributes an Omega (turn pattern R,L), a conjugate
    Omega (L,R) weighted by v_i v_s / v_{i'}, or delta_{s_k s_{k+1}} times
    the identity otherwise.  The matrix product over segments is traced
    (open strings use the same closed-trace convention, with no matrix for
    the two end segments; experimental).
    """
    if table is None:
        table = f_symbols(G)
    F, dual, v = table.F, table.dual, table.v
    fus = fusion_data(G)
    closed = len(edge_path) > 1 and edge_path[0] == edge_path[-1]
    path = [int(e) for e in (edge_path[:-1] if closed else edge_path)]
    align, joints = _string_joints(lat, path, closed)
    s_labels = [int(s) for s in s_labels]
    nj = len(joints)
    # segments pair consecutive joints; their shared path edge is joints[k][3]
    seg_pairs = [(k, (k + 1) % nj) for k in range(nj)] if closed \
        else [(k, k + 1) for k in range(nj - 1)]
    out = StateVector("spin")
    for key, amp in state.amplitudes.items():
        lab = [_effective(key[e], al, dual) for e, al in zip(path, align)]
        ext = [_effective(key[ee], eo, dual)
               for _, _, _, _, ee, eo in joints]
        base = amp
        for (vv, _, a, b, ee, eo) in joints:
            base = base * _leg_reorder(G, lat, vv, ee, eo,
                                       path[a], align[a],
                                       path[b], align[b], key, dual)
        touching = [[] for _ in path]
        for jk, (vv, turn, a, b, ee, eo) in enumerate(joints):
            touching[a].append(jk)
            touching[b].append(jk)
        for stypes in itertools.product(s_labels, repeat=nj):
            # delta constraints from straight / same-turn segments
            if any(stypes[x] != stypes[y] for x, y in seg_pairs
                   if joints[x][1] == joints[y][1]):
                continue
            cands = []
            for k, i in enumerate(lab):
                allowed = set()
                for jk in touching[k]:
                    s = stypes[jk]
                    allowed |= {int(x) for x in
                                np.nonzero(fus.N[int(dual[i]),
                                                 int(dual[s])])[0]}
                    allowed |= {int(x) for x in
                                np.nonzero(fus.N[int(dual[i]), s])[0]}
                cands.append(sorted(allowed) if allowed else [i])
            for prim in itertools.product(*cands):
                coeff = base
                for jk, (vv, turn, a, b, ee, eo) in enumerate(joints):
                    s = stypes[jk]
                    if turn == "R":
                        coeff *= F[ext[jk], dual[lab[a]], lab[b],
                                   s, prim[b], dual[prim[a]]]
                    else:
                        coeff *= F[ext[jk], dual[lab[b]], lab[a],
                                   dual[s], prim[a], dual[prim[b]]]
                    if coeff == 0:
                        break
                if coeff == 0:
                    continue
                mat = np.eye(omega.size, dtype=complex)
                for x, y in seg_pairs:
                    tx, ty = joints[x][1], joints[y][1]
                    k = joints[x][3]      # path edge between joints x and y
                    if tx == ty:
                        continue          # delta already enforced above
                    w = v[lab[k]] * v[stypes[x]] / v[prim[k]]
                    om = omega.get(int(prim[k]), stypes[x], stypes[y],
                                   int(lab[k]))
                    if (tx, ty) == ("L", "R"):
                        om = np.conj(om)
                    mat = mat @ (w * om)
                coeff *= np.trace(mat)
                if abs(coeff) <= _PRUNE:
                    continue
                new = list(key)
                for e, al, l in zip(path, align, prim):
                    new[e] = int(l) if al else int(dual[l])
                new = tuple(new)
                back = coeff
                for (vv, _, a, b, ee, eo) in joints:
                    back = back * np.conj(
                        _leg_reorder(G, lat, vv, ee, eo, path[a], align[a],
                                     path[b], align[b], new, dual))
                out.add(new, back)
    return out.prune()
