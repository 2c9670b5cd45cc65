"""Quantum-double operators in the group basis.

L operators permute edge colors, the electric A(v) is the group average of
local gauge transformations, the magnetic B_g(p) is diagonal on plaquette
holonomy.  Ground-space dimension is the exact trace of the commuting
projector P = prod_v A(v) prod_p B_1(p).
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import BudgetExceeded, NotIncident, ZeroState
from .groups import FiniteGroup
from .states import StateVector, DEFAULT_BUDGET


def _edge_action(G: FiniteGroup, g: int, edge, vertex: int):
    """Color map for L^g acting at (edge, vertex)."""
    if vertex == edge.target:      # edge points toward v: left multiply
        return lambda c: int(G.mult[g, c])
    if vertex == edge.source:      # edge points away: right multiply by g^-1
        ginv = int(G.inv[g])
        return lambda c: int(G.mult[c, ginv])
    raise NotIncident(f"vertex {vertex} not an endpoint of edge {edge.index}")


def apply_L(G: FiniteGroup, graph, g: int, edge_index: int, vertex: int,
            state: StateVector) -> StateVector:
    edge = graph.edges[edge_index]
    act = _edge_action(G, g, edge, vertex)
    out = StateVector("group")
    for key, amp in state.amplitudes.items():
        new = list(key)
        new[edge_index] = act(key[edge_index])
        out.add(tuple(new), amp)
    return out


def _gauge_at_vertex(G: FiniteGroup, graph, g: int, v: int, key):
    new = list(key)
    for ei, out in graph.vertex_slots[v]:
        edge = graph.edges[ei]
        if out:
            new[ei] = int(G.mult[key[ei], G.inv[g]])
        else:
            new[ei] = int(G.mult[g, key[ei]])
    return tuple(new)


def apply_electric_A(G: FiniteGroup, graph, v: int,
                     state: StateVector) -> StateVector:
    """A(v) = (1/|G|) sum_g prod_{edges at v} L^g(e, v)."""
    out = StateVector("group")
    w = 1.0 / G.order
    for key, amp in state.amplitudes.items():
        for g in range(G.order):
            out.add(_gauge_at_vertex(G, graph, g, v, key), w * amp)
    return out.prune()


def holonomy(G: FiniteGroup, lat, p: int, key) -> int:
    """Oriented boundary product of plaquette p, ccw from the base site.

    Colors on slots traversed against the stored edge orientation enter
    inverted.  Successive transport factors compose on the left (matrix
    convention: the transport for a path e1 then e2 is g_2 g_1), which is
    what makes the holonomy conjugation-covariant under vertex gauge
    transformations g_e -> a_t g_e a_s^{-1}.
    """
    acc = 0
    for ei, forward in lat.plaquettes[p].walk:
        h = key[ei] if forward else int(G.inv[key[ei]])
        acc = int(G.mult[h, acc])
    return acc


def apply_magnetic_B(G: FiniteGroup, lat, g: int, p: int,
                     state: StateVector) -> StateVector:
    """Diagonal projector onto holonomy(p) = g (Eq.-19 flatness for g=1)."""
    out = StateVector("group")
    for key, amp in state.amplitudes.items():
        if holonomy(G, lat, p, key) == g:
            out.amplitudes[key] = amp
    return out


def _all_colorings_array(G: FiniteGroup, E: int) -> np.ndarray:
    n = G.order
    idx = np.arange(n ** E, dtype=np.int64)
    cols = np.empty((n ** E, E), dtype=np.int8)
    for e in range(E):
        cols[:, E - 1 - e] = (idx // n ** e) % n
    return cols


def ground_space_dimension(G: FiniteGroup, lat,
                           budget: int = DEFAULT_BUDGET) -> int:
    """tr prod_v A(v) prod_p B_1(p), evaluated exactly.

    The diagonal part restricts to flat colorings; the A-product contributes
    |Stab(g)| / |G|^V per flat coloring g, where the stabilizer consists of
    gauge transformations fixing g (propagated from the root vertex).
    """
    n = G.order
    E, V = lat.n_edges, lat.n_vertices
    if n ** E > budget:
        raise BudgetExceeded(f"|G|^E = {n}**{E} exceeds budget {budget}")
    cols = _all_colorings_array(G, E)
    mult = G.mult
    inv = G.inv

    # flatness filter
    flat = np.ones(len(cols), dtype=bool)
    for p in range(lat.n_plaquettes):
        acc = np.zeros(len(cols), dtype=np.int64)
        for ei, forward in lat.plaquettes[p].walk:
            h = cols[:, ei].astype(np.int64)
            if not forward:
                h = inv[h]
            acc = mult[h, acc]
        flat &= acc == 0
    cols = cols[flat]

    # stabilizer count per flat coloring: fix k at vertex 0, propagate
    # h_target = g h_source g^{-1} along a spanning tree, check all edges
    from .states import _spanning_tree
    tree = _spanning_tree(lat)
    stab = np.zeros(len(cols), dtype=np.int64)
    for k in range(n):
        h = np.full((len(cols), V), -1, dtype=np.int64)
        h[:, 0] = k
        for ei, vpar, vchild, fwd in tree:
            g = cols[:, ei].astype(np.int64)
            if fwd:    # edge vpar -> vchild: h_child = g^-1 h_par g... no:
                # h_tgt g h_src^{-1} = g  =>  h_tgt = g h_src g^{-1}
                h[:, vchild] = mult[mult[g, h[:, vpar]], inv[g]]
            else:      # edge vchild -> vpar: h_par = g h_child g^{-1}
                h[:, vchild] = mult[mult[inv[g], h[:, vpar]], g]
        ok = np.ones(len(cols), dtype=bool)
        for e in lat.edges:
            g = cols[:, e.index].astype(np.int64)
            lhs = mult[mult[h[:, e.target], g],
                       inv[h[:, e.source]]]
            ok &= lhs == g
        stab += ok
    total = stab.sum() / float(n) ** V
    dim = round(float(total))
    if abs(total - dim) > 1e-6:
        raise ZeroState(f"projector trace {total} is not integer-close")
    return dim


def ground_state(G: FiniteGroup, lat) -> StateVector:
    """P|identity coloring>, normalized (one toric-sector ground state).

    The identity coloring is flat, so applying every A(v) to it lands in
    the image of the full commuting projector.
    """
    key = tuple([G.identity] * lat.n_edges)
    st = StateVector("group", {key: 1.0})
    for v in range(lat.n_vertices):
        st = apply_electric_A(G, lat, v, st)
    nrm = st.norm()
    if nrm < 1e-14:
        raise ZeroState("projected seed state vanished")
    return st.scale(1.0 / nrm)


def excitation_sites(G: FiniteGroup, graph, lat, state: StateVector,
                     tol: float = 1e-9):
    """Vertices with <A(v)> < 1 and plaquettes with <B_1(p)> < 1."""
    nrm2 = state.norm() ** 2
    if nrm2 < 1e-28:
        raise ZeroState("cannot locate excitations of the zero state")
    bad_vertices = []
    for v in range(graph.n_vertices):
        val = state.dot(apply_electric_A(G, graph, v, state)).real / nrm2
        if val < 1.0 - tol:
            bad_vertices.append((v, float(val)))
    bad_plaquettes = []
    for p in range(lat.n_plaquettes):
        val = state.dot(apply_magnetic_B(G, lat, 0, p, state)).real / nrm2
        if val < 1.0 - tol:
            bad_plaquettes.append((p, float(val)))
    return {"vertices": bad_vertices, "plaquettes": bad_plaquettes}
