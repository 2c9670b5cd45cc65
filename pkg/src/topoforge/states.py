"""State vectors in the group basis and the spin-network basis.

A graph coloring by group elements spans the Kitaev (group) basis; an
admissible coloring by irrep labels, contracted with intertwiners at the
vertices, gives a spin-network state.  fourier_overlap is the change of
basis between the two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (BudgetExceeded, NotAdmissible, NotGaugeInvariant,
                     ZeroState)
from .groups import FiniteGroup
from .reps import FusionData, fusion_data, intertwiner, irreps

_PRUNE = 1e-14
DEFAULT_BUDGET = 2 ** 21


@dataclass
class StateVector:
    """Sparse vector keyed by colorings (tuples, one entry per edge)."""

    basis: str                  # "group" or "spin"
    amplitudes: dict = field(default_factory=dict)

    def copy(self) -> "StateVector":
        return StateVector(self.basis, dict(self.amplitudes))

    def prune(self) -> "StateVector":
        self.amplitudes = {k: v for k, v in self.amplitudes.items()
                           if abs(v) > _PRUNE}
        return self

    def add(self, key, amp) -> None:
        self.amplitudes[key] = self.amplitudes.get(key, 0.0) + amp

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(v) ** 2
                                 for v in self.amplitudes.values())))

    def scale(self, c) -> "StateVector":
        return StateVector(self.basis,
                           {k: c * v for k, v in self.amplitudes.items()})

    def dot(self, other: "StateVector") -> complex:
        """<self|other> (conjugate-linear in self)."""
        if len(self.amplitudes) > len(other.amplitudes):
            return np.conj(other.dot(self))
        return complex(sum(np.conj(v) * other.amplitudes[k]
                           for k, v in self.amplitudes.items()
                           if k in other.amplitudes))

    def axpy(self, c, other: "StateVector") -> "StateVector":
        for k, v in other.amplitudes.items():
            self.add(k, c * v)
        return self


def vertex_labels(graph, v: int, coloring, dual) -> tuple:
    """Irrep labels at vertex v in slot order, dualized on incoming slots."""
    return tuple(coloring[e] if out else int(dual[coloring[e]])
                 for e, out in graph.vertex_slots[v])


def check_vertex(graph, fus: FusionData, coloring, v: int) -> bool:
    i, j, k = vertex_labels(graph, v, coloring, fus.dual)
    return bool(fus.N[i, j, k])


def is_admissible(graph, fus: FusionData, coloring) -> bool:
    return all(check_vertex(graph, fus, coloring, v)
               for v in range(graph.n_vertices))


def admissible_colorings(graph, fus: FusionData):
    """All admissible irrep colorings, in lexicographic order."""
    R = fus.n_labels
    E = graph.n_edges
    # incremental pruning: check a vertex as soon as all its edges are set
    vertex_ready = []
    for v in range(graph.n_vertices):
        vertex_ready.append(max(e for e, _ in graph.vertex_slots[v]))
    by_depth = [[] for _ in range(E)]
    for v, d in enumerate(vertex_ready):
        by_depth[d].append(v)
    out = []

    def rec(prefix):
        d = len(prefix) - 1
        for v in by_depth[d]:
            if not check_vertex(graph, fus, prefix, v):
                return
        if len(prefix) == E:
            out.append(tuple(prefix))
            return
        for c in range(R):
            prefix.append(c)
            rec(prefix)
            prefix.pop()

    for c in range(R):
        rec([c])
    return out


def _vertex_tensor(G: FiniteGroup, graph, v: int, coloring, fus: FusionData):
    """Invariant tensor placed at vertex v for a spin-network coloring.

    Legs follow the vertex_slots order; out-edges contribute their plain
    label and in-edges the dual label.
    """
    labels = vertex_labels(graph, v, coloring, fus.dual)
    return intertwiner(G, *labels).tensor


def amplitude(G: FiniteGroup, graph, j_coloring, g_coloring) -> complex:
    """Unnormalized group-basis amplitude of a spin-network coloring.

    Product over edges of D^{j_e}(g_e); the column index of D(g_e) is
    contracted into the source vertex's intertwiner (plain labels) and the
    row index into the target vertex's intertwiner (dual labels).  With the
    gauge convention g_e -> h g_e on in-edges and g_e -> g_e h^(-1) on
    out-edges this makes the amplitude gauge invariant.
    """
    fus = fusion_data(G)
    reps = irreps(G)
    # per-edge matrices
    mats = [reps[j_coloring[e.index]].matrices[g_coloring[e.index]]
            for e in graph.edges]
    # contract vertex by vertex with an explicit einsum
    operands = []
    subs = []
    next_idx = 0
    edge_row = {}
    edge_col = {}
    for e in graph.edges:
        edge_row[e.index] = next_idx
        edge_col[e.index] = next_idx + 1
        operands.append(mats[e.index])
        subs.append([next_idx, next_idx + 1])
        next_idx += 2
    for v in range(graph.n_vertices):
        t = _vertex_tensor(G, graph, v, j_coloring, fus)
        idxs = [edge_col[e] if out else edge_row[e]
                for e, out in graph.vertex_slots[v]]
        operands.append(t)
        subs.append(idxs)
    args = []
    for op, sub in zip(operands, subs):
        args.extend((op, sub))
    args.append([])
    return complex(np.einsum(*args))


def _spanning_tree(graph):
    """(tree edge set, parent map) of the graph's 1-skeleton, rooted at 0."""
    adj = [[] for _ in range(graph.n_vertices)]
    for e in graph.edges:
        adj[e.source].append((e.index, e.target, True))
        adj[e.target].append((e.index, e.source, False))
    seen = {0}
    tree = []
    order = [0]
    stack = [0]
    while stack:
        v = stack.pop()
        for ei, w, fwd in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.append((ei, v, w, fwd))
                order.append(w)
                stack.append(w)
    return tree


def _gauge_fixed_colorings(G: FiniteGroup, graph):
    """Group colorings with tree edges set to the identity.

    Every gauge orbit of colorings contains exactly |G|^(V-1) elements and
    each orbit meets the tree-fixed set in a constant number of points, so
    sums of gauge-invariant functions reduce to this set times |G|^(V-1).
    """
    tree = _spanning_tree(graph)
    tree_edges = {t[0] for t in tree}
    free = [e.index for e in graph.edges if e.index not in tree_edges]
    n = G.order
    for combo in itertools.product(range(n), repeat=len(free)):
        g = [0] * graph.n_edges
        for e, val in zip(free, combo):
            g[e] = val
        yield tuple(g)


def spin_state_norm(G: FiniteGroup, graph, j_coloring) -> float:
    """Group-basis norm of the unnormalized spin-network state.

    |amplitude|^2 is gauge invariant, so the sum over all |G|^E colorings
    reduces to the tree-gauge-fixed set times |G|^(V-1).
    """
    total = 0.0
    for g in _gauge_fixed_colorings(G, graph):
        total += abs(amplitude(G, graph, j_coloring, g)) ** 2
    total *= float(G.order) ** (graph.n_vertices - 1)
    if total < _PRUNE:
        raise ZeroState(f"spin-network state {j_coloring} has zero norm")
    return float(np.sqrt(total))


def fourier_overlap(G: FiniteGroup, graph, j_coloring, g_coloring) -> complex:
    """<g|S_j>: normalized spin-network amplitude in the group basis."""
    fus = fusion_data(G)
    if not is_admissible(graph, fus, j_coloring):
        raise NotAdmissible(f"coloring {tuple(j_coloring)} is inadmissible")
    return amplitude(G, graph, j_coloring, g_coloring) / \
        spin_state_norm(G, graph, j_coloring)


_expansion_cache: dict = {}


def spin_state_group_expansion(G: FiniteGroup, graph, j_coloring,
                               budget: int = DEFAULT_BUDGET) -> StateVector:
    """The normalized spin-network state as a group-basis StateVector.

    One einsum with the group element of every edge as an output index
    produces all |G|^E amplitudes at once.
    """
    n = G.order
    E = graph.n_edges
    if n ** E > budget:
        raise BudgetExceeded(f"|G|^E = {n}**{E} exceeds budget {budget}")
    key = (G.name, id(graph), tuple(j_coloring))
    if key in _expansion_cache:
        return _expansion_cache[key].copy()
    fus = fusion_data(G)
    if not is_admissible(graph, fus, j_coloring):
        raise NotAdmissible(f"coloring {tuple(j_coloring)} is inadmissible")
    reps = irreps(G)
    operands = []
    subs = []
    next_idx = E  # indices 0..E-1 are the per-edge group indices
    edge_row = {}
    edge_col = {}
    for e in graph.edges:
        edge_row[e.index] = next_idx
        edge_col[e.index] = next_idx + 1
        operands.append(reps[j_coloring[e.index]].matrices)  # (n, d, d)
        subs.append([e.index, next_idx, next_idx + 1])
        next_idx += 2
    for v in range(graph.n_vertices):
        t = _vertex_tensor(G, graph, v, j_coloring, fus)
        subs.append([edge_col[e] if out else edge_row[e]
                     for e, out in graph.vertex_slots[v]])
        operands.append(t)
    args = []
    for op, sub in zip(operands, subs):
        args.extend((op, sub))
    args.append(list(range(E)))
    psi = np.einsum(*args, optimize=True)
    st = StateVector("group")
    flat = psi.reshape(-1)
    mask = np.abs(flat) > _PRUNE
    for lin in np.nonzero(mask)[0]:
        g = tuple(int(x) for x in np.unravel_index(lin, psi.shape))
        st.amplitudes[g] = complex(flat[lin])
    nrm = st.norm()
    if nrm < _PRUNE:
        raise ZeroState(f"spin-network state {j_coloring} has zero norm")
    st = st.scale(1.0 / nrm)
    _expansion_cache[key] = st
    return st.copy()


def _check_gauge_invariant(G, graph, state, tol=1e-10):
    from .kitaev import apply_electric_A  # local import to avoid a cycle
    for v in range(graph.n_vertices):
        proj = apply_electric_A(G, graph, v, state)
        diff = proj.copy().axpy(-1.0, state)
        if diff.norm() > tol * max(1.0, state.norm()):
            raise NotGaugeInvariant(f"state not invariant at vertex {v}")


def to_spin_basis(G: FiniteGroup, graph, state: StateVector,
                  budget: int = DEFAULT_BUDGET) -> StateVector:
    """Expand a gauge-invariant group-basis state over spin-network states."""
    if state.basis != "group":
        raise ValueError("to_spin_basis expects a group-basis state")
    _check_gauge_invariant(G, graph, state)
    fus = fusion_data(G)
    out = StateVector("spin")
    for j in admissible_colorings(graph, fus):
        sv = spin_state_group_expansion(G, graph, j, budget=budget)
        c = sv.dot(state)
        if abs(c) > _PRUNE:
            out.amplitudes[j] = c
    return out


def to_group_basis(G: FiniteGroup, graph, state: StateVector,
                   budget: int = DEFAULT_BUDGET) -> StateVector:
    if state.basis != "spin":
        raise ValueError("to_group_basis expects a spin-basis state")
    out = StateVector("group")
    for j, c in state.amplitudes.items():
        sv = spin_state_group_expansion(G, graph, j, budget=budget)
        out.axpy(c, sv)
    return out.prune()
