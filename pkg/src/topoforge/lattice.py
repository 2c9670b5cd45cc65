"""Oriented honeycomb lattices on the torus and their dual triangulations.

Vertices come in two sublattices A and B; every edge is oriented A -> B.
Plaquettes (hexagons) are recovered from the rotation system induced by a
planar drawing of the unit cell, so boundary walks are genuinely
counterclockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidParameter, NotAPath

# Unit-cell geometry used only to order edge slots around each vertex.
# A sits at the cell origin, B one bond up-right; the three bond vectors
# out of A point to B in cells (0,0), (0,-1), (1,-1).
_U1 = (math.sqrt(3.0), 0.0)
_U2 = (math.sqrt(3.0) / 2.0, 1.5)
_DELTA = (math.sqrt(3.0) / 2.0, 0.5)


@dataclass(frozen=True)
class Edge:
    index: int
    source: int  # A-sublattice vertex
    target: int  # B-sublattice vertex


@dataclass(frozen=True)
class Plaquette:
    index: int
    walk: tuple  # 6 slots (edge index, direction flag), ccw from base site
    base_vertex: int


@dataclass(frozen=True)
class HoneycombLattice:
    L1: int
    L2: int
    n_vertices: int
    n_edges: int
    edges: tuple            # Edge, indexed
    vertex_slots: tuple     # per vertex: ccw tuple of (edge index, out flag)
    plaquettes: tuple       # Plaquette, indexed
    edge_plaquettes: tuple  # per edge: (left plaquette, right plaquette)

    @property
    def n_plaquettes(self) -> int:
        return len(self.plaquettes)

    def plaquette_vertices(self, p: int) -> tuple:
        """Vertices of plaquette p in walk order (starting at the base)."""
        verts = []
        for e, forward in self.plaquettes[p].walk:
            edge = self.edges[e]
            verts.append(edge.source if forward else edge.target)
        return tuple(verts)


def _a_index(x: int, y: int, L1: int, L2: int) -> int:
    return 2 * ((x % L1) * L2 + (y % L2))


def _b_index(x: int, y: int, L1: int, L2: int) -> int:
    return _a_index(x, y, L1, L2) + 1


def _edge_index(x: int, y: int, t: int, L1: int, L2: int) -> int:
    return 3 * ((x % L1) * L2 + (y % L2)) + t


def _angle(vec) -> float:
    return math.atan2(vec[1], vec[0])


def honeycomb_torus(L1: int, L2: int) -> HoneycombLattice:
    """Build the oriented honeycomb lattice on an L1 x L2 torus."""
    if L1 < 2 or L2 < 2:
        raise InvalidParameter(f"torus dimensions must be >= 2, got "
                               f"({L1},{L2})")
    V = 2 * L1 * L2
    E = 3 * L1 * L2

    edges = []
    for x in range(L1):
        for y in range(L2):
            a = _a_index(x, y, L1, L2)
            for t, (bx, by) in enumerate(((x, y), (x, y - 1), (x + 1, y - 1))):
                edges.append(Edge(index=_edge_index(x, y, t, L1, L2),
                                  source=a, target=_b_index(bx, by, L1, L2)))
    edges.sort(key=lambda e: e.index)
    edges = tuple(edges)

    # Bond vectors of the three edge types, as drawn from A.
    bond = []
    for t, (cx, cy) in enumerate(((0, 0), (0, -1), (1, -1))):
        vec = (cx * _U1[0] + cy * _U2[0] + _DELTA[0],
               cx * _U1[1] + cy * _U2[1] + _DELTA[1])
        bond.append(vec)

    # Rotation system: edge slots in ccw angular order around each vertex.
    slots = [[] for _ in range(V)]
    for e in edges:
        t = e.index % 3
        slots[e.source].append((_angle(bond[t]), e.index, True))
        slots[e.target].append((_angle((-bond[t][0], -bond[t][1])),
                                e.index, False))
    vertex_slots = tuple(tuple((ei, out) for _, ei, out in sorted(s))
                         for s in slots)

    # Face tracing.  For a ccw rotation system, following each directed edge
    # and turning to the next slot clockwise from the reversed edge walks the
    # boundary of a face counterclockwise.
    def next_dart(edge_idx, forward):
        e = edges[edge_idx]
        v = e.target if forward else e.source
        ring = vertex_slots[v]
        pos = ring.index((edge_idx, not forward))
        nxt_edge, nxt_out = ring[(pos - 1) % len(ring)]
        return nxt_edge, nxt_out

    seen = set()
    faces = []
    for e in edges:
        for forward in (True, False):
            if (e.index, forward) in seen:
                continue
            walk = []
            cur = (e.index, forward)
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                cur = next_dart(*cur)
            if cur != (e.index, forward):
                raise InvalidParameter("face tracing failed to close")
            faces.append(tuple(walk))
    if len(faces) != L1 * L2 or any(len(f) != 6 for f in faces):
        raise InvalidParameter("rotation system did not yield hexagon faces")

    plaquettes = []
    for wk in faces:
        verts = []
        for ei, forward in wk:
            ed = edges[ei]
            verts.append(ed.source if forward else ed.target)
        base_pos = verts.index(min(verts))
        rotated = wk[base_pos:] + wk[:base_pos]
        plaquettes.append((min(verts), rotated))
    plaquettes.sort()
    plaqs = tuple(Plaquette(index=i, walk=wk, base_vertex=bv)
                  for i, (bv, wk) in enumerate(plaquettes))

    # A ccw face walk keeps the face on the left of each traversed dart.
    left = [None] * E
    right = [None] * E
    for p in plaqs:
        for ei, forward in p.walk:
            if forward:
                left[ei] = p.index
            else:
                right[ei] = p.index
    if any(l is None or r is None for l, r in zip(left, right)):
        raise InvalidParameter("plaquette walks do not cover all darts")
    edge_plaquettes = tuple(zip(left, right))

    return HoneycombLattice(L1=L1, L2=L2, n_vertices=V, n_edges=E,
                            edges=edges, vertex_slots=vertex_slots,
                            plaquettes=plaqs,
                            edge_plaquettes=edge_plaquettes)


def plaquette_boundary(lat: HoneycombLattice, p: int):
    """The ccw boundary walk of plaquette p, starting at its base site."""
    return lat.plaquettes[p].walk


@dataclass(frozen=True)
class DualGraph:
    """Dual triangulation: one triangle per honeycomb vertex.

    Dual edges are in bijection with primal edges; triangle corners are the
    plaquettes around the primal vertex.
    """

    triangles: tuple   # per primal vertex: tuple of 3 primal-edge indices
    corners: tuple     # per primal vertex: tuple of 3 plaquette indices,
                       # corners[i] is opposite edge triangles[i]
    edge_endpoints: tuple  # per primal edge: the 2 plaquettes it separates


def dual_triangulation(lat: HoneycombLattice) -> DualGraph:
    triangles = []
    corners = []
    for v in range(lat.n_vertices):
        tri = tuple(ei for ei, _ in lat.vertex_slots[v])
        # corner opposite a dual edge e: the plaquette across from e,
        # i.e. the plaquette shared by the other two edges at v
        plqs = []
        for ei, out in lat.vertex_slots[v]:
            l, r = lat.edge_plaquettes[ei]
            plqs.append((l, r) if out else (r, l))
        corner = []
        for i in range(3):
            other = [set(plqs[j]) for j in range(3) if j != i]
            shared = other[0] & other[1]
            shared -= set(plqs[i])
            if len(shared) != 1:
                # all three plaquettes distinct around a vertex on L >= 2
                shared = (other[0] & other[1])
            corner.append(shared.pop())
        triangles.append(tri)
        corners.append(tuple(corner))
    return DualGraph(triangles=tuple(triangles), corners=tuple(corners),
                     edge_endpoints=lat.edge_plaquettes)


@dataclass(frozen=True)
class Triangle:
    kind: str    # "direct" or "dual"
    edge: int
    anchor: int  # vertex index for direct, plaquette index for dual
    start: tuple  # site (plaquette, vertex)
    end: tuple


@dataclass(frozen=True)
class RibbonStrip:
    triangles: tuple
    start_site: tuple
    end_site: tuple

    @property
    def closed(self) -> bool:
        return self.start_site == self.end_site and len(self.triangles) > 0


def _connect_sites(lat: HoneycombLattice, s1, s2) -> Triangle:
    p1, v1 = s1
    p2, v2 = s2
    if p1 == p2 and v1 != v2:
        # dual triangle: advance along the boundary of the plaquette
        for ei, forward in lat.plaquettes[p1].walk:
            e = lat.edges[ei]
            if {e.source, e.target} == {v1, v2}:
                return Triangle(kind="dual", edge=ei, anchor=p1,
                                start=s1, end=s2)
        raise NotAPath(f"sites {s1} and {s2} share plaquette {p1} but no "
                       f"boundary edge connects their vertices")
    if v1 == v2 and p1 != p2:
        # direct triangle: hop across an edge at the fixed vertex
        for ei, out in lat.vertex_slots[v1]:
            l, r = lat.edge_plaquettes[ei]
            if {l, r} == {p1, p2}:
                return Triangle(kind="direct", edge=ei, anchor=v1,
                                start=s1, end=s2)
        raise NotAPath(f"sites {s1} and {s2} share vertex {v1} but no "
                       f"incident edge separates their plaquettes")
    raise NotAPath(f"sites {s1} and {s2} are not adjacent")


def _check_site(lat: HoneycombLattice, site) -> None:
    p, v = site
    if not (0 <= p < lat.n_plaquettes):
        raise NotAPath(f"no such plaquette {p}")
    if v not in lat.plaquette_vertices(p):
        raise NotAPath(f"vertex {v} is not on the boundary of plaquette {p}")


def ribbon_strip(lat: HoneycombLattice, sites) -> RibbonStrip:
    """Strip of elementary triangles visiting the given sites in order."""
    sites = [tuple(s) for s in sites]
    if len(sites) < 2:
        raise NotAPath("a ribbon strip needs at least two sites")
    for s in sites:
        _check_site(lat, s)
    tris = tuple(_connect_sites(lat, sites[i], sites[i + 1])
                 for i in range(len(sites) - 1))
    return RibbonStrip(triangles=tris, start_site=sites[0],
                       end_site=sites[-1])


def plaquette_dual_ribbon(lat: HoneycombLattice, p: int) -> RibbonStrip:
    """The closed strip of six dual triangles around plaquette p."""
    verts = lat.plaquette_vertices(p)
    sites = [(p, v) for v in verts] + [(p, verts[0])]
    return ribbon_strip(lat, sites)


@dataclass(frozen=True)
class ThetaGraph:
    """Two vertices joined by three parallel edges (all oriented 0 -> 1).

    Exposes the same fields states code relies on: edges and ccw vertex
    slots.  Used for desk-scale basis tests.
    """

    n_vertices: int = 2
    n_edges: int = 3
    edges: tuple = (Edge(0, 0, 1), Edge(1, 0, 1), Edge(2, 0, 1))
    vertex_slots: tuple = (((0, True), (1, True), (2, True)),
                           ((2, False), (1, False), (0, False)))


def theta_graph() -> ThetaGraph:
    return ThetaGraph()
