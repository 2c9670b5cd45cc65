import pytest

from topoforge.errors import InvalidParameter, NotAPath
from topoforge.lattice import (dual_triangulation, honeycomb_torus,
                               plaquette_boundary, plaquette_dual_ribbon,
                               ribbon_strip, theta_graph)


@pytest.mark.parametrize("l1,l2", [(2, 2), (2, 3), (3, 3)])
def test_torus_counts(l1, l2):
    lat = honeycomb_torus(l1, l2)
    n = l1 * l2
    assert lat.n_vertices == 2 * n
    assert lat.n_edges == 3 * n
    assert lat.n_plaquettes == n
    # Euler characteristic of the torus
    assert lat.n_vertices - lat.n_edges + lat.n_plaquettes == 0


def test_vertex_valence(torus22):
    for slots in torus22.vertex_slots:
        assert len(slots) == 3
    # every edge appears in exactly two vertex stars, once per end
    seen = {}
    for v, slots in enumerate(torus22.vertex_slots):
        for ei, out in slots:
            seen.setdefault(ei, []).append((v, out))
    for ei, ends in seen.items():
        assert len(ends) == 2
        e = torus22.edges[ei]
        assert {v for v, _ in ends} <= {e.source, e.target}
        assert sorted(out for _, out in ends) == [False, True]


def test_plaquette_walks(torus22):
    for p in range(torus22.n_plaquettes):
        walk = plaquette_boundary(torus22, p)
        assert len(walk) == 6
        verts = torus22.plaquette_vertices(p)
        assert len(set(verts)) == 6
    # each edge borders exactly two plaquettes
    count = [0] * torus22.n_edges
    for p in range(torus22.n_plaquettes):
        for ei, _ in plaquette_boundary(torus22, p):
            count[ei] += 1
    assert all(c == 2 for c in count)


def test_edge_plaquettes_consistent(torus22):
    for ei, (l, r) in enumerate(torus22.edge_plaquettes):
        walked = [p for p in range(torus22.n_plaquettes)
                  if ei in [e for e, _ in plaquette_boundary(torus22, p)]]
        assert sorted(walked) == sorted({l, r})


def test_dual_triangulation(torus22):
    dg = dual_triangulation(torus22)
    assert len(dg.triangles) == torus22.n_vertices
    for tri, cor in zip(dg.triangles, dg.corners):
        assert len(tri) == 3 and len(cor) == 3
        for i, ei in enumerate(tri):
            # the corner opposite a dual edge avoids that edge's plaquettes
            assert cor[i] in range(torus22.n_plaquettes)


def test_ribbon_strip_and_closed(torus22):
    rib = plaquette_dual_ribbon(torus22, 0)
    assert len(rib.triangles) == 6
    assert rib.closed
    assert all(t.kind == "dual" for t in rib.triangles)


def test_ribbon_strip_rejects_nonadjacent(torus22):
    v0 = torus22.plaquette_vertices(0)[0]
    with pytest.raises(NotAPath):
        ribbon_strip(torus22, [(0, v0)])
    with pytest.raises(NotAPath):
        ribbon_strip(torus22, [(0, v0), (0, v0)])


def test_invalid_torus():
    with pytest.raises(InvalidParameter):
        honeycomb_torus(0, 2)


def test_theta_graph():
    th = theta_graph()
    assert th.n_vertices == 2 and th.n_edges == 3
    for slots in th.vertex_slots:
        assert len(slots) == 3
