import importlib.resources as resources

import numpy as np
import pytest

from topoforge import tv
from topoforge.errors import (GluingInconsistent, HasBoundary,
                              InadmissibleBoundary, BudgetExceeded,
                              InvalidParameter, NonManifoldEdge, ParseError)
from topoforge.lattice import honeycomb_torus

BUNDLED = ("sphere_d4.tri", "sphere_2t.tri", "s2xs1.tri", "rp3.tri")

# [DERIVED] Dijkgraaf-Witten oracles: Z(S^3) = 1/|G|; Z(S^2 x S^1) = 1;
# Z(RP^3) = #{g : g^2 = e}/|G|
DW_GOLDEN = {
    ("sphere_d4.tri", "Z2"): 0.5, ("sphere_d4.tri", "Z3"): 1 / 3,
    ("sphere_d4.tri", "Z4"): 0.25, ("sphere_d4.tri", "S3"): 1 / 6,
    ("sphere_d4.tri", "D4"): 0.125,
    ("sphere_2t.tri", "Z2"): 0.5, ("sphere_2t.tri", "Z3"): 1 / 3,
    ("sphere_2t.tri", "Z4"): 0.25, ("sphere_2t.tri", "S3"): 1 / 6,
    ("sphere_2t.tri", "D4"): 0.125,
    ("s2xs1.tri", "Z2"): 1.0, ("s2xs1.tri", "Z3"): 1.0,
    ("s2xs1.tri", "Z4"): 1.0, ("s2xs1.tri", "S3"): 1.0,
    ("s2xs1.tri", "D4"): 1.0,
    ("rp3.tri", "Z2"): 1.0, ("rp3.tri", "Z3"): 1 / 3,
    ("rp3.tri", "Z4"): 0.5, ("rp3.tri", "S3"): 2 / 3,
    ("rp3.tri", "D4"): 0.75,
}


def load_bundled(name):
    text = (resources.files("topoforge") / "data" / name).read_text()
    return tv.parse_complex(text)


# ---------------------------------------------------------------- parsing

def test_parse_round_trip():
    for name in BUNDLED:
        cx = load_bundled(name)
        again = tv.parse_complex(tv.format_complex(cx, comment="round trip"))
        assert again == cx


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        tv.parse_complex("tetrahedra 1\ntet 0 junk - - -\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        tv.parse_complex("tetrahedra 2\ntet 0 - - - -\n")   # missing tet 1
    with pytest.raises(ParseError):
        tv.parse_complex("tet 0 - - - -\n")                 # missing header
    with pytest.raises(ParseError):
        tv.parse_complex("tetrahedra 1\ntet 0 - - - -\ntet 0 - - - -\n")


def test_self_glued_face_rejected():
    with pytest.raises(GluingInconsistent):
        tv.build_complex([[(0, (0, 1, 2, 3)), None, None, None]])


def test_non_involutive_gluing_rejected():
    with pytest.raises(GluingInconsistent):
        tv.build_complex([[(1, (0, 1, 2, 3))] * 4,
                          [(0, (1, 0, 2, 3))] * 4])


def test_reversed_edge_rejected():
    # gluing face 0 to face 1 of the same tet with a vertex swap that
    # reverses the shared edge (2,3)
    with pytest.raises((NonManifoldEdge, GluingInconsistent)):
        tv.build_complex([[(0, (1, 0, 3, 2)), (0, (1, 0, 3, 2)),
                           None, None]])


# ------------------------------------------------------------- structure

def test_single_tet_counts():
    cx = tv.build_complex([[None, None, None, None]])
    assert cx.n_tets == 1
    assert cx.n_edge_classes == 6 and cx.n_vertex_classes == 4
    assert len(cx.boundary_faces) == 4
    assert not cx.is_closed
    assert cx.interior_edge_classes() == ()


def test_sphere_d4_class_counts():
    cx = load_bundled("sphere_d4.tri")
    assert cx.n_tets == 5
    assert cx.n_edge_classes == 10
    assert cx.n_vertex_classes == 5
    assert cx.is_closed
    assert tv.orientable(cx)
    for c in range(cx.n_vertex_classes):
        assert tv.vertex_link_euler(cx, c) == 2


def test_bundled_are_manifold_like():
    for name in BUNDLED:
        cx = load_bundled(name)
        chi = (cx.n_vertex_classes - cx.n_edge_classes
               + cx.n_face_classes - cx.n_tets)
        assert chi == 0
        assert tv.orientable(cx)
        for c in range(cx.n_vertex_classes):
            assert tv.vertex_link_euler(cx, c) == 2


def test_union_find_sign_through_long_paths():
    # regression: the returned sign must belong to the queried element,
    # not to the node nearest the root
    uf = tv._UnionFind(6)
    uf.union(0, 1, -1)
    uf.union(1, 2, -1)
    uf.union(2, 3, -1)
    uf.union(4, 5, 1)
    uf.union(3, 4, -1)
    root0, s0 = uf.find(0)
    root5, s5 = uf.find(5)
    assert root0 == root5
    # 0 = -1, 1 = -2, ... relative signs: s(0)/s(5) = (-1)^4 = +1... chain:
    # s0 = -s1 = +s2 = -s3 = +s4 = +s5
    assert s0 == s5
    assert uf.union(0, 5, 1)
    assert not uf.union(0, 5, -1)


# ----------------------------------------------------------- state sums

@pytest.mark.parametrize("name", BUNDLED)
@pytest.mark.parametrize("gname", ["Z2", "Z3", "Z4", "S3", "D4"])
def test_tv_equals_dw_and_goldens(name, gname, groups, tables):
    cx = load_bundled(name)
    dw = tv.dw_value(cx, groups[gname])
    z = tv.tv_closed(cx, tables[gname]).value
    assert abs(dw - DW_GOLDEN[(name, gname)]) < 1e-12
    assert abs(z - dw) < 1e-9


@pytest.mark.parametrize("gname", ["Z2", "Z3", "Z4", "S3", "D4"])
def test_two_spheres_agree(gname, tables):
    a = tv.tv_closed(load_bundled("sphere_d4.tri"), tables[gname]).value
    b = tv.tv_closed(load_bundled("sphere_2t.tri"), tables[gname]).value
    assert abs(a - b) < 1e-8


def test_tv_closed_rejects_boundary(tables):
    cx = tv.build_complex([[None, None, None, None]])
    with pytest.raises(HasBoundary):
        tv.tv_closed(cx, tables["Z2"])


def test_budget_exceeded(tables):
    cx = load_bundled("sphere_d4.tri")
    with pytest.raises(BudgetExceeded):
        tv.tv_closed(cx, tables["D4"], budget=10)


def test_single_tet_boundary_value(tables):
    # all-boundary single tetrahedron: one product term, no interior sum
    cx = tv.build_complex([[None, None, None, None]])
    boundary = {c: 0 for c in range(cx.n_edge_classes)}
    val = tv.tv_boundary(cx, tables["Z2"], boundary)
    assert val.terms == 1
    # weight: S(0,...,0) * d^(-#bdry verts / 2) * prod sqrt(d_0) = 1/4
    assert abs(val.value - 0.25) < 1e-12


def test_boundary_admissibility_enforced(tables):
    cx = tv.build_complex([[None, None, None, None]])
    boundary = {c: 0 for c in range(cx.n_edge_classes)}
    boundary[0] = 1   # a single odd label cannot close a Z2 triangle
    with pytest.raises(InadmissibleBoundary):
        tv.tv_boundary(cx, tables["Z2"], boundary)


def test_color_lines_round_trip(tables):
    cx0 = tv.build_complex([[None, None, None, None]],
                           colors=(((0, (0, 1)), 1),))
    text = tv.format_complex(cx0)
    cx = tv.parse_complex(text)
    assert cx.colors == cx0.colors
    resolved = tv.boundary_coloring_from_colors(cx)
    assert set(resolved) == {cx.edge_class[0][0]}


# -------------------------------------------------------------- cylinder

def test_cylinder_structure(torus22, tables):
    order = tuple(range(torus22.n_plaquettes))
    cx = tv.build_cylinder_complex(torus22, order)
    assert cx.n_tets == 24
    assert len(cx.boundary_faces) == 16
    assert len(cx.meta["bottom"]) == torus22.n_edges
    assert len(cx.meta["top"]) == torus22.n_edges
    assert not cx.is_closed


def test_cylinder_rejects_bad_order(torus22):
    with pytest.raises(InvalidParameter):
        tv.build_cylinder_complex(torus22, (0, 0, 1, 2))


def test_cylinder_order_independent_amplitude(torus22, groups, tables):
    # tv amplitudes agree between the two plaquette orders (section 3.1:
    # the B_p commute, and so must the cylinder that represents them)
    G = groups["Z2"]
    table = tables["Z2"]
    from topoforge.reps import fusion_data
    from topoforge.states import admissible_colorings
    fus = fusion_data(G)
    cols = admissible_colorings(torus22, fus)
    cxa = tv.build_cylinder_complex(torus22, tuple(range(4)))
    cxb = tv.build_cylinder_complex(torus22, (3, 2, 1, 0))
    for (bot, top) in [(cols[0], cols[0]), (cols[1], cols[5]),
                       (cols[7], cols[2])]:
        va = tv.tv_boundary(cxa, table,
                            tv.cylinder_boundary_coloring(cxa, table,
                                                          bot, top)).value
        vb = tv.tv_boundary(cxb, table,
                            tv.cylinder_boundary_coloring(cxb, table,
                                                          bot, top)).value
        assert abs(va - vb) < 1e-9
