"""Command-line harness: table dumps, model checks, and state sums.

Every subcommand prints a report as deterministic ``key = value`` lines
(or one JSON object with ``--json``).  Exit codes: 0 pass, 1 check
failure, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import tv
from .errors import BudgetExceeded, InvalidParameter, TopoforgeError, ZeroResult
from .groups import build_group, commuting_pair_orbit_count, conjugacy_classes
from .kitaev import ground_space_dimension, ground_state
from .lattice import honeycomb_torus, ribbon_strip, theta_graph
from .reps import (f_symbols, fusion_data, irreps, verify_pentagon)
from .ribbons import endpoint_locality_check, ribbon_on_strip
from .states import (StateVector, admissible_colorings, to_group_basis,
                     to_spin_basis)
from .stringnet import duality_compare_Bp

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

SUPPORTED_GROUPS = ("Z2", "Z3", "Z4", "S3", "D4")


def _cli_group(name):
    if name not in SUPPORTED_GROUPS:
        raise InvalidParameter(
            f"unknown group {name!r}; supported: {', '.join(SUPPORTED_GROUPS)}")
    return build_group(name)


class _Report:
    """Ordered key/value report with text and JSON rendering."""

    def __init__(self, command):
        self.items = [("command", command)]

    def add(self, key, value):
        if isinstance(value, np.floating):
            value = float(value)
        elif isinstance(value, (np.integer, np.bool_)):
            value = value.item()
        self.items.append((key, value))

    def emit(self, as_json):
        if as_json:
            print(json.dumps({k: v for k, v in self.items}, default=str))
            return
        for k, v in self.items:
            if isinstance(v, float):
                v = repr(v)
            print(f"{k} = {v}")


def _parse_torus(text):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise InvalidParameter(f"torus spec {text!r} is not of the form LxM")
    try:
        l1, l2 = int(parts[0]), int(parts[1])
    except ValueError:
        raise InvalidParameter(f"torus spec {text!r} is not of the form LxM")
    return honeycomb_torus(l1, l2)


def _resolve_complex(path):
    """A literal path, falling back to the bundled data directory."""
    if os.path.exists(path):
        with open(path) as fh:
            return tv.parse_complex(fh.read())
    bundled = os.path.join(DATA_DIR, path)
    if os.path.exists(bundled):
        with open(bundled) as fh:
            return tv.parse_complex(fh.read())
    raise InvalidParameter(f"complex file {path!r} not found "
                           f"(also tried bundled data)")


def _parse_sites(text):
    sites = []
    for tok in text.replace(",", " ").split():
        parts = tok.split(":")
        if len(parts) != 2:
            raise InvalidParameter(
                f"site {tok!r} is not of the form plaquette:vertex")
        sites.append((int(parts[0]), int(parts[1])))
    return sites


def _cmd_group(args, rep):
    G = _cli_group(args.group)
    rep.add("group", G.name)
    rep.add("order", G.order)
    classes = conjugacy_classes(G)
    rep.add("conjugacy_classes", len(classes))
    for i, c in enumerate(classes):
        rep.add(f"class_{i}", " ".join(str(x) for x in sorted(c.members)))
    rep.add("anyon_count", commuting_pair_orbit_count(G))
    return 0


def _cmd_fsym(args, rep):
    G = _cli_group(args.group)
    table = f_symbols(G)
    fus = fusion_data(G)
    rs = irreps(G)
    rep.add("group", G.name)
    rep.add("n_irreps", len(rs))
    rep.add("dims", " ".join(str(r.dim) for r in rs))
    rep.add("dual", " ".join(str(int(d)) for d in fus.dual))
    if args.dump:
        nz = np.argwhere(np.abs(table.F) > 1e-12)
        for idx in nz:
            key = ",".join(str(int(x)) for x in idx)
            rep.add(f"F[{key}]", complex(table.F[tuple(idx)]))
    if args.check_pentagon:
        resid = verify_pentagon(table)
        rep.add("pentagon_residual", resid)
        rep.add("pentagon_tolerance", args.tolerance)
        ok = resid < args.tolerance
        rep.add("pentagon_pass", ok)
        return 0 if ok else 1
    return 0


def _cmd_kitaev(args, rep):
    G = _cli_group(args.group)
    lat = _parse_torus(args.torus)
    rep.add("group", G.name)
    rep.add("torus", args.torus)
    rep.add("oracle_dimension", commuting_pair_orbit_count(G))
    if args.ground_dim:
        kw = {} if args.budget is None else {"budget": args.budget}
        dim = ground_space_dimension(G, lat, **kw)
        rep.add("ground_dimension", dim)
        ok = dim == commuting_pair_orbit_count(G)
        rep.add("oracle_match", ok)
        return 0 if ok else 1
    return 0


def _cmd_stringnet(args, rep):
    G = _cli_group(args.group)
    lat = _parse_torus(args.torus)
    rep.add("group", G.name)
    rep.add("torus", args.torus)
    if args.check_duality:
        dev = 0.0
        for p in range(lat.n_plaquettes):
            dev = max(dev, duality_compare_Bp(G, lat, p, trials=args.samples,
                                              seed=args.seed))
        rep.add("duality_deviation", dev)
        rep.add("duality_tolerance", args.tolerance)
        ok = dev < args.tolerance
        rep.add("duality_pass", ok)
        return 0 if ok else 1
    return 0


def _cmd_ribbon(args, rep):
    G = _cli_group(args.group)
    lat = _parse_torus(args.torus)
    sites = _parse_sites(args.path)
    try:
        h, g = (int(x) for x in args.pair.split(","))
    except ValueError:
        raise InvalidParameter(f"pair {args.pair!r} is not of the form h,g")
    if not (0 <= h < G.order and 0 <= g < G.order):
        raise InvalidParameter(f"pair ({h},{g}) out of range for {G.name}")
    strip = ribbon_strip(lat, sites)
    rib = ribbon_on_strip(strip, {(h, g): 1.0})
    rep.add("group", G.name)
    rep.add("torus", args.torus)
    rep.add("triangles", len(strip.triangles))
    rep.add("closed", strip.closed)
    if args.check_endpoints:
        ground = ground_state(G, lat)
        try:
            res = endpoint_locality_check(G, lat, rib, ground,
                                          tol=args.tolerance)
        except ZeroResult:
            rep.add("result", "ribbon annihilates the ground state")
            return 1
        rep.add("end_sites", res["end_sites"])
        rep.add("excited_vertices",
                " ".join(str(v) for v, _ in res["excitations"]["vertices"]))
        rep.add("excited_plaquettes",
                " ".join(str(p) for p, _ in res["excitations"]["plaquettes"]))
        rep.add("endpoint_tolerance", args.tolerance)
        rep.add("endpoint_pass", res["pass"])
        return 0 if res["pass"] else 1
    return 0


def _cmd_tv(args, rep):
    G = _cli_group(args.group)
    table = f_symbols(G)
    cx = _resolve_complex(args.complex)
    rep.add("group", G.name)
    rep.add("complex", args.complex)
    rep.add("tetrahedra", cx.n_tets)
    kw = {} if args.budget is None else {"budget": args.budget}
    if args.boundary or not cx.is_closed:
        if args.boundary:
            with open(args.boundary) as fh:
                bcx = tv.parse_complex(fh.read())
            if bcx.gluings != cx.gluings:
                raise InvalidParameter(
                    "--boundary file triangulation differs from --complex")
            cx = bcx
        boundary = tv.boundary_coloring_from_colors(cx)
        val = tv.tv_boundary(cx, table, boundary, **kw)
    else:
        val = tv.tv_closed(cx, table, **kw)
    z = val.value
    rep.add("Z", z.real if abs(z.imag) < 1e-12 else z)
    rep.add("terms", val.terms)
    return 0


def _cmd_dw(args, rep):
    G = _cli_group(args.group)
    cx = _resolve_complex(args.complex)
    rep.add("group", G.name)
    rep.add("complex", args.complex)
    rep.add("tetrahedra", cx.n_tets)
    kw = {} if args.budget is None else {"node_budget": args.budget}
    rep.add("Z", tv.dw_value(cx, G, **kw))
    return 0


def _cmd_cylinder_check(args, rep):
    G = _cli_group(args.group)
    lat = _parse_torus(args.torus)
    rep.add("group", G.name)
    rep.add("torus", args.torus)
    dev = tv.compare_projector(lat, G, samples=args.samples, seed=args.seed)
    rep.add("projector_deviation", dev)
    rep.add("projector_tolerance", args.tolerance)
    ok = dev < args.tolerance
    rep.add("projector_pass", ok)
    return 0 if ok else 1


def _cmd_duality(args, rep):
    G = _cli_group(args.group)
    graph = theta_graph() if args.theta else _parse_torus(args.torus)
    fus = fusion_data(G)
    rep.add("group", G.name)
    rep.add("graph", "theta" if args.theta else args.torus)
    cols = admissible_colorings(graph, fus)
    rep.add("admissible_colorings", len(cols))
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.samples):
        coeffs = rng.standard_normal(len(cols)) + 1j * rng.standard_normal(
            len(cols))
        spin = StateVector("spin", {c: a for c, a in zip(cols, coeffs)})
        spin = spin.scale(1.0 / spin.norm())
        grp = to_group_basis(G, graph, spin)
        back = to_spin_basis(G, graph, grp)
        worst = max(worst, back.copy().axpy(-1.0, spin).norm())
    rep.add("round_trip_deviation", worst)
    rep.add("round_trip_tolerance", args.tolerance)
    ok = worst < args.tolerance
    rep.add("round_trip_pass", ok)
    return 0 if ok else 1


def _add_common(p):
    p.add_argument("--json", action="store_true",
                   help="emit the report as one JSON object")
    p.add_argument("--tolerance", type=float, default=1e-9,
                   help="check threshold (default 1e-9)")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("TOPOFORGE_THREADS", "1")),
                   help="worker hint for parallel reductions")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="topoforge",
        description="lattice TQFT models and state sums for finite groups")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("group", help="dump group data")
    p.add_argument("--group", required=True)
    p.set_defaults(func=_cmd_group)

    p = sub.add_parser("fsym", help="F-symbol table and pentagon check")
    p.add_argument("--group", required=True)
    p.add_argument("--check-pentagon", action="store_true")
    p.add_argument("--dump", action="store_true",
                   help="list the nonzero F entries")
    p.set_defaults(func=_cmd_fsym)

    p = sub.add_parser("kitaev", help="quantum-double model checks")
    p.add_argument("--group", required=True)
    p.add_argument("--torus", required=True, help="lattice size LxM")
    p.add_argument("--ground-dim", action="store_true")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_kitaev)

    p = sub.add_parser("stringnet", help="string-net duality checks")
    p.add_argument("--group", required=True)
    p.add_argument("--torus", required=True)
    p.add_argument("--check-duality", action="store_true")
    p.add_argument("--samples", type=int, default=None,
                   help="sampled pairs per plaquette (default exhaustive)")
    p.set_defaults(func=_cmd_stringnet)

    p = sub.add_parser("ribbon", help="ribbon operators and excitations")
    p.add_argument("--group", required=True)
    p.add_argument("--torus", required=True)
    p.add_argument("--path", required=True,
                   help="site list, e.g. '0:1 0:2 1:2'")
    p.add_argument("--pair", required=True, help="coefficient pair h,g")
    p.add_argument("--check-endpoints", action="store_true")
    p.set_defaults(func=_cmd_ribbon)

    p = sub.add_parser("tv", help="Turaev-Viro state sum")
    p.add_argument("--group", required=True)
    p.add_argument("--complex", required=True,
                   help=".tri file (bundled names are searched too)")
    p.add_argument("--boundary", default=None,
                   help=".tri file carrying boundary color lines")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_tv)

    p = sub.add_parser("dw", help="Dijkgraaf-Witten flat-connection count")
    p.add_argument("--group", required=True)
    p.add_argument("--complex", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_dw)

    p = sub.add_parser("cylinder-check",
                       help="ground projector versus cylinder amplitude")
    p.add_argument("--group", required=True)
    p.add_argument("--torus", required=True)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=_cmd_cylinder_check)

    p = sub.add_parser("duality", help="group/spin-network basis round trip")
    p.add_argument("--group", required=True)
    p.add_argument("--torus", default="2x2")
    p.add_argument("--theta", action="store_true",
                   help="use the theta graph instead of a torus")
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(func=_cmd_duality)

    for sp in sub.choices.values():
        _add_common(sp)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    echo = " ".join(sys.argv[1:] if argv is None else argv)
    rep = _Report(echo)
    rep.add("threads", args.threads)
    t0 = time.time()
    try:
        code = args.func(args, rep)
    except BudgetExceeded as exc:
        rep.add("error", f"budget exceeded: {exc}")
        rep.add("wall_time_s", round(time.time() - t0, 3))
        rep.emit(args.json)
        return 3
    except TopoforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep.add("wall_time_s", round(time.time() - t0, 3))
    rep.emit(args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
