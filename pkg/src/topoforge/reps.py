"""Irreps, fusion data, intertwiners and the F-symbol (6j) table.

Irrep matrices are explicit unitary constructions per supported group.
Intertwiners are unit-norm invariant tensors in i (x) j (x) k obtained by
group averaging; F-symbols are recoupling coefficients between the two
fusion channels of four irreps and are verified against the pentagon
identity numerically.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (MultiplicityUnsupported, NotAdmissible,
                     NumericalInconsistency, UnknownGroup)
from .groups import FiniteGroup, build_group, conjugacy_classes

_TOL = 1e-12


@dataclass(frozen=True)
class Irrep:
    """A unitary irrep: matrices[g] is the d x d matrix D(g)."""

    label: int
    dim: int
    matrices: np.ndarray        # (|G|, d, d) complex
    character: np.ndarray       # (|G|,) complex

    def __repr__(self):
        return f"Irrep(label={self.label}, dim={self.dim})"


def _check_irreps(G: FiniteGroup, irreps: list[Irrep]) -> None:
    if sum(r.dim ** 2 for r in irreps) != G.order:
        raise NumericalInconsistency("sum of squared dims does not equal |G|")
    for r in irreps:
        D = r.matrices
        if not np.allclose(D[0], np.eye(r.dim), atol=_TOL):
            raise NumericalInconsistency(f"irrep {r.label}: D(identity) != 1")
        # unitarity
        prod = np.einsum("gij,gkj->gik", D, D.conj())
        if not np.allclose(prod, np.eye(r.dim), atol=1e-12):
            raise NumericalInconsistency(f"irrep {r.label}: matrices not unitary")
        # homomorphism
        if not np.allclose(D[G.mult], np.einsum("aij,bjk->abik", D, D), atol=1e-12):
            raise NumericalInconsistency(f"irrep {r.label}: not a homomorphism")
    # Peter-Weyl orthogonality
    for r in irreps:
        for s in irreps:
            ov = np.einsum("gmn,gpq->mnpq", r.matrices, s.matrices.conj())
            if r.label == s.label:
                want = (G.order / r.dim) * np.einsum(
                    "mp,nq->mnpq", np.eye(r.dim), np.eye(r.dim))
            else:
                want = np.zeros_like(ov)
            if not np.allclose(ov, want, atol=1e-10):
                raise NumericalInconsistency(
                    f"orthogonality fails for irreps {r.label}, {s.label}")


def _zn_irreps(G: FiniteGroup, n: int) -> list[Irrep]:
    out = []
    g = np.arange(n)
    for k in range(n):
        chi = np.exp(2j * np.pi * k * g / n)
        out.append(Irrep(label=k, dim=1, matrices=chi.reshape(n, 1, 1),
                         character=chi))
    return out


def _s3_irreps(G: FiniteGroup) -> list[Irrep]:
    perms = G.element_repr
    n = G.order
    trivial = np.ones((n, 1, 1), dtype=complex)

    def sign(p):
        s = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] > p[j]:
                    s = -s
        return s

    sgn = np.array([sign(p) for p in perms], dtype=complex).reshape(n, 1, 1)
    # standard 2-dim irrep: permutation action on the plane x+y+z=0,
    # in the orthonormal basis (1,-1,0)/sqrt2, (1,1,-2)/sqrt6
    basis = np.array([[1, -1, 0], [1, 1, -2]], dtype=float)
    basis /= np.linalg.norm(basis, axis=1, keepdims=True)
    std = np.empty((n, 2, 2), dtype=complex)
    for g, p in enumerate(perms):
        P = np.zeros((3, 3))
        for x in range(3):
            P[p[x], x] = 1.0
        std[g] = basis @ P @ basis.T
    return [
        Irrep(0, 1, trivial, trivial[:, 0, 0]),
        Irrep(1, 1, sgn, sgn[:, 0, 0]),
        Irrep(2, 2, std, np.trace(std, axis1=1, axis2=2)),
    ]


def _d4_irreps(G: FiniteGroup) -> list[Irrep]:
    elems = G.element_repr           # (a, b) meaning r^a s^b
    n = G.order
    out = []
    label = 0
    for cr in (1, 1, -1, -1):
        pass
    one_dims = [(1, 1), (1, -1), (-1, 1), (-1, -1)]   # (chi(r), chi(s))
    for cr, cs in one_dims:
        chi = np.array([(cr ** a) * (cs ** b) for a, b in elems], dtype=complex)
        out.append(Irrep(label, 1, chi.reshape(n, 1, 1), chi))
        label += 1
    R = np.array([[0.0, -1.0], [1.0, 0.0]])
    S = np.array([[1.0, 0.0], [0.0, -1.0]])
    mats = np.empty((n, 2, 2), dtype=complex)
    for g, (a, b) in enumerate(elems):
        mats[g] = np.linalg.matrix_power(R, a) @ np.linalg.matrix_power(S, b)
    out.append(Irrep(label, 2, mats, np.trace(mats, axis1=1, axis2=2)))
    return out


@functools.lru_cache(maxsize=None)
def _irreps_cached(name: str):
    from .groups import build_group
    G = build_group(name)
    if name.startswith("Z"):
        irr = _zn_irreps(G, G.order)
    elif name == "S3":
        irr = _s3_irreps(G)
    elif name == "D4":
        irr = _d4_irreps(G)
    else:
        raise UnknownGroup(name)
    _check_irreps(G, irr)
    if len(irr) != len(conjugacy_classes(G)):
        raise NumericalInconsistency("irrep count != conjugacy class count")
    return tuple(irr)


def irreps(G: FiniteGroup) -> list[Irrep]:
    """Complete list of inequivalent unitary irreps of a supported group."""
    return list(_irreps_cached(G.name))


@dataclass(frozen=True)
class FusionData:
    """Fusion coefficients N[i,j,k], dual label map, and d = sum d_j^2."""

    N: np.ndarray          # (R, R, R) ints
    dual: np.ndarray       # (R,) ints
    dims: np.ndarray       # (R,) ints
    d_total: int

    @property
    def n_labels(self) -> int:
        return len(self.dual)

    def admissible(self, i: int, j: int, k: int) -> bool:
        return self.N[i, j, k] == 1


def fusion_coefficient(G: FiniteGroup, i: int, j: int, k: int) -> int:
    """N_ijk = (1/|G|) sum_g chi_i chi_j chi_k, the multiplicity of the
    trivial irrep in i (x) j (x) k."""
    irr = irreps(G)
    val = np.sum(irr[i].character * irr[j].character * irr[k].character) / G.order
    if abs(val - round(val.real)) > 1e-9:
        raise NumericalInconsistency(f"character sum N_{i}{j}{k} = {val} is not integral")
    return int(round(val.real))


def fusion_data(G: FiniteGroup) -> FusionData:
    irr = irreps(G)
    R = len(irr)
    N = np.empty((R, R, R), dtype=np.int64)
    for i in range(R):
        for j in range(R):
            for k in range(R):
                N[i, j, k] = fusion_coefficient(G, i, j, k)
    dual = np.empty(R, dtype=np.int64)
    for j in range(R):
        hits = [k for k in range(R)
                if np.allclose(irr[k].character, irr[j].character.conj(), atol=1e-10)]
        if len(hits) != 1:
            raise NumericalInconsistency(f"no unique dual for irrep {j}")
        dual[j] = hits[0]
    dims = np.array([r.dim for r in irr], dtype=np.int64)
    N.setflags(write=False)
    dual.setflags(write=False)
    dims.setflags(write=False)
    return FusionData(N=N, dual=dual, dims=dims, d_total=int(np.sum(dims ** 2)))


@dataclass(frozen=True)
class Intertwiner:
    labels: tuple
    tensor: np.ndarray     # (d_i, d_j, d_k) complex, unit norm


def _invariant_projector(G: FiniteGroup, labels) -> np.ndarray:
    irr = irreps(G)
    mats = [irr[l].matrices for l in labels]
    P = np.einsum("gad,gbe,gcf->abcdef", *mats) / G.order
    return P


@functools.lru_cache(maxsize=None)
def _canonical_intertwiner(name: str, i: int, j: int, k: int) -> np.ndarray:
    """Unit-norm invariant tensor for the sorted triple (i <= j <= k).

    Phase convention: the first nonzero entry in flattened lexicographic
    order is real positive.
    """
    from .groups import build_group
    G = build_group(name)
    irr = irreps(G)
    dims = (irr[i].dim, irr[j].dim, irr[k].dim)
    P = _invariant_projector(G, (i, j, k)).reshape(np.prod(dims), np.prod(dims))
    # P is a Hermitian projector of rank N_ijk = 1: any nonzero column spans
    # the invariant line.
    col = int(np.argmax(np.linalg.norm(P, axis=0)))
    v = P[:, col]
    nrm = np.linalg.norm(v)
    if nrm < 1e-8:
        raise NumericalInconsistency("invariant projector numerically zero")
    v = v / nrm
    idx = int(np.argmax(np.abs(v) > 1e-8 * np.max(np.abs(v))))
    v = v * (np.abs(v[idx]) / v[idx])
    v[np.abs(v) < 1e-14] = 0.0
    v.setflags(write=False)
    return v.reshape(dims)


def _ungauged_tensor(G: FiniteGroup, i: int, j: int, k: int) -> np.ndarray:
    N = fusion_coefficient(G, i, j, k)
    if N == 0:
        raise NotAdmissible(f"N_{i},{j},{k} = 0")
    if N > 1:
        raise MultiplicityUnsupported(f"N_{i},{j},{k} = {N} > 1")
    order = np.argsort((i, j, k), kind="stable")
    si, sj, sk = sorted((i, j, k))
    canon = _canonical_intertwiner(G.name, si, sj, sk)
    # inverse permutation: place sorted axes back into requested positions
    perm = np.empty(3, dtype=int)
    perm[order] = np.arange(3)
    return np.transpose(canon, perm)


def intertwiner(G: FiniteGroup, i: int, j: int, k: int) -> Intertwiner:
    """The unit-norm invariant tensor in i (x) j (x) k (multiplicity-free).

    Tensors for the permutations of a triple are axis-permutations of one
    canonical tensor (sorted labels), so that recoupling coefficients built
    from them have coherent signs.  Each unordered triple additionally
    carries a fourth-root-of-unity gauge phase chosen so that the 6j
    symbols built from these tensors are tetrahedrally symmetric.
    """
    t = _ungauged_tensor(G, i, j, k)
    kappa = _triple_gauge(G.name).get((i, j, k), 1.0 + 0.0j)
    if kappa != 1.0:
        t = kappa * t
    return Intertwiner(labels=(i, j, k), tensor=t)


@dataclass(frozen=True)
class FSymbolTable:
    """Dense F-symbol table F[i,j,m,k,l,n] plus v_j = sqrt(d_j).

    F^{ijm}_{kln} is nonzero only when the four triples (i,j,m), (m*,k,l),
    (g,k,n*) with g=j and (i,n,l) are admissible; these are exactly the four
    vertex/string couplings appearing in the plaquette action (hexagon rule).
    The gauge is fixed so that F / (v_m v_n) carries the full tetrahedral
    symmetry of the 6j symbol.
    """

    group_name: str
    F: np.ndarray          # (R,)*6 complex
    v: np.ndarray          # (R,) real, v_j = sqrt(d_j)
    dual: np.ndarray       # (R,) int label map
    dims: np.ndarray       # (R,) int
    phases: tuple          # ((a, b, c, phase), ...) fusion-triple gauges

    @property
    def n_labels(self) -> int:
        return len(self.v)

    def symmetric_6j(self) -> np.ndarray:
        """The tetrahedrally symmetric 6j: F^{ijm}_{kln} / (v_m v_n)."""
        v = self.v
        return self.F / (v[None, None, :, None, None, None]
                         * v[None, None, None, None, None, :])

    def fusion_phase(self, a: int, b: int, c: int) -> complex:
        """Gauge phase of the fusion map a (x) b -> c (a fourth root of 1)."""
        for (x, y, z, u) in self.phases:
            if (x, y, z) == (a, b, c):
                return u
        return 1.0 + 0.0j


def fusion_tensor(G: FiniteGroup, a: int, b: int, c: int,
                  table: "FSymbolTable | None" = None) -> np.ndarray:
    """Equivariant fusion map V_a (x) V_b -> V_c as a (d_a, d_b, d_c) array.

    sqrt(d_c) * conj(I(a, b, c*)), optionally multiplied by the gauge phase
    recorded in an F-symbol table so that recoupling with the table's F is
    consistent.
    """
    fus = fusion_data(G)
    t = intertwiner(G, a, b, int(fus.dual[c])).tensor
    out = np.sqrt(float(fus.dims[c])) * np.conj(t)
    if table is not None:
        out = out * table.fusion_phase(a, b, c)
    return out


# The 24 symmetries of the 6j tetrahedron acting on the label slots
# (i, j, m, k, l, n): a slot permutation plus a dual-decoration mask
# (1 = label is dualized).  Upper row (i, j, m) is a face; columns pair
# opposite edges (i,k), (j,l), (m,n).
_TET_SYMMETRIES = (
    ((0, 1, 2, 3, 4, 5), (0, 0, 0, 0, 0, 0)),
    ((0, 2, 1, 3, 5, 4), (0, 0, 0, 1, 0, 0)),
    ((0, 4, 5, 3, 1, 2), (0, 0, 0, 0, 0, 0)),
    ((0, 5, 4, 3, 2, 1), (0, 0, 0, 1, 0, 0)),
    ((1, 0, 2, 4, 3, 5), (0, 0, 0, 0, 0, 1)),
    ((1, 2, 0, 4, 5, 3), (0, 0, 0, 1, 1, 0)),
    ((1, 3, 5, 4, 0, 2), (0, 0, 1, 0, 0, 0)),
    ((1, 5, 3, 4, 2, 0), (0, 1, 0, 1, 0, 0)),
    ((2, 0, 1, 5, 3, 4), (0, 0, 0, 0, 1, 1)),
    ((2, 1, 0, 5, 4, 3), (0, 0, 0, 1, 1, 1)),
    ((2, 3, 4, 5, 0, 1), (0, 1, 1, 0, 0, 0)),
    ((2, 4, 3, 5, 1, 0), (0, 1, 1, 1, 0, 0)),
    ((3, 1, 5, 0, 4, 2), (0, 0, 1, 0, 0, 1)),
    ((3, 2, 4, 0, 5, 1), (0, 1, 0, 1, 1, 0)),
    ((3, 4, 2, 0, 1, 5), (0, 0, 1, 0, 0, 1)),
    ((3, 5, 1, 0, 2, 4), (0, 1, 0, 1, 1, 0)),
    ((4, 0, 5, 1, 3, 2), (0, 0, 0, 0, 0, 1)),
    ((4, 2, 3, 1, 5, 0), (0, 1, 0, 1, 0, 0)),
    ((4, 3, 2, 1, 0, 5), (0, 0, 1, 0, 0, 0)),
    ((4, 5, 0, 1, 2, 3), (0, 0, 0, 1, 1, 0)),
    ((5, 0, 4, 2, 3, 1), (0, 0, 0, 0, 1, 1)),
    ((5, 1, 3, 2, 4, 0), (0, 1, 1, 1, 0, 0)),
    ((5, 3, 1, 2, 0, 4), (0, 1, 1, 0, 0, 0)),
    ((5, 4, 0, 2, 1, 3), (0, 0, 0, 1, 1, 1)),
)


def _apply_tet_symmetry(T: np.ndarray, dual: np.ndarray, perm, mask) -> np.ndarray:
    slots = list(np.indices(T.shape))
    arrs = []
    for s in range(6):
        a = slots[perm[s]]
        if mask[s]:
            a = dual[a]
        arrs.append(a)
    return T[tuple(arrs)]


def _f_table(G: FiniteGroup, gauge: "dict | None"):
    """F from orthonormal projection of fusion channels.

    On Hom(V_i (x) V_j (x) V_k -> V_L) the left channel fuses (i j) -> M then
    (M k) -> L; the right channel fuses (j k) -> n then (i n) -> L.  Channels
    are orthogonal with squared norm d_L, so the change-of-basis coefficient
    is tr(R_n^dag L_M) / d_L.  The table is then rewired to the hexagon-rule
    index convention F[i,j,m,k,l,n] with M = m*, L = l*.

    `gauge` maps sorted invariant triples to the fourth-root phases carried
    by the corresponding intertwiners; None means all phases are 1.
    """
    fus = fusion_data(G)
    R = fus.n_labels
    dual = fus.dual
    dims = fus.dims.astype(float)

    def fuse(a, b, c):
        try:
            t = _ungauged_tensor(G, a, b, int(dual[c]))
        except NotAdmissible:
            return None
        if gauge is not None:
            t = gauge[(a, b, int(dual[c]))] * t
        return np.sqrt(dims[c]) * np.conj(t)

    Fseq = np.zeros((R,) * 6, dtype=complex)
    for i, j, k, L in itertools.product(range(R), repeat=4):
        lefts = {}
        for M in range(R):
            p1, p2 = fuse(i, j, M), fuse(M, k, L)
            if p1 is None or p2 is None:
                continue
            lefts[M] = np.einsum("ijm,mkl->ijkl", p1, p2)
        rights = {}
        for n in range(R):
            q1, q2 = fuse(j, k, n), fuse(i, n, L)
            if q1 is None or q2 is None:
                continue
            rights[n] = np.einsum("jkn,inl->ijkl", q1, q2)
        # channel Gram check: orthogonal with norm d_L
        for n, Rn in rights.items():
            for n2, Rn2 in rights.items():
                want = dims[L] if n == n2 else 0.0
                if abs(np.vdot(Rn, Rn2) - want) > 1e-9 * max(1.0, dims[L]):
                    raise NumericalInconsistency(
                        f"fusion channel Gram matrix defective at "
                        f"({i},{j},{k})->{L}")
        for M, Lm in lefts.items():
            for n, Rn in rights.items():
                Fseq[i, j, k, L, M, n] = np.vdot(Rn, Lm) / dims[L]
    ii = np.indices((R,) * 6)
    i_, j_, m_, k_, l_, n_ = ii
    F = Fseq[(i_, j_, k_, dual[l_], dual[m_], n_)]
    F[np.abs(F) < 1e-12] = 0.0
    return F


def _solve_mod4(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One solution t of A t = b (mod 4), or raise NumericalInconsistency.

    Columns with an odd (invertible) coefficient are eliminated first;
    leftover rows have only even coefficients and reduce to a GF(2) system
    on the remaining free variables.  Free variables beyond that are 0.
    """
    A = A.astype(np.int64) % 4
    b = b.astype(np.int64) % 4
    m, T = A.shape
    Ab = np.concatenate([A, b[:, None]], axis=1)
    r = 0
    pivots = []
    for c in range(T):
        hits = [x for x in range(r, m) if Ab[x, c] % 2 == 1]
        if not hits:
            continue
        Ab[[r, hits[0]]] = Ab[[hits[0], r]]
        if Ab[r, c] == 3:      # inverse of 3 mod 4 is 3
            Ab[r] = (3 * Ab[r]) % 4
        for x in range(m):
            if x != r and Ab[x, c] % 4:
                Ab[x] = (Ab[x] - Ab[x, c] * Ab[r]) % 4
        pivots.append(c)
        r += 1
        if r == m:
            break
    # leftover rows: all coefficients even; 2 z . t = rhs (mod 4)
    t = np.zeros(T, dtype=np.int64)
    tail = Ab[r:]
    if tail.size:
        if np.any(tail[:, T] % 2):
            raise NumericalInconsistency(
                "no fourth-root gauge restores the tetrahedral symmetry "
                "of the 6j table")
        G2 = (tail[:, :T] // 2) % 2
        b2 = (tail[:, T] // 2) % 2
        Gb = np.concatenate([G2, b2[:, None]], axis=1).astype(np.int8)
        r2 = 0
        piv2 = []
        for c in range(T):
            hits = np.nonzero(Gb[r2:, c])[0]
            if len(hits) == 0:
                continue
            Gb[[r2, r2 + hits[0]]] = Gb[[r2 + hits[0], r2]]
            others = Gb[:, c].astype(bool).copy()
            others[r2] = False
            Gb[others] ^= Gb[r2]
            piv2.append(c)
            r2 += 1
            if r2 == Gb.shape[0]:
                break
        rest = Gb[r2:]
        if np.any((rest[:, :T].sum(axis=1) == 0) & (rest[:, T] == 1)):
            raise NumericalInconsistency(
                "no fourth-root gauge restores the tetrahedral symmetry "
                "of the 6j table")
        for row, c in enumerate(piv2):
            t[c] = Gb[row, T]
    for row, c in enumerate(pivots):
        t[c] = (Ab[row, T] - Ab[row, :T] @ t) % 4
    if np.any(A @ t % 4 != b % 4):
        raise NumericalInconsistency(
            "no fourth-root gauge restores the tetrahedral symmetry "
            "of the 6j table")
    return t


@functools.lru_cache(maxsize=None)
def _triple_gauge(name: str) -> dict:
    """Fourth-root-of-unity phase per ordered intertwiner triple.

    Rescaling the invariant tensor of a triple T by i^{t_T} multiplies every
    F entry by i to the signed sum of its four face-triple exponents (+1 for
    the two right-channel faces, -1 for the two left-channel ones, since the
    entry is linear in the former and antilinear in the latter).  Imposing
    every tetrahedral symmetry relation of S = F/(v_m v_n) built from the
    ungauged tensors yields a linear system mod 4; free variables are set to
    0, making the solution deterministic.  Phases are independent per label
    ordering: recoupling coefficients compare tensors through explicit
    overlaps, so no coherence between orderings of one triple is required.
    """
    G = build_group(name)
    fus = fusion_data(G)
    R = fus.n_labels
    dual = fus.dual
    v = np.sqrt(fus.dims.astype(float))
    F = _f_table(G, None)
    S = F / (v[None, None, :, None, None, None]
             * v[None, None, None, None, None, :])
    triples = sorted((a, b, c)
                     for a in range(R) for b in range(R) for c in range(R)
                     if fus.N[a, b, c])
    tindex = {t: x for x, t in enumerate(triples)}
    T = len(triples)

    def entry_vec(e):
        """Signed exponent pattern over the four invariant face triples."""
        i, j, m, k, l, n = (int(x) for x in e)
        vec = np.zeros(T, dtype=np.int64)
        for t in ((j, k, int(dual[n])), (i, n, l)):
            vec[tindex[t]] += 1
        for t in ((i, j, m), (int(dual[m]), k, l)):
            vec[tindex[t]] -= 1
        return vec

    nz = list(zip(*np.nonzero(np.abs(S) > 1e-12)))
    rows, rhs = [], []
    for perm, mask in _TET_SYMMETRIES[1:]:
        Sp = _apply_tet_symmetry(S, dual, perm, mask)
        for e in nz:
            a, b = S[e], Sp[e]
            if abs(abs(a) - abs(b)) > 1e-9:
                raise NumericalInconsistency(
                    "6j magnitudes break tetrahedral symmetry")
            ratio = b / a
            quarter = None
            for q in range(4):
                if abs(ratio - 1j ** q) < 1e-9:
                    quarter = q
                    break
            if quarter is None:
                raise NumericalInconsistency(
                    "6j entries not related by a fourth root of unity "
                    "under tetrahedral symmetry")
            ep = tuple(int(e[perm[s]]) for s in range(6))
            epd = tuple(int(dual[ep[s]]) if mask[s] else ep[s]
                        for s in range(6))
            # require S[e] i^(vec(e).t) = S[e'] i^(vec(e').t)
            rows.append(entry_vec(e) - entry_vec(epd))
            rhs.append(quarter)
    if rows:
        t = _solve_mod4(np.array(rows, dtype=np.int64),
                        np.array(rhs, dtype=np.int64))
    else:
        t = np.zeros(T, dtype=np.int64)
    return {trip: complex(1j ** int(t[x])) for trip, x in tindex.items()}


@functools.lru_cache(maxsize=None)
def _f_symbols_cached(name: str) -> FSymbolTable:
    G = build_group(name)
    fus = fusion_data(G)
    if np.any(fus.N > 1):
        raise MultiplicityUnsupported(
            f"{name}: fusion with multiplicity is not supported")
    F = _f_table(G, _triple_gauge(name))
    F.setflags(write=False)
    return FSymbolTable(group_name=name, F=F,
                        v=np.sqrt(fus.dims.astype(float)),
                        dual=fus.dual, dims=fus.dims, phases=())


def f_symbols(G: FiniteGroup) -> FSymbolTable:
    """The gauge-fixed F-symbol table of Rep(G)."""
    return _f_symbols_cached(G.name)


def verify_pentagon(table: FSymbolTable) -> float:
    """Max residual of the Biedenharn-Elliott (pentagon) identity:

    sum_n F^{mlq}_{kp*n} F^{jip}_{mns*} F^{js*n}_{lkr*}
        = F^{jip}_{q*kr*} F^{riq*}_{mls*}
    """
    F, dual = table.F, table.dual

    def dl(X, axis):
        return np.take(X, dual, axis=axis)

    A = dl(F, 4)               # F^{mlq}_{kp*n}
    B = dl(F, 5)               # F^{jip}_{mns*}
    C = dl(dl(F, 1), 5)        # F^{js*n}_{lkr*}
    lhs = np.einsum("mlqkpn,jipmns,jsnlkr->jipqmlksr", A, B, C)
    D = dl(dl(F, 3), 5)        # F^{jip}_{q*kr*}
    E = dl(dl(F, 2), 5)        # F^{riq*}_{mls*}
    rhs = np.einsum("jipqkr,riqmls->jipqmlksr", D, E)
    return float(np.max(np.abs(lhs - rhs)))


def tetrahedral_symmetry_residual(table: FSymbolTable) -> float:
    """Max deviation of F/(v_m v_n) from full tetrahedral 6j symmetry."""
    S = table.symmetric_6j()
    worst = 0.0
    for perm, mask in _TET_SYMMETRIES:
        Sp = _apply_tet_symmetry(S, table.dual, perm, mask)
        worst = max(worst, float(np.max(np.abs(Sp - S))))
    return worst

