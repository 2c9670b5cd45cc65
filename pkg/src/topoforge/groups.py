"""Finite groups as explicit multiplication tables.

Elements are integers 0..order-1 with 0 the identity.  The supported
groups are cyclic Z_n, the symmetric group S3 and the dihedral group D4;
each carries a structural `element_repr` used by the representation
module to build explicit irrep matrices.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter, UnknownGroup


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table.

    `mult[a, b]` is the product ab, `inv[a]` the inverse of a.  Index 0
    is the identity.  `element_repr` records how each index was built
    (an int for Z_n, a permutation tuple for S3, an (a, b) pair meaning
    r^a s^b for D4); it is metadata only.
    """

    name: str
    order: int
    mult: np.ndarray
    inv: np.ndarray
    element_repr: tuple = field(default=(), compare=False)

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def elements(self) -> range:
        return range(self.order)

    @property
    def identity(self) -> int:
        return 0

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def conjugate(self, k: int, g: int) -> int:
        """k g k^-1."""
        return int(self.mult[self.mult[k, g], self.inv[k]])


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: frozenset


def _validate_table(name: str, mult: np.ndarray) -> np.ndarray:
    n = mult.shape[0]
    if mult.shape != (n, n):
        raise InvalidParameter(f"{name}: multiplication table must be square")
    # identity at index 0
    if not (np.array_equal(mult[0], np.arange(n)) and np.array_equal(mult[:, 0], np.arange(n))):
        raise InvalidParameter(f"{name}: element 0 is not an identity")
    # each row/column a permutation (cancellation)
    for a in range(n):
        if sorted(mult[a]) != list(range(n)) or sorted(mult[:, a]) != list(range(n)):
            raise InvalidParameter(f"{name}: table row/column {a} is not a permutation")
    # associativity, exhaustive (all groups here have order <= 48)
    left = mult[mult, :]            # (a,b,c) -> (ab)c
    right = mult[:, mult]           # (a,b,c) -> a(bc)
    if not np.array_equal(left, right):
        raise InvalidParameter(f"{name}: multiplication is not associative")
    inv = np.empty(n, dtype=np.int64)
    for a in range(n):
        hits = np.where(mult[a] == 0)[0]
        if len(hits) != 1:
            raise InvalidParameter(f"{name}: element {a} has no unique inverse")
        inv[a] = hits[0]
    return inv


def _from_table(name: str, mult: np.ndarray, element_repr: tuple) -> FiniteGroup:
    mult = np.asarray(mult, dtype=np.int64)
    inv = _validate_table(name, mult)
    mult.setflags(write=False)
    inv.setflags(write=False)
    return FiniteGroup(name=name, order=mult.shape[0], mult=mult, inv=inv,
                       element_repr=element_repr)


def _cyclic(n: int) -> FiniteGroup:
    a = np.arange(n)
    mult = (a[:, None] + a[None, :]) % n
    return _from_table(f"Z{n}", mult, tuple(range(n)))


_S3_PERMS = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]


def _s3() -> FiniteGroup:
    perms = _S3_PERMS
    index = {p: i for i, p in enumerate(perms)}
    n = 6
    mult = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # composition: (p*q)(x) = p(q(x))
            mult[i, j] = index[tuple(p[q[x]] for x in range(3))]
    return _from_table("S3", mult, tuple(perms))


def _d4() -> FiniteGroup:
    # elements r^a s^b, a in 0..3, b in 0..1, with s r s = r^-1
    elems = [(a, b) for b in range(2) for a in range(4)]
    index = {e: i for i, e in enumerate(elems)}
    n = 8
    mult = np.empty((n, n), dtype=np.int64)
    for i, (a1, b1) in enumerate(elems):
        for j, (a2, b2) in enumerate(elems):
            # (r^a1 s^b1)(r^a2 s^b2) = r^(a1 + (-1)^b1 a2) s^(b1+b2)
            a = (a1 + (a2 if b1 == 0 else -a2)) % 4
            b = (b1 + b2) % 2
            mult[i, j] = index[(a, b)]
    return _from_table("D4", mult, tuple(elems))


def build_group(spec: str) -> FiniteGroup:
    """Build a supported group from its name: "Z<n>" (n >= 2), "S3" or "D4"."""
    m = re.fullmatch(r"Z(\d+)", spec)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise InvalidParameter(f"Z{n} is not a valid cyclic group here (need n >= 2)")
        return _cyclic(n)
    if spec == "S3":
        return _s3()
    if spec == "D4":
        return _d4()
    raise UnknownGroup(f"unsupported group name: {spec!r}")


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    """Conjugacy classes, ordered by smallest member."""
    seen = set()
    classes = []
    for g in G.elements():
        if g in seen:
            continue
        members = frozenset(G.conjugate(k, g) for k in G.elements())
        seen |= members
        classes.append(ConjugacyClass(representative=min(members), members=members))
    return classes


def commuting_pair_orbit_count(G: FiniteGroup) -> int:
    """Number of orbits of commuting pairs under simultaneous conjugation.

    This equals the number of irreps of the Drinfeld double D(G) and so
    serves as the anyon-count oracle for the torus ground-space dimension.
    """
    pairs = [(g, h) for g, h in itertools.product(G.elements(), repeat=2)
             if G.mul(g, h) == G.mul(h, g)]
    pairset = set(pairs)
    orbits = 0
    while pairset:
        g, h = next(iter(pairset))
        orbit = {(G.conjugate(k, g), G.conjugate(k, h)) for k in G.elements()}
        pairset -= orbit
        orbits += 1
    return orbits
