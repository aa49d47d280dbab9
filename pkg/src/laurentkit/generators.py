"""Seeded random inputs for the property suites.

Every generator takes a :class:`random.Random` so a suite run is a pure
function of its seed.  Complexes are drawn in a normal form (elementary
pieces, homology pieces and, over the integers, torsion pieces) and then
conjugated degreewise by random invertible matrices, so their shape is known
while their matrices look generic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .categories import MatCat
from .chains import ChainComplex, ChainMap, _span
from .laurent import LaurentCat, LaurentMor
from .linalg import rank_kernel_image, smith_normal_form
from .matrix import Matrix
from .rings import RingSpec

__all__ = [
    "ComplexShape",
    "random_element",
    "random_unit",
    "random_matrix",
    "random_unimodular",
    "random_complex",
    "random_contractible",
    "random_chain_map",
    "random_graded",
    "random_nilpotent",
    "random_laurent",
    "random_invertible_laurent",
]

Z_RANGE = 2  # integer entries are drawn from [-Z_RANGE, Z_RANGE]


def _prime_size(ring: RingSpec) -> int:
    return ring.p if ring.kind == "gf" else ring.size


def random_element(rng: random.Random, ring: RingSpec, prime: bool = False):
    """A random element; ``prime=True`` restricts to the prime subring, which every automorphism fixes."""
    if ring.is_integers:
        return rng.randint(-Z_RANGE, Z_RANGE)
    return rng.randrange(_prime_size(ring) if prime else ring.size)


def random_unit(rng: random.Random, ring: RingSpec, prime: bool = False):
    if ring.is_integers:
        return rng.choice((-1, 1))
    ar = ring.arith()
    while True:
        a = rng.randrange(1, _prime_size(ring) if prime else ring.size)
        if ring.is_field or ar.s_inv(a) is not None:
            return a


def random_matrix(rng: random.Random, ring: RingSpec, rows: int, cols: int, density: float = 1.0) -> Matrix:
    if rows == 0 or cols == 0:
        return Matrix.zeros(ring, rows, cols)
    data = [[random_element(rng, ring) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)]
    return Matrix.from_rows(ring, data)


def random_unimodular(rng: random.Random, ring: RingSpec, n: int, steps: Optional[int] = None, prime: bool = False) -> tuple[Matrix, Matrix]:
    """A random invertible ``P`` with its inverse, as a product of elementary matrices."""
    ar = ring.arith()
    P = Q = Matrix.identity(ring, n)
    if n == 0:
        return P, Q
    for _ in range(steps if steps is not None else 2 * n):
        if n > 1 and rng.random() < 0.75:
            i, j = rng.sample(range(n), 2)
            c = random_element(rng, ring, prime)
            E = Matrix.identity(ring, n).with_entry(i, j, c)
            Einv = Matrix.identity(ring, n).with_entry(i, j, ar.s_neg(c))
        else:
            i = rng.randrange(n)
            u = random_unit(rng, ring, prime)
            E = Matrix.identity(ring, n).with_entry(i, i, u)
            Einv = Matrix.identity(ring, n).with_entry(i, i, ar.s_inv(u))
        P, Q = E @ P, Q @ Einv
    return P, Q


@dataclass(frozen=True)
class ComplexShape:
    """Normal-form description of a random complex.

    ``elementary`` lists ``(degree, unit)`` for pieces ``F --u--> F`` in
    degrees ``degree+1 -> degree``; ``homology`` lists degrees of free
    homology summands; ``torsion`` lists ``(degree, m)`` for ``Z --m--> Z``.
    """

    lo: int
    length: int
    elementary: tuple = ()
    homology: tuple = ()
    torsion: tuple = ()

    @property
    def contractible(self) -> bool:
        return not self.homology and not self.torsion


def _shape(rng: random.Random, ring: RingSpec, lo: int, length: int, max_rank: int, contractible: bool, prime: bool = False) -> ComplexShape:
    ranks = [0] * length
    elem, hom, tors = [], [], []
    attempts = rng.randint(0, 2 * max_rank + 1) if length else 0
    for _ in range(attempts):
        kind = rng.random()
        if length >= 2 and (contractible or kind < 0.55):
            k = rng.randrange(length - 1)
            if ranks[k] < max_rank and ranks[k + 1] < max_rank:
                ranks[k] += 1
                ranks[k + 1] += 1
                elem.append((lo + k, random_unit(rng, ring, prime)))
        elif not contractible and ring.is_integers and length >= 2 and kind < 0.7:
            k = rng.randrange(length - 1)
            if ranks[k] < max_rank and ranks[k + 1] < max_rank:
                ranks[k] += 1
                ranks[k + 1] += 1
                tors.append((lo + k, rng.choice((2, 3, -2))))
        elif not contractible:
            k = rng.randrange(length)
            if ranks[k] < max_rank:
                ranks[k] += 1
                hom.append(lo + k)
    return ComplexShape(lo, length, tuple(elem), tuple(hom), tuple(tors))


def complex_from_shape(rng: random.Random, ring: RingSpec, shape: ComplexShape, conjugate: bool = True, prime: bool = False) -> ChainComplex:
    cat = MatCat(ring)
    lo, length = shape.lo, shape.length
    if length == 0:
        return ChainComplex.zero(cat)
    # basis vectors per degree, then differentials between them
    basis: dict[int, list] = {lo + k: [] for k in range(length)}
    pairs = []  # (src degree, src index, tgt index, scalar)
    for deg, u in shape.elementary:
        basis[deg].append(None)
        basis[deg + 1].append(None)
        pairs.append((deg + 1, len(basis[deg + 1]) - 1, len(basis[deg]) - 1, u))
    for deg, m in shape.torsion:
        basis[deg].append(None)
        basis[deg + 1].append(None)
        pairs.append((deg + 1, len(basis[deg + 1]) - 1, len(basis[deg]) - 1, m))
    for deg in shape.homology:
        basis[deg].append(None)
    ranks = {n: len(v) for n, v in basis.items()}
    # shuffle basis order so pieces interleave
    perm = {n: rng.sample(range(r), r) for n, r in ranks.items()}
    diffs = {}
    for n in range(lo + 1, lo + length):
        d = Matrix.zeros(ring, ranks[n - 1], ranks[n])
        for src_deg, j, i, c in pairs:
            if src_deg == n:
                d = d.with_entry(perm[n - 1][i], perm[n][j], c)
        diffs[n] = d
    if conjugate:
        Ps = {n: random_unimodular(rng, ring, ranks[n], prime=prime) for n in ranks}
        diffs = {n: Ps[n - 1][0] @ d @ Ps[n][1] for n, d in diffs.items()}
    return ChainComplex.make(cat, lo, [ranks[lo + k] for k in range(length)], diffs)


def random_complex(
    rng: random.Random,
    ring: RingSpec,
    max_length: int = 4,
    max_rank: int = 3,
    contractible: bool = False,
    lo: Optional[int] = None,
    min_length: int = 0,
    prime: bool = False,
) -> ChainComplex:
    """A random bounded complex with at most ``max_length`` nonzero degrees.

    With ``prime=True`` all entries lie in the prime subring, so the
    complex is fixed by the ring automorphism.
    """
    length = rng.randint(max(min_length, 2 if contractible and max_length >= 2 else 0), max_length)
    if lo is None:
        lo = rng.randint(-1, 1)
    shape = _shape(rng, ring, lo, length, max_rank, contractible, prime)
    return complex_from_shape(rng, ring, shape, prime=prime)


def random_contractible(rng: random.Random, ring: RingSpec, max_length: int = 4, max_rank: int = 3, lo: Optional[int] = None, prime: bool = False) -> ChainComplex:
    return random_complex(rng, ring, max_length, max_rank, contractible=True, lo=lo, prime=prime)


# ---------------------------------------------------------------- chain maps

def _chain_map_basis(C: ChainComplex, D: ChainComplex) -> tuple[list, list]:
    """Basis of the chain maps ``C -> D`` as coordinate vectors, and the variable layout."""
    ring = C.cat.ring if isinstance(C.cat, MatCat) else D.cat.ring
    degs = list(_span(C, D))
    layout = [(n, i, j) for n in degs for i in range(D.obj(n)) for j in range(C.obj(n))]
    if not layout:
        return [], layout

    def residual(comps: dict) -> list:
        out = []
        for n in degs:
            lhs = D.d(n) @ comps[n] if n in comps else None
            rhs = comps[n - 1] @ C.d(n) if n - 1 in comps else None
            if lhs is None and rhs is None:
                continue
            r = (lhs if rhs is None else (rhs.__neg__() if lhs is None else lhs - rhs))
            out.extend(int(x) for x in r.a.flatten())
        return out

    cols = []
    for n, i, j in layout:
        comps = {m: Matrix.zeros(ring, D.obj(m), C.obj(m)) for m in degs}
        comps[n] = comps[n].with_entry(i, j, 1)
        cols.append(residual(comps))
    rows = len(cols[0])
    if rows == 0:
        return [[int(a == b) for a in range(len(layout))] for b in range(len(layout))], layout
    M = Matrix.from_rows(ring, [[cols[v][r] for v in range(len(layout))] for r in range(rows)])
    if ring.is_integers:
        S, _, V = smith_normal_form(M)
        rk = sum(1 for k in range(min(S.shape)) if S.entry(k, k) != 0)
        K = V.cols_of(list(range(rk, V.cols)))
    else:
        K = rank_kernel_image(M).kernel
    return [[int(K.entry(r, c)) for r in range(K.rows)] for c in range(K.cols)], layout


def random_chain_map(rng: random.Random, C: ChainComplex, D: ChainComplex, zero_chance: float = 0.1) -> ChainMap:
    """A uniformly mixed element of the space of chain maps ``C -> D``."""
    cat = C.cat
    ring = cat.ring
    degs = list(_span(C, D))
    basis, layout = _chain_map_basis(C, D)
    ar = ring.arith()
    vec = [0] * len(layout)
    if basis and rng.random() >= zero_chance:
        for b in basis:
            c = random_element(rng, ring)
            vec = [ar.s_add(x, ar.s_mul(c, y)) for x, y in zip(vec, b)]
    comps = {n: Matrix.zeros(ring, D.obj(n), C.obj(n)) for n in degs}
    for (n, i, j), x in zip(layout, vec):
        if x:
            comps[n] = comps[n].with_entry(i, j, x)
    f = ChainMap(C, D, comps)
    f.verify()
    return f


def random_graded(rng: random.Random, C: ChainComplex, D: ChainComplex, degree: int = 1) -> dict:
    """Random components ``C_n -> D_{n+degree}`` (no chain condition)."""
    ring = C.cat.ring
    return {n: random_matrix(rng, ring, D.obj(n + degree), C.obj(n)) for n in C.degrees()}


# ---------------------------------------------------------------- nilpotent and Laurent data

def random_nilpotent(rng: random.Random, ring: RingSpec, A: int) -> Matrix:
    """A strictly ``Phi``-nilpotent ``phi: Phi(A) -> A`` with twisted degree at most ``A``.

    Built as ``P N Phi(P)^-1`` with ``N`` strictly upper triangular, so
    ``phi^(n) = P N Phi(N) ... Phi^{n-1}(N) Phi^n(P)^-1``.
    """
    N = Matrix.zeros(ring, A, A)
    for i in range(A):
        for j in range(i + 1, A):
            N = N.with_entry(i, j, random_element(rng, ring))
    P, Pinv = random_unimodular(rng, ring, A)
    return P @ N @ Pinv.aut(1)


def random_laurent(rng: random.Random, L: LaurentCat, src: int, tgt: int, span: Sequence[int] = (-1, 0, 1), density: float = 0.6) -> LaurentMor:
    ring = L.inner.ring
    allowed = [i for i in span if L.mode == "all" or (L.mode == "nonneg" and i >= 0) or (L.mode == "nonpos" and i <= 0)]
    coeffs = {i: random_matrix(rng, ring, tgt, src) for i in allowed if rng.random() < density}
    return L.make(src, tgt, coeffs)


def random_invertible_laurent(rng: random.Random, L: LaurentCat, A: int, span: Sequence[int] = (-1, 0, 1), steps: int = 2) -> tuple[LaurentMor, LaurentMor]:
    """A random automorphism of ``A`` over the full Laurent category and its inverse.

    Products of elementary matrices ``1 + c t^j e_ab`` (``a != b``) and a
    shifted monomial ``u t^k`` with ``u`` invertible.
    """
    ring = L.inner.ring
    ar = ring.arith()
    k = rng.choice(list(span))
    P, Pinv = random_unimodular(rng, ring, A)
    f = L.make(A, A, {k: P})
    finv = L.make(A, A, {-k: Pinv.aut(-k)})
    for _ in range(steps if A > 1 else 0):
        a, b = rng.sample(range(A), 2)
        j = rng.choice(list(span))
        c = random_element(rng, ring)
        e = Matrix.zeros(ring, A, A).with_entry(a, b, c)
        en = Matrix.zeros(ring, A, A).with_entry(a, b, ar.s_neg(c))
        E = L.add(L.identity(A), L.make(A, A, {j: e}))
        Einv = L.add(L.identity(A), L.make(A, A, {j: en}))
        f, finv = L.compose(E, f), L.compose(finv, Einv)
    return f, finv
