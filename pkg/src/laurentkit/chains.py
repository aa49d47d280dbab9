"""Bounded chain complexes over any :class:`~laurentkit.categories.Category`.

Homological indexing throughout: ``c_n: C_n -> C_{n-1}``.  A homotopy ``h``
from ``f`` to ``g`` satisfies ``d h + h d = g - f``; a contraction is a
homotopy from ``0`` to ``id``.  Every constructor checks the identities it
promises and raises :class:`~laurentkit.errors.IdentityViolated` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .categories import Category, MatCat
from .errors import (
    IdentityViolated,
    NotAContraction,
    NotACofibration,
    NotAHomotopy,
    NotASplitting,
    ObjectMismatch,
    BadCertificate,
)
from .linalg import inverse, rank_kernel_image, smith_normal_form


# ---------------------------------------------------------------- data types

@dataclass(frozen=True, eq=False)
class ChainComplex:
    """``objs[i] = C_{lo+i}`` and ``diffs[i] = c_{lo+i}``; ``diffs[0]`` maps into the zero object."""

    cat: Category
    lo: int
    objs: tuple
    diffs: tuple

    @staticmethod
    def make(cat: Category, lo: int, objs: Sequence, diffs: dict | Sequence | None = None, check: bool = True) -> "ChainComplex":
        objs = tuple(objs)
        if isinstance(diffs, dict):
            dd = diffs
        else:
            dd = {lo + 1 + i: d for i, d in enumerate(diffs or ())}
        full = []
        for i, A in enumerate(objs):
            n = lo + i
            tgt = objs[i - 1] if i > 0 else cat.zero_object()
            d = dd.get(n)
            full.append(cat.zero(A, tgt) if d is None else d)
        C = ChainComplex(cat, lo, objs, tuple(full))
        if check:
            C.verify()
        return C

    @staticmethod
    def zero(cat: Category) -> "ChainComplex":
        return ChainComplex(cat, 0, (), ())

    @staticmethod
    def concentrated(cat: Category, A, n: int = 0) -> "ChainComplex":
        """``A[n]``."""
        return ChainComplex.make(cat, n, [A])

    @property
    def hi(self) -> int:
        return self.lo + len(self.objs) - 1

    @property
    def is_empty(self) -> bool:
        return not self.objs

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def obj(self, n: int):
        i = n - self.lo
        if 0 <= i < len(self.objs):
            return self.objs[i]
        return self.cat.zero_object()

    def d(self, n: int):
        i = n - self.lo
        if 0 <= i < len(self.objs):
            return self.diffs[i]
        return self.cat.zero(self.obj(n), self.obj(n - 1))

    def verify(self) -> None:
        cat = self.cat
        for n in self.degrees():
            d = self.d(n)
            if not cat.obj_equal(cat.src(d), self.obj(n)) or not cat.obj_equal(cat.tgt(d), self.obj(n - 1)):
                raise ObjectMismatch(f"differential in degree {n} has wrong ends")
            if n - 1 >= self.lo and not cat.is_zero(cat.compose(self.d(n - 1), d)):
                raise IdentityViolated("d o d = 0", n)

    def phi(self, power: int = 1) -> "ChainComplex":
        if power == 0:
            return self
        cat = self.cat
        return ChainComplex(cat, self.lo, tuple(cat.phi(power, A) for A in self.objs), tuple(cat.phi(power, d) for d in self.diffs))

    def trimmed(self) -> "ChainComplex":
        cat = self.cat
        nz = [n for n in self.degrees() if not cat.is_zero_object(self.obj(n))]
        if not nz:
            return ChainComplex.zero(cat)
        lo, hi = nz[0], nz[-1]
        return ChainComplex.make(cat, lo, [self.obj(n) for n in range(lo, hi + 1)], {n: self.d(n) for n in range(lo + 1, hi + 1)}, check=False)

    def same_as(self, other: "ChainComplex") -> bool:
        a, b = self.trimmed(), other.trimmed()
        if a.lo != b.lo or len(a.objs) != len(b.objs):
            return a.is_empty and b.is_empty
        return all(self.cat.obj_equal(x, y) for x, y in zip(a.objs, b.objs)) and all(x == y for x, y in zip(a.diffs, b.diffs))

    def is_zero(self) -> bool:
        return all(self.cat.is_zero_object(A) for A in self.objs)

    def rank(self, n: int) -> int:
        return self.cat.rank(self.obj(n))

    def ranks(self) -> dict[int, int]:
        return {n: self.rank(n) for n in self.degrees()}


def _span(*Cs: ChainComplex) -> range:
    live = [C for C in Cs if not C.is_empty]
    if not live:
        return range(0)
    return range(min(C.lo for C in live), max(C.hi for C in live) + 1)


@dataclass(frozen=True, eq=False)
class ChainMap:
    src: ChainComplex
    tgt: ChainComplex
    comps: dict = field(default_factory=dict)
    twist: int = 0  # documentation only: maps Phi^twist(C) -> D when used as an endomorphism

    @property
    def cat(self) -> Category:
        return self.src.cat

    def at(self, n: int):
        f = self.comps.get(n)
        if f is None:
            return self.cat.zero(self.src.obj(n), self.tgt.obj(n))
        return f

    def degrees(self) -> range:
        return _span(self.src, self.tgt)

    def verify(self) -> None:
        cat = self.cat
        for n in self.degrees():
            f = self.at(n)
            if not cat.obj_equal(cat.src(f), self.src.obj(n)) or not cat.obj_equal(cat.tgt(f), self.tgt.obj(n)):
                raise ObjectMismatch(f"chain map component in degree {n} has wrong ends")
            lhs = cat.compose(self.tgt.d(n), f)
            rhs = cat.compose(self.at(n - 1), self.src.d(n))
            if lhs != rhs:
                raise IdentityViolated("d o f = f o d", n)

    def is_chain_map(self) -> bool:
        try:
            self.verify()
            return True
        except (IdentityViolated, ObjectMismatch):
            return False

    def equals(self, other: "ChainMap") -> bool:
        return all(self.at(n) == other.at(n) for n in _span(self.src, self.tgt, other.src, other.tgt))

    def is_zero(self) -> bool:
        return all(self.cat.is_zero(self.at(n)) for n in self.degrees())

    def phi(self, power: int = 1) -> "ChainMap":
        cat = self.cat
        return ChainMap(self.src.phi(power), self.tgt.phi(power), {n: cat.phi(power, f) for n, f in self.comps.items()})


@dataclass(frozen=True, eq=False)
class ChainHomotopy:
    """``h_n: C_n -> D_{n+1}`` with ``d h + h d = g - f``."""

    f: ChainMap
    g: ChainMap
    comps: dict = field(default_factory=dict)

    @property
    def src(self) -> ChainComplex:
        return self.f.src

    @property
    def tgt(self) -> ChainComplex:
        return self.f.tgt

    @property
    def cat(self) -> Category:
        return self.src.cat

    def at(self, n: int):
        h = self.comps.get(n)
        if h is None:
            return self.cat.zero(self.src.obj(n), self.tgt.obj(n + 1))
        return h

    def boundary(self, n: int):
        """``d_{n+1} h_n + h_{n-1} c_n``."""
        cat = self.cat
        return cat.add(cat.compose(self.tgt.d(n + 1), self.at(n)), cat.compose(self.at(n - 1), self.src.d(n)))

    def verify(self) -> None:
        cat = self.cat
        for n in _span(self.src, self.tgt):
            h = self.at(n)
            if not cat.obj_equal(cat.src(h), self.src.obj(n)) or not cat.obj_equal(cat.tgt(h), self.tgt.obj(n + 1)):
                raise ObjectMismatch(f"homotopy component in degree {n} has wrong ends")
            if self.boundary(n) != cat.sub(self.g.at(n), self.f.at(n)):
                raise NotAHomotopy(f"d h + h d != g - f in degree {n}")

    def is_valid(self) -> bool:
        try:
            self.verify()
            return True
        except (NotAHomotopy, ObjectMismatch):
            return False


@dataclass(frozen=True, eq=False)
class Contraction:
    C: ChainComplex
    comps: dict = field(default_factory=dict)

    def at(self, n: int):
        g = self.comps.get(n)
        if g is None:
            return self.C.cat.zero(self.C.obj(n), self.C.obj(n + 1))
        return g

    @property
    def homotopy(self) -> ChainHomotopy:
        return ChainHomotopy(zero_map(self.C, self.C), identity_map(self.C), self.comps)

    def verify(self) -> None:
        try:
            self.homotopy.verify()
        except NotAHomotopy as e:
            raise NotAContraction(str(e)) from e

    def is_valid(self) -> bool:
        try:
            self.verify()
            return True
        except (NotAContraction, ObjectMismatch):
            return False


# ---------------------------------------------------------------- map algebra

def zero_map(C: ChainComplex, D: ChainComplex) -> ChainMap:
    return ChainMap(C, D, {})


def identity_map(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, {n: C.cat.identity(C.obj(n)) for n in C.degrees()})


def compose_maps(*fs: ChainMap) -> ChainMap:
    """Right to left: ``compose_maps(g, f) = g o f``."""
    out = fs[-1]
    for g in reversed(fs[:-1]):
        cat = out.cat
        comps = {n: cat.compose(g.at(n), out.at(n)) for n in _span(out.src, g.tgt)}
        out = ChainMap(out.src, g.tgt, comps)
    return out


def add_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    cat = f.cat
    return ChainMap(f.src, f.tgt, {n: cat.add(f.at(n), g.at(n)) for n in f.degrees()})


def neg_map(f: ChainMap) -> ChainMap:
    return ChainMap(f.src, f.tgt, {n: f.cat.neg(c) for n, c in f.comps.items()})


def sub_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    return add_maps(f, neg_map(g))


def null_homotopy_boundary(C: ChainComplex, D: ChainComplex, h: dict) -> ChainMap:
    """The chain map ``d h + h d`` for a degree-one family ``h``."""
    H = ChainHomotopy(zero_map(C, D), zero_map(C, D), h)
    return ChainMap(C, D, {n: H.boundary(n) for n in _span(C, D)})


def compose_homotopy_left(g: ChainMap, h: ChainHomotopy) -> ChainHomotopy:
    """``g o h``: a homotopy from ``g f`` to ``g f'``."""
    cat = g.cat
    return ChainHomotopy(compose_maps(g, h.f), compose_maps(g, h.g), {n: cat.compose(g.at(n + 1), h.at(n)) for n in _span(h.src, h.tgt)})


def compose_homotopy_right(h: ChainHomotopy, f: ChainMap) -> ChainHomotopy:
    """``h o f``."""
    cat = f.cat
    return ChainHomotopy(compose_maps(h.f, f), compose_maps(h.g, f), {n: cat.compose(h.at(n), f.at(n)) for n in _span(f.src, f.tgt)})


def add_homotopies(h: ChainHomotopy, k: ChainHomotopy) -> ChainHomotopy:
    """If ``h: f ~ g`` and ``k: f' ~ g'`` then ``h + k: f + f' ~ g + g'``."""
    cat = h.cat
    return ChainHomotopy(add_maps(h.f, k.f), add_maps(h.g, k.g), {n: cat.add(h.at(n), k.at(n)) for n in _span(h.src, h.tgt)})


def neg_homotopy(h: ChainHomotopy) -> ChainHomotopy:
    return ChainHomotopy(neg_map(h.f), neg_map(h.g), {n: h.cat.neg(c) for n, c in h.comps.items()})


def reverse_homotopy(h: ChainHomotopy) -> ChainHomotopy:
    """``-h`` read as a homotopy from ``g`` to ``f``."""
    return ChainHomotopy(h.g, h.f, {n: h.cat.neg(c) for n, c in h.comps.items()})


# ---------------------------------------------------------------- direct sums

@dataclass(frozen=True, eq=False)
class ComplexSum:
    total: ChainComplex
    parts: tuple
    injections: tuple
    projections: tuple


def direct_sum_complex(cat: Category, parts: Sequence[ChainComplex]) -> ComplexSum:
    parts = tuple(parts)
    span = _span(*parts)
    if not len(span):
        Z = ChainComplex.zero(cat)
        return ComplexSum(Z, parts, tuple(zero_map(P, Z) for P in parts), tuple(zero_map(Z, P) for P in parts))
    objs, diffs = [], {}
    sums = {}
    for n in list(span) + [span.start - 1]:
        sums[n] = cat.direct_sum([P.obj(n) for P in parts])
    for n in span:
        objs.append(sums[n].obj)
        diffs[n] = cat.diag([P.d(n) for P in parts], [P.obj(n - 1) for P in parts], [P.obj(n) for P in parts])
    total = ChainComplex.make(cat, span.start, objs, {n: diffs[n] for n in span if n > span.start}, check=False)
    injs = tuple(ChainMap(P, total, {n: sums[n].injections[k] for n in span}) for k, P in enumerate(parts))
    projs = tuple(ChainMap(total, P, {n: sums[n].projections[k] for n in span}) for k, P in enumerate(parts))
    return ComplexSum(total, parts, injs, projs)


def direct_sum_maps(fs: Sequence[ChainMap]) -> ChainMap:
    """Block-diagonal ``(+) f_k: (+) C_k -> (+) D_k``."""
    cat = fs[0].cat
    S = direct_sum_complex(cat, [f.src for f in fs]).total
    T = direct_sum_complex(cat, [f.tgt for f in fs]).total
    comps = {}
    for n in _span(S, T):
        comps[n] = cat.diag([f.at(n) for f in fs], [f.tgt.obj(n) for f in fs], [f.src.obj(n) for f in fs])
    return ChainMap(S, T, comps)


def direct_sum_homotopies(hs: Sequence[ChainHomotopy]) -> ChainHomotopy:
    cat = hs[0].cat
    f = direct_sum_maps([h.f for h in hs])
    g = direct_sum_maps([h.g for h in hs])
    comps = {}
    for n in _span(f.src, f.tgt):
        comps[n] = cat.diag([h.at(n) for h in hs], [h.tgt.obj(n + 1) for h in hs], [h.src.obj(n) for h in hs])
    return ChainHomotopy(f, g, comps)


def direct_sum_contractions(gs: Sequence[Contraction]) -> Contraction:
    H = direct_sum_homotopies([g.homotopy for g in gs])
    return Contraction(H.src, H.comps)


def transport_contraction(gamma: Contraction, iso: ChainMap, inv: ChainMap) -> Contraction:
    """Contraction of ``iso.tgt`` from one of ``iso.src``: ``iso o gamma o inv``."""
    cat = iso.cat
    D = iso.tgt
    return Contraction(D, {n: cat.comp(iso.at(n + 1), gamma.at(n), inv.at(n)) for n in D.degrees()})


def restrict_contraction(gamma: Contraction, inc: ChainMap, pr: ChainMap) -> Contraction:
    """Contraction of a chain-level retract ``pr o inc = id``: ``pr o gamma o inc``."""
    cat = inc.cat
    C = inc.src
    return Contraction(C, {n: cat.comp(pr.at(n + 1), gamma.at(n), inc.at(n)) for n in C.degrees()})


# ---------------------------------------------------------------- cylinder, cone, suspension

@dataclass(frozen=True, eq=False)
class Cylinder:
    f: ChainMap
    complex: ChainComplex
    i_C: ChainMap
    i_D: ChainMap
    pr: ChainMap
    h: ChainHomotopy  # from id to i_D o pr


def cyl(f: ChainMap) -> Cylinder:
    """Mapping cylinder with degree ``n`` object ``C_{n-1} + C_n + D_n``."""
    C, D = f.src, f.tgt
    cat = f.cat
    if C.is_empty and D.is_empty:
        Z = ChainComplex.zero(cat)
        return Cylinder(f, Z, zero_map(C, Z), zero_map(D, Z), zero_map(Z, D), ChainHomotopy(identity_map(Z), zero_map(Z, Z), {}))
    ends = ([C.lo, C.hi + 1] if not C.is_empty else []) + ([D.lo, D.hi] if not D.is_empty else [])
    lo, hi = min(ends), max(ends)
    parts = lambda n: [C.obj(n - 1), C.obj(n), D.obj(n)]
    objs = [cat.direct_sum(parts(n)).obj for n in range(lo, hi + 1)]
    diffs = {}
    for n in range(lo + 1, hi + 1):
        grid = [
            [cat.neg(C.d(n - 1)), None, None],
            [cat.neg(cat.identity(C.obj(n - 1))), C.d(n), None],
            [f.at(n - 1), None, D.d(n)],
        ]
        diffs[n] = cat.block(grid, parts(n - 1), parts(n))
    Z = ChainComplex.make(cat, lo, objs, diffs)
    iC, iD, pr, h = {}, {}, {}, {}
    for n in range(lo - 1, hi + 2):
        P = parts(n)
        iC[n] = cat.block([[None], [cat.identity(C.obj(n))], [None]], P, [C.obj(n)])
        iD[n] = cat.block([[None], [None], [cat.identity(D.obj(n))]], P, [D.obj(n)])
        pr[n] = cat.block([[None, f.at(n), cat.identity(D.obj(n))]], [D.obj(n)], P)
        h[n] = cat.block([[None, cat.identity(C.obj(n)), None], [None, None, None], [None, None, None]], parts(n + 1), P)
    i_C = ChainMap(C, Z, {n: iC[n] for n in _span(C, Z)})
    i_D = ChainMap(D, Z, {n: iD[n] for n in _span(D, Z)})
    p = ChainMap(Z, D, {n: pr[n] for n in _span(Z, D)})
    H = ChainHomotopy(identity_map(Z), compose_maps(i_D, p), {n: h[n] for n in Z.degrees()})
    for name, m in (("i_C", i_C), ("i_D", i_D), ("pr", p)):
        try:
            m.verify()
        except IdentityViolated as e:
            raise IdentityViolated(f"{name} is a chain map", e.location) from e
    if not compose_maps(p, i_D).equals(identity_map(D)):
        raise IdentityViolated("pr o i_D = id")
    if not compose_maps(p, i_C).equals(f):
        raise IdentityViolated("pr o i_C = f")
    try:
        H.verify()
    except NotAHomotopy as e:
        raise IdentityViolated("d h + h d = i_D pr - id") from e
    return Cylinder(f, Z, i_C, i_D, p, H)


def cyl_projection_homotopy(f: ChainMap) -> tuple[ChainMap, ChainHomotopy]:
    """``pr(D): cyl(f) -> D`` and the homotopy ``id ~ i(D) o pr(D)``, both verified."""
    Y = cyl(f)
    return Y.pr, Y.h


@dataclass(frozen=True, eq=False)
class Cone:
    f: ChainMap
    complex: ChainComplex
    incl: ChainMap  # D -> cone(f)
    proj: ChainMap  # cone(f) -> Sigma C


def _cone_range(C: ChainComplex, D: ChainComplex) -> range:
    ends = []
    if not C.is_empty:
        ends += [C.lo + 1, C.hi + 1]
    if not D.is_empty:
        ends += [D.lo, D.hi]
    return range(min(ends), max(ends) + 1) if ends else range(0)


def cone(f: ChainMap) -> Cone:
    """Mapping cone: degree ``n`` object ``C_{n-1} + D_n``, differential ``[[-c, 0], [f, d]]``."""
    C, D = f.src, f.tgt
    cat = f.cat
    rng = _cone_range(C, D)
    S = suspension(C, 1)
    if not len(rng):
        Z = ChainComplex.zero(cat)
        return Cone(f, Z, zero_map(D, Z), zero_map(Z, S))
    parts = lambda n: [C.obj(n - 1), D.obj(n)]
    objs = [cat.direct_sum(parts(n)).obj for n in rng]
    diffs = {}
    for n in rng:
        if n == rng.start:
            continue
        grid = [[cat.neg(C.d(n - 1)), None], [f.at(n - 1), D.d(n)]]
        diffs[n] = cat.block(grid, parts(n - 1), parts(n))
    K = ChainComplex.make(cat, rng.start, objs, diffs)
    incl = ChainMap(D, K, {n: cat.block([[None], [cat.identity(D.obj(n))]], parts(n), [D.obj(n)]) for n in _span(D, K)})
    proj = ChainMap(K, S, {n: cat.block([[cat.identity(C.obj(n - 1)), None]], [C.obj(n - 1)], parts(n)) for n in _span(K, S)})
    incl.verify()
    proj.verify()
    return Cone(f, K, incl, proj)


def cone_of_complex(C: ChainComplex) -> Cone:
    return cone(identity_map(C))


def suspension(C: ChainComplex, shift: int = 1) -> ChainComplex:
    """``Sigma^k C``: degrees shift by ``k`` and the differential picks up ``(-1)^k``."""
    cat = C.cat
    if C.is_empty:
        return C
    sign = shift % 2 == 1
    diffs = tuple(cat.neg(d) if sign else d for d in C.diffs)
    return ChainComplex(cat, C.lo + shift, C.objs, diffs)


def suspend_map(f: ChainMap, shift: int = 1) -> ChainMap:
    return ChainMap(suspension(f.src, shift), suspension(f.tgt, shift), {n + shift: c for n, c in f.comps.items()})


def el(cat: Category, X, d: int) -> ChainComplex:
    """``el(X, d)``: ``X`` in degrees ``d`` and ``d+1`` with identity differential."""
    return ChainComplex.make(cat, d, [X, X], {d + 1: cat.identity(X)})


def el_contraction(E: ChainComplex) -> Contraction:
    """Canonical contraction of ``el(X, d)``: the identity ``X_d -> X_{d+1}``."""
    cat = E.cat
    if E.is_empty:
        return Contraction(E, {})
    d = E.lo
    return Contraction(E, {d: cat.identity(E.obj(d))})


def elementary_sum(cat: Category, pieces: Sequence[tuple]) -> ComplexSum:
    """``(+) el(X, d)`` over ``pieces = [(X, d), ...]``."""
    return direct_sum_complex(cat, [el(cat, X, d) for X, d in pieces])


# ---------------------------------------------------------------- short exact sequences

@dataclass(frozen=True, eq=False)
class SplitSES:
    """``0 -> C -i-> D -p-> E -> 0`` with degreewise ``r i = id``, ``p t = id``, ``i r + t p = id``."""

    i: ChainMap
    p: ChainMap
    r: dict
    t: dict

    @property
    def C(self) -> ChainComplex:
        return self.i.src

    @property
    def D(self) -> ChainComplex:
        return self.i.tgt

    @property
    def E(self) -> ChainComplex:
        return self.p.tgt

    @property
    def cat(self) -> Category:
        return self.i.cat

    def r_at(self, n):
        r = self.r.get(n)
        return self.cat.zero(self.D.obj(n), self.C.obj(n)) if r is None else r

    def t_at(self, n):
        t = self.t.get(n)
        return self.cat.zero(self.E.obj(n), self.D.obj(n)) if t is None else t

    def verify(self) -> None:
        cat = self.cat
        self.i.verify()
        self.p.verify()
        for n in _span(self.C, self.D, self.E):
            i, p, r, t = self.i.at(n), self.p.at(n), self.r_at(n), self.t_at(n)
            if not cat.is_zero(cat.compose(p, i)):
                raise NotASplitting(f"p o i != 0 in degree {n}")
            if cat.compose(r, i) != cat.identity(self.C.obj(n)):
                raise NotASplitting(f"r o i != id in degree {n}")
            if cat.compose(p, t) != cat.identity(self.E.obj(n)):
                raise NotASplitting(f"p o t != id in degree {n}")
            if cat.add(cat.compose(i, r), cat.compose(t, p)) != cat.identity(self.D.obj(n)):
                raise NotASplitting(f"i r + t p != id in degree {n}")


def cylinder_sequences(f: ChainMap) -> tuple[SplitSES, SplitSES, SplitSES]:
    """The three split sequences ``C -> cyl -> cone(f)``, ``D -> cyl -> cone(C)``, ``D -> cone(f) -> Sigma C``."""
    C, D = f.src, f.tgt
    cat = f.cat
    Y = cyl(f)
    K = cone(f)
    KC = cone_of_complex(C).complex
    SC = suspension(C, 1)
    P3 = lambda n: [C.obj(n - 1), C.obj(n), D.obj(n)]
    P2 = lambda n: [C.obj(n - 1), D.obj(n)]
    PC = lambda n: [C.obj(n - 1), C.obj(n)]
    I = lambda A: cat.identity(A)
    rng1 = _span(C, Y.complex, K.complex)
    p1 = ChainMap(Y.complex, K.complex, {n: cat.block([[I(C.obj(n - 1)), None, None], [None, None, I(D.obj(n))]], P2(n), P3(n)) for n in rng1})
    t1 = {n: cat.block([[I(C.obj(n - 1)), None], [None, None], [None, I(D.obj(n))]], P3(n), P2(n)) for n in rng1}
    r1 = {n: cat.block([[None, I(C.obj(n)), None]], [C.obj(n)], P3(n)) for n in rng1}
    s1 = SplitSES(Y.i_C, p1, r1, t1)
    rng2 = _span(D, Y.complex, KC)
    p2 = ChainMap(Y.complex, KC, {n: cat.block([[cat.neg(I(C.obj(n - 1))), None, None], [None, I(C.obj(n)), None]], PC(n), P3(n)) for n in rng2})
    t2 = {n: cat.block([[cat.neg(I(C.obj(n - 1))), None], [None, I(C.obj(n))], [None, None]], P3(n), PC(n)) for n in rng2}
    r2 = {n: cat.block([[None, None, I(D.obj(n))]], [D.obj(n)], P3(n)) for n in rng2}
    s2 = SplitSES(Y.i_D, p2, r2, t2)
    rng3 = _span(D, K.complex, SC)
    t3 = {n: cat.block([[I(C.obj(n - 1))], [None]], P2(n), [C.obj(n - 1)]) for n in rng3}
    r3 = {n: cat.block([[None, I(D.obj(n))]], [D.obj(n)], P2(n)) for n in rng3}
    s3 = SplitSES(K.incl, K.proj, r3, t3)
    for s in (s1, s2, s3):
        s.verify()
    return s1, s2, s3


# ---------------------------------------------------------------- maps between cones and cylinders

def cone_functorial(f: ChainMap, f2: ChainMap, u: ChainMap, v: ChainMap, h: dict) -> ChainMap:
    """Chain map ``cone(f) -> cone(f2)`` with blocks ``[[u, 0], [h, v]]``.

    ``h`` must satisfy ``d' h + h c = v f - f2 u``, i.e. be a homotopy from
    ``f2 o u`` to ``v o f``.
    """
    H = ChainHomotopy(compose_maps(f2, u), compose_maps(v, f), h)
    try:
        H.verify()
    except NotAHomotopy as e:
        raise NotAHomotopy(f"cone_functorial: {e}") from e
    cat = f.cat
    C, D, C2, D2 = f.src, f.tgt, f2.src, f2.tgt
    K, K2 = cone(f).complex, cone(f2).complex
    comps = {}
    for n in _span(K, K2):
        comps[n] = cat.block([[u.at(n - 1), None], [H.at(n - 1), v.at(n)]], [C2.obj(n - 1), D2.obj(n)], [C.obj(n - 1), D.obj(n)])
    g = ChainMap(K, K2, comps)
    g.verify()
    return g


@dataclass(frozen=True, eq=False)
class ConeMapData:
    u: ChainMap
    v: ChainMap
    h: dict
    w: dict
    square_certified: bool


def cone_map_extract(f: ChainMap, f2: ChainMap, g: ChainMap) -> ConeMapData:
    """Read ``(u, v, h, w)`` off a chain map ``cone(f) -> cone(f2)`` in block form."""
    cat = f.cat
    C, D, C2, D2 = f.src, f.tgt, f2.src, f2.tgt
    tg = lambda n: [C2.obj(n - 1), D2.obj(n)]
    sg = lambda n: [C.obj(n - 1), D.obj(n)]
    u, v, h, w = {}, {}, {}, {}
    for n in _span(g.src, g.tgt):
        m = g.at(n)
        u[n - 1] = cat.entry(m, tg(n), sg(n), 0, 0)
        w[n] = cat.entry(m, tg(n), sg(n), 0, 1)
        h[n - 1] = cat.entry(m, tg(n), sg(n), 1, 0)
        v[n] = cat.entry(m, tg(n), sg(n), 1, 1)
    U = ChainMap(C, C2, {n: x for n, x in u.items() if n in _span(C, C2)})
    V = ChainMap(D, D2, {n: x for n, x in v.items() if n in _span(D, D2)})
    ok = all(cat.is_zero(x) for x in w.values()) and U.is_chain_map() and V.is_chain_map()
    if ok:
        ok = ChainHomotopy(compose_maps(f2, U), compose_maps(V, f), h).is_valid()
    return ConeMapData(U, V, h, w, ok)


def cyl_corestriction(f: ChainMap, u: ChainMap, v: ChainMap, h: dict) -> ChainMap:
    """``F = (h_{n-1}, u_n, v_n): cyl(f) -> E`` for ``h`` a homotopy from ``u`` to ``v o f``."""
    H = ChainHomotopy(u, compose_maps(v, f), h)
    try:
        H.verify()
    except NotAHomotopy as e:
        raise NotAHomotopy(f"cyl_corestriction: {e}") from e
    cat = f.cat
    C, D, E = f.src, f.tgt, u.tgt
    Y = cyl(f)
    comps = {}
    for n in _span(Y.complex, E):
        comps[n] = cat.block([[H.at(n - 1), u.at(n), v.at(n)]], [E.obj(n)], [C.obj(n - 1), C.obj(n), D.obj(n)])
    F = ChainMap(Y.complex, E, comps)
    F.verify()
    if not compose_maps(F, Y.i_C).equals(u) or not compose_maps(F, Y.i_D).equals(v):
        raise IdentityViolated("F o i_C = u and F o i_D = v")
    return F


def cyl_decorestriction(f: ChainMap, F: ChainMap) -> tuple[ChainMap, ChainMap, ChainHomotopy]:
    """Converse: a chain map out of ``cyl(f)`` yields ``u``, ``v`` and a homotopy ``u ~ v o f``."""
    cat = f.cat
    Y = cyl(f)
    u = compose_maps(F, Y.i_C)
    v = compose_maps(F, Y.i_D)
    C, D, E = f.src, f.tgt, F.tgt
    h = {}
    for n in _span(Y.complex, E):
        h[n - 1] = cat.entry(F.at(n), [E.obj(n)], [C.obj(n - 1), C.obj(n), D.obj(n)], 0, 0)
    H = ChainHomotopy(u, compose_maps(v, f), h)
    H.verify()
    return u, v, H


# ---------------------------------------------------------------- splittings and two-of-three

@dataclass(frozen=True, eq=False)
class Splitting:
    s: ChainMap  # E -> D with p s = id
    iso: ChainMap  # C + E -> D
    inv: ChainMap  # D -> C + E
    rho: ChainMap  # D -> C, first component of inv


def splitting_from_contraction(ses: SplitSES, gamma: Contraction) -> Splitting:
    """Chain section ``s_n = d t gamma + t gamma e`` of ``p`` and the resulting ``C + E = D``."""
    ses.verify()
    gamma.verify()
    cat = ses.cat
    C, D, E = ses.C, ses.D, ses.E
    s = {}
    for n in _span(E, D):
        a = cat.comp(D.d(n + 1), ses.t_at(n + 1), gamma.at(n))
        b = cat.comp(ses.t_at(n), gamma.at(n - 1), E.d(n))
        s[n] = cat.add(a, b)
    S = ChainMap(E, D, s)
    try:
        S.verify()
    except IdentityViolated as e:
        raise IdentityViolated("s is a chain map", e.location) from e
    if not compose_maps(ses.p, S).equals(identity_map(E)):
        raise IdentityViolated("p o s = id")
    CE = direct_sum_complex(cat, [C, E])
    iso = ChainMap(CE.total, D, {n: cat.block([[ses.i.at(n), S.at(n)]], [D.obj(n)], [C.obj(n), E.obj(n)]) for n in _span(CE.total, D)})
    rho = {}
    for n in _span(D, C):
        rho[n] = cat.compose(ses.r_at(n), cat.sub(cat.identity(D.obj(n)), cat.compose(S.at(n), ses.p.at(n))))
    Rho = ChainMap(D, C, rho)
    inv = ChainMap(D, CE.total, {n: cat.block([[Rho.at(n)], [ses.p.at(n)]], [C.obj(n), E.obj(n)], [D.obj(n)]) for n in _span(D, CE.total)})
    iso.verify()
    inv.verify()
    if not compose_maps(iso, inv).equals(identity_map(D)) or not compose_maps(inv, iso).equals(identity_map(CE.total)):
        raise IdentityViolated("i + s is an isomorphism")
    return Splitting(S, iso, inv, Rho)


def two_of_three(ses: SplitSES, gC: Optional[Contraction] = None, gD: Optional[Contraction] = None, gE: Optional[Contraction] = None) -> Contraction:
    """Given contractions of two terms of a split sequence, contract the third."""
    cat = ses.cat
    C, D, E = ses.C, ses.D, ses.E
    given = sum(x is not None for x in (gC, gD, gE))
    if given < 2:
        raise ValueError("need contractions of two of the three terms")
    if gD is None:
        sp = splitting_from_contraction(ses, gE)
        both = direct_sum_contractions([gC, gE])
        out = transport_contraction(both, sp.iso, sp.inv)
    elif gC is None:
        sp = splitting_from_contraction(ses, gE)
        out = Contraction(C, {n: cat.comp(sp.rho.at(n + 1), gD.at(n), ses.i.at(n)) for n in C.degrees()})
    else:
        # gamma_E = p gamma_D (t + k delta) with k = gamma_D i - i gamma_C, delta = r (d t - t e)
        out_c = {}
        for n in E.degrees():
            delta = cat.compose(ses.r_at(n - 1), cat.sub(cat.compose(D.d(n), ses.t_at(n)), cat.compose(ses.t_at(n - 1), E.d(n))))
            k = cat.sub(cat.compose(gD.at(n - 1), ses.i.at(n - 1)), cat.compose(ses.i.at(n), gC.at(n - 1)))
            inner = cat.add(ses.t_at(n), cat.compose(k, delta))
            out_c[n] = cat.comp(ses.p.at(n + 1), gD.at(n), inner)
        out = Contraction(E, out_c)
    out.verify()
    return out


# ---------------------------------------------------------------- elementary decomposition

@dataclass(frozen=True, eq=False)
class ElementaryDecomposition:
    X: tuple  # ((object, degree), ...)
    Xprime: tuple
    iso: ChainMap  # C + X' -> X
    inv: ChainMap


def _elementary_step(C: ChainComplex, gamma: Contraction):
    """``C + el(C_a, a+1) = el(C_a, a) + D`` with ``D`` in degrees ``[a+1, b]``."""
    cat = C.cat
    a, b = C.lo, C.hi
    Ca = C.obj(a)
    g = gamma.at(a)
    I = lambda A: cat.identity(A)
    Dobjs = [C.obj(a + 1), cat.direct_sum([Ca, C.obj(a + 2)]).obj] + [C.obj(n) for n in range(a + 3, b + 1)]
    Ddiffs = {a + 2: cat.block([[g, C.d(a + 2)]], [C.obj(a + 1)], [Ca, C.obj(a + 2)])}
    if b >= a + 3:
        Ddiffs[a + 3] = cat.block([[None], [C.d(a + 3)]], [Ca, C.obj(a + 2)], [C.obj(a + 3)])
    for n in range(a + 4, b + 1):
        Ddiffs[n] = C.d(n)
    D = ChainComplex.make(cat, a + 1, Dobjs[: b - a], Ddiffs)
    L = direct_sum_complex(cat, [C, el(cat, Ca, a + 1)])
    R = direct_sum_complex(cat, [el(cat, Ca, a), D])
    psi, psi_inv = {}, {}
    for n in _span(L.total, R.total):
        if n == a:
            psi[n] = cat.block([[I(Ca), None], [None, None]], [Ca, D.obj(a)], [Ca, cat.zero_object()])
            psi_inv[n] = cat.block([[I(Ca), None], [None, None]], [Ca, cat.zero_object()], [Ca, D.obj(a)])
        elif n == a + 1:
            c = C.d(a + 1)
            src, tgt = [C.obj(a + 1), Ca], [Ca, C.obj(a + 1)]
            psi[n] = cat.block([[c, None], [I(C.obj(a + 1)), g]], tgt, src)
            gc = cat.compose(g, c)
            psi_inv[n] = cat.block([[g, cat.sub(I(C.obj(a + 1)), gc)], [cat.neg(I(Ca)), c]], src, tgt)
        elif n == a + 2:
            src, tgt = [C.obj(a + 2), Ca], [cat.zero_object(), Ca, C.obj(a + 2)]
            psi[n] = cat.block([[None, None], [None, I(Ca)], [I(C.obj(a + 2)), None]], tgt, src)
            psi_inv[n] = cat.block([[None, None, I(C.obj(a + 2))], [None, I(Ca), None]], src, tgt)
        else:
            src, tgt = [C.obj(n), cat.zero_object()], [cat.zero_object(), C.obj(n)]
            psi[n] = cat.block([[None, None], [I(C.obj(n)), None]], tgt, src)
            psi_inv[n] = cat.block([[None, I(C.obj(n))], [None, None]], src, tgt)
    Psi = ChainMap(L.total, R.total, psi)
    Psi_inv = ChainMap(R.total, L.total, psi_inv)
    Psi.verify()
    Psi_inv.verify()
    if not compose_maps(Psi, Psi_inv).equals(identity_map(R.total)) or not compose_maps(Psi_inv, Psi).equals(identity_map(L.total)):
        raise IdentityViolated("elementary step is an isomorphism")
    gL = direct_sum_contractions([gamma, el_contraction(el(cat, Ca, a + 1))])
    gR = transport_contraction(gL, Psi, Psi_inv)
    gD = restrict_contraction(gR, R.injections[1], R.projections[1])
    gD.verify()
    return D, gD, Psi, Psi_inv


def elementary_decomposition(C: ChainComplex, gamma: Contraction) -> ElementaryDecomposition:
    """Elementary ``X``, ``X'`` and a chain isomorphism ``C + X' = X``."""
    gamma.verify()
    cat = C.cat
    T = C.trimmed()
    if T.is_empty:
        Z = ChainComplex.zero(cat)
        CX = direct_sum_complex(cat, [C, Z]).total
        XX = direct_sum_complex(cat, []).total
        return ElementaryDecomposition((), (), zero_map(CX, XX), zero_map(XX, CX))
    if T.lo != C.lo or T.hi != C.hi:
        sub = elementary_decomposition(T, Contraction(T, {n: gamma.at(n) for n in T.degrees()}))
        CX = direct_sum_complex(cat, [C, elementary_sum(cat, sub.Xprime).total]).total
        X_c = elementary_sum(cat, sub.X).total
        return ElementaryDecomposition(sub.X, sub.Xprime, _reassociate(sub.iso, CX, X_c), _reassociate(sub.inv, X_c, CX))
    a, b = C.lo, C.hi
    if b == a:
        raise NotAContraction("a nonzero complex concentrated in one degree is not contractible")
    if b == a + 1:
        X1 = C.obj(b)
        Xc = elementary_sum(cat, [(X1, a)]).total
        CX = direct_sum_complex(cat, [C, elementary_sum(cat, []).total]).total
        iso = ChainMap(CX, Xc, {b: cat.identity(X1), a: gamma.at(a)})
        inv = ChainMap(Xc, CX, {b: cat.identity(X1), a: C.d(b)})
        _check_iso(iso, inv)
        return ElementaryDecomposition(((X1, a),), (), iso, inv)
    D, gD, Psi, Psi_inv = _elementary_step(C, gamma)
    sub = elementary_decomposition(D, gD)
    Ca = C.obj(a)
    X = ((Ca, a),) + sub.X
    Xp = ((Ca, a + 1),) + sub.Xprime
    # C + el(C_a, a+1) + Y'  ->  el(C_a, a) + D + Y'  ->  el(C_a, a) + Y
    Yp = elementary_sum(cat, sub.Xprime).total
    Xp_c = elementary_sum(cat, Xp).total
    X_c = elementary_sum(cat, X).total
    left = direct_sum_complex(cat, [C, Xp_c]).total
    mid = direct_sum_complex(cat, [el(cat, Ca, a), D, Yp]).total
    step1 = _reassociate(direct_sum_maps([Psi, identity_map(Yp)]), left, mid)
    DY = direct_sum_complex(cat, [D, Yp]).total
    iso_D = _reassociate(sub.iso, DY, elementary_sum(cat, sub.X).total)
    step2 = _reassociate(direct_sum_maps([identity_map(el(cat, Ca, a)), iso_D]), mid, X_c)
    iso = compose_maps(step2, step1)
    inv1 = _reassociate(direct_sum_maps([Psi_inv, identity_map(Yp)]), mid, left)
    inv_D = _reassociate(sub.inv, elementary_sum(cat, sub.X).total, DY)
    inv2 = _reassociate(direct_sum_maps([identity_map(el(cat, Ca, a)), inv_D]), X_c, mid)
    inv = compose_maps(inv1, inv2)
    _check_iso(iso, inv)
    return ElementaryDecomposition(X, Xp, iso, inv)


def _reassociate(f: ChainMap, src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    """Re-read ``f`` between identically laid out sums (matrix data is unchanged)."""
    cat = f.cat
    comps = {}
    for n in _span(src, tgt):
        m = f.at(n)
        if not (cat.obj_equal(cat.src(m), src.obj(n)) and cat.obj_equal(cat.tgt(m), tgt.obj(n))):
            raise ObjectMismatch(f"direct sums are not laid out identically in degree {n}")
        comps[n] = m
    return ChainMap(src, tgt, comps)


def _check_iso(iso: ChainMap, inv: ChainMap) -> None:
    iso.verify()
    inv.verify()
    if not compose_maps(iso, inv).equals(identity_map(iso.tgt)) or not compose_maps(inv, iso).equals(identity_map(iso.src)):
        raise IdentityViolated("decomposition map is an isomorphism")


# ---------------------------------------------------------------- cone contractions and homotopy inverses

@dataclass(frozen=True, eq=False)
class HomotopyInverse:
    g: ChainMap
    h_src: ChainHomotopy  # id_C ~ g o f
    h_tgt: ChainHomotopy  # f o g ~ id_D


def inverse_from_cone_contraction(f: ChainMap, gamma: Contraction) -> HomotopyInverse:
    """Read a homotopy inverse off a contraction of ``cone(f)``.

    Writing ``gamma = [[a, b], [c, e]]``, the block ``b`` is a chain map
    ``D -> C``, ``a`` is a homotopy ``id ~ b f`` and ``e`` one from ``f b`` to ``id``.
    """
    gamma.verify()
    cat = f.cat
    C, D = f.src, f.tgt
    K = gamma.C
    src = lambda n: [C.obj(n - 1), D.obj(n)]
    g, a, e = {}, {}, {}
    for n in _span(K, C, D):
        m = gamma.at(n)  # cone_n -> cone_{n+1}
        a[n - 1] = cat.entry(m, src(n + 1), src(n), 0, 0)
        g[n] = cat.entry(m, src(n + 1), src(n), 0, 1)
        e[n] = cat.entry(m, src(n + 1), src(n), 1, 1)
    G = ChainMap(D, C, {n: x for n, x in g.items() if n in _span(C, D)})
    G.verify()
    hC = ChainHomotopy(identity_map(C), compose_maps(G, f), {n: x for n, x in a.items() if n in C.degrees()})
    hD = ChainHomotopy(compose_maps(f, G), identity_map(D), {n: x for n, x in e.items() if n in D.degrees()})
    hC.verify()
    hD.verify()
    return HomotopyInverse(G, hC, hD)


# ---------------------------------------------------------------- cofibrations

@dataclass(frozen=True, eq=False)
class RelativeInverse:
    w: ChainMap
    h: ChainHomotopy  # v o w ~ id_D with h o j_D = 0


def htpy_equiv_rel_cofibration(
    jD: ChainMap,
    jE: ChainMap,
    v: ChainMap,
    w0: ChainMap,
    hE: ChainHomotopy,
    hD: ChainHomotopy,
    retraction: Optional[Callable] = None,
) -> RelativeInverse:
    """Homotopy inverse ``w`` of ``v`` relative to the common subcomplex.

    ``w0`` is any homotopy inverse of ``v`` with ``hE: w0 v ~ id_E`` and
    ``hD: v w0 ~ id_D``.  ``retraction(n)`` returns ``r_n`` with
    ``r_n j_D = id``; over a field or the integers it is computed.
    """
    cat = v.cat
    C, D, E = jD.src, jD.tgt, jE.tgt
    for m in (jD, jE, v, w0):
        m.verify()
    hE.verify()
    hD.verify()
    if not compose_maps(v, jE).equals(jD):
        raise BadCertificate("v o j_E != j_D")
    if not (hE.f.equals(compose_maps(w0, v)) and hE.g.equals(identity_map(E))):
        raise BadCertificate("hE must be a homotopy from w0 v to id")
    if not (hD.f.equals(compose_maps(v, w0)) and hD.g.equals(identity_map(D))):
        raise BadCertificate("hD must be a homotopy from v w0 to id")
    r = {}
    for n in C.degrees():
        rn = retraction(n) if retraction else _left_inverse(cat, jD.at(n))
        if rn is None or cat.compose(rn, jD.at(n)) != cat.identity(C.obj(n)):
            raise NotACofibration(f"j_D is not split injective in degree {n}")
        r[n] = rn
    for n in C.degrees():
        if _left_inverse(cat, jE.at(n)) is None and retraction is None:
            raise NotACofibration(f"j_E is not split injective in degree {n}")
    rr = lambda n: r[n] if n in r else cat.zero(D.obj(n), C.obj(n))
    # H'_n = hE_n o jE_n o r_n : D_n -> E_{n+1}
    Hp = {n: cat.comp(hE.at(n), jE.at(n), rr(n)) for n in _span(D, E)}
    Hp_at = lambda n: Hp[n] if n in Hp else cat.zero(D.obj(n), E.obj(n + 1))
    w2 = ChainMap(D, E, {n: cat.add(w0.at(n), cat.add(cat.compose(E.d(n + 1), Hp_at(n)), cat.compose(Hp_at(n - 1), D.d(n)))) for n in _span(D, E)})
    w2.verify()
    if not compose_maps(w2, jD).equals(jE):
        raise IdentityViolated("w'' o j_D = j_E")
    # h0 = hD - v H' is a homotopy from v w'' to id
    h0 = {n: cat.sub(hD.at(n), cat.compose(v.at(n + 1), Hp_at(n))) for n in D.degrees()}
    H0 = ChainHomotopy(compose_maps(v, w2), identity_map(D), h0)
    H0.verify()
    # f' = id + d h0 + h0 d fixes j_D; w = w'' f'; h = h0 f' - h0
    fp = add_maps(identity_map(D), null_homotopy_boundary(D, D, h0))
    if not compose_maps(fp, jD).equals(jD):
        raise IdentityViolated("(d h0 + h0 d) o j_D = 0")
    w = compose_maps(w2, fp)
    hh = {n: cat.sub(cat.compose(H0.at(n), fp.at(n)), H0.at(n)) for n in D.degrees()}
    H = ChainHomotopy(compose_maps(v, w), identity_map(D), hh)
    H.verify()
    if not compose_maps(w, jD).equals(jE):
        raise IdentityViolated("w o j_D = j_E")
    for n in C.degrees():
        if not cat.is_zero(cat.compose(H.at(n), jD.at(n))):
            raise IdentityViolated("h o j_D = 0", n)
    return RelativeInverse(w, H)


def _left_inverse(cat: Category, m):

    if not isinstance(cat, MatCat):
        return None
    if m.cols == 0:
        return cat.zero(cat.tgt(m), 0)
    if cat.ring.is_field:
        return rank_kernel_image(m).left_inverse
    if cat.ring.is_integers:
        S, U, V = smith_normal_form(m)
        if any(S.a[i, i] not in (1, -1) for i in range(m.cols)):
            return None
        # U m V = [I; 0]  =>  (V [I 0] U) m = id
        Vm = V @ U.rows_of(range(m.cols))
        return Vm if Vm @ m == cat.identity(m.cols) else None
    return None


def is_cofibration(f: ChainMap) -> bool:
    cat = f.cat
    return all(_left_inverse(cat, f.at(n)) is not None for n in f.src.degrees())
