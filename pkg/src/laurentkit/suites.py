"""Property suites behind ``laurentkit verify``.

A suite is a fixed corpus of degenerate cases followed by seeded random
cases.  Each case builds its inputs, runs the constructions and re-checks
every identity they promise; any exception is a failure.  Failing random
cases are shrunk by re-running the case generator at smaller sizes.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .categories import MatCat
from .chains import (
    ChainComplex,
    ChainMap,
    SplitSES,
    _check_iso,
    _span,
    compose_maps,
    cone,
    cone_map_extract,
    cyl,
    cyl_corestriction,
    cyl_decorestriction,
    cyl_projection_homotopy,
    cylinder_sequences,
    cone_functorial,
    direct_sum_complex,
    el,
    elementary_decomposition,
    identity_map,
    inverse_from_cone_contraction,
    null_homotopy_boundary,
    splitting_from_contraction,
    sub_maps,
    two_of_three,
)
from .config import Config
from .errors import IdentityViolated, LaurentKitError
from .generators import (
    random_chain_map,
    random_complex,
    random_contractible,
    random_graded,
    random_invertible_laurent,
    random_laurent,
    random_matrix,
    random_nilpotent,
    random_unimodular,
)
from .homology import HomologyWitness, contraction_search, homology_ranks, homology_z, is_quasi_isomorphism
from .laurent import LaurentCat, functor_apply
from .matrix import Matrix
from .nil import Nilpotent, NilObject, characteristic_sequence, chain_iterate, chi
from .projline import ProjLineObject, apply_objectwise, gamma_finite, t_sequence, x_complex
from .rings import RingSpec
from .serialize import Codec
from .strictify import chain_nilpotency, strictify_object

__all__ = ["SUITES", "CaseOutcome", "Report", "Size", "homotopy_nilpotent_input", "run_suite", "run_suites"]


@dataclass(frozen=True)
class Size:
    max_length: int = 4
    max_rank: int = 3


SHRINK_SIZES = (Size(1, 1), Size(2, 1), Size(2, 2), Size(3, 2), Size(3, 3), Size(4, 3))
SHRINK_TRIES = 8


@dataclass
class CaseOutcome:
    case_id: str
    ok: bool
    message: str = ""
    location: Any = None
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"case": self.case_id, "ok": self.ok}
        if not self.ok:
            out.update(message=self.message, location=self.location, counterexample=self.counterexample)
        return out


@dataclass
class Report:
    """Outcome of one suite on one ring.  ``failures`` is empty iff the run passed."""

    suite: str
    ring: str
    seed: int
    cases_run: int
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    skipped: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, include_time: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "ring": self.ring,
            "seed": self.seed,
            "cases_run": self.cases_run,
            "failures": [f.to_json() for f in sorted(self.failures, key=lambda f: f.case_id)],
        }
        if self.skipped:
            out["skipped"] = self.skipped
        if include_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out


class Ctx(dict):
    """Inputs recorded by a case, reported as its counterexample on failure."""

    def __init__(self, ring: RingSpec):
        super().__init__()
        self.codec = Codec(ring)

    def complex(self, key: str, C: ChainComplex) -> None:
        self[key] = self.codec.complex(C)

    def chain_map(self, key: str, f: ChainMap) -> None:
        self[key] = self.codec.chain_map(f)


def _check(ok: bool, name: str, where=None) -> None:
    if not ok:
        raise IdentityViolated(name, where)


def _field_or_z(ring: RingSpec) -> Optional[str]:
    return None if ring.is_field or ring.is_integers else f"{ring.label()} is neither a field nor the integers"


def _field_only(ring: RingSpec) -> Optional[str]:
    return None if ring.is_field else f"{ring.label()} is not a field"


def _any(ring: RingSpec) -> Optional[str]:
    return None


def _homology(C: ChainComplex) -> dict:
    ring = C.cat.ring
    if ring.is_integers:
        out = {n: homology_z(C, n) for n in C.degrees()}
        return {n: h for n, h in out.items() if h != (0, ())}
    return {n: r for n, r in homology_ranks(C).items() if r}


def _conjugate(rng: random.Random, D: ChainComplex) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """A complex isomorphic to ``D`` by random degreewise automorphisms, with the iso and inverse."""
    ring = D.cat.ring
    Ps = {n: random_unimodular(rng, ring, D.obj(n)) for n in D.degrees()}
    if D.is_empty:
        return D, identity_map(D), identity_map(D)
    diffs = {n: Ps[n - 1][0] @ D.d(n) @ Ps[n][1] for n in D.degrees() if n > D.lo}
    D2 = ChainComplex.make(D.cat, D.lo, list(D.objs), diffs)
    iso = ChainMap(D, D2, {n: Ps[n][0] for n in D.degrees()})
    inv = ChainMap(D2, D, {n: Ps[n][1] for n in D.degrees()})
    iso.verify()
    inv.verify()
    return D2, iso, inv


def _extension(rng: random.Random, C: ChainComplex, E: ChainComplex, twist: bool = True) -> SplitSES:
    """A degreewise split sequence ``C -> D -> E`` with a twisted differential on ``D``.

    ``D_n = C_n + E_n`` with ``d = [[c, c y - y e], [0, e]]`` for random
    ``y_n: E_n -> C_n``, then conjugated by a random automorphism.
    """
    cat = C.cat
    ring = cat.ring
    S = direct_sum_complex(cat, [C, E])
    T = S.total
    if T.is_empty:
        Z = ChainComplex.zero(cat)
        return SplitSES(ChainMap(C, Z, {}), ChainMap(Z, E, {}), {}, {})
    y = {n: random_matrix(rng, ring, C.obj(n), E.obj(n)) for n in T.degrees()}
    diffs = {}
    for n in T.degrees():
        if n == T.lo:
            continue
        x = C.d(n) @ y[n] - y[n - 1] @ E.d(n)
        diffs[n] = cat.block([[C.d(n), x], [None, E.d(n)]], [C.obj(n - 1), E.obj(n - 1)], [C.obj(n), E.obj(n)])
    D = ChainComplex.make(cat, T.lo, list(T.objs), diffs)
    i = ChainMap(C, D, {n: S.injections[0].at(n) for n in _span(C, D)})
    p = ChainMap(D, E, {n: S.projections[1].at(n) for n in _span(D, E)})
    r = {n: S.projections[0].at(n) for n in D.degrees()}
    t = {n: S.injections[1].at(n) for n in D.degrees()}
    if twist:
        D2, iso, inv = _conjugate(rng, D)
        i = compose_maps(iso, i)
        p = compose_maps(p, inv)
        r = {n: r[n] @ inv.at(n) for n in D.degrees()}
        t = {n: iso.at(n) @ t[n] for n in D.degrees()}
    ses = SplitSES(i, p, r, t)
    ses.verify()
    return ses


# ---------------------------------------------------------------- laurent

def _laurent_case(rng: random.Random, ring: RingSpec, size: Size, cfg: Config, ctx: Ctx) -> None:
    base = MatCat(ring)
    mode = rng.choice(("all", "all", "nonneg", "nonpos"))
    L = LaurentCat(base, mode)
    a, b, c, d = (rng.randint(0, size.max_rank) for _ in range(4))
    f, f2 = random_laurent(rng, L, a, b), random_laurent(rng, L, a, b)
    g, g2 = random_laurent(rng, L, b, c), random_laurent(rng, L, b, c)
    h = random_laurent(rng, L, c, d)
    ctx.update(mode=mode, f=ctx.codec.laurent(f), g=ctx.codec.laurent(g), h=ctx.codec.laurent(h))
    comp = L.compose
    _check(comp(h, comp(g, f)) == comp(comp(h, g), f), "associativity")
    _check(comp(g, L.add(f, f2)) == L.add(comp(g, f), comp(g, f2)), "left distributivity")
    _check(comp(L.add(g, g2), f) == L.add(comp(g, f), comp(g2, f)), "right distributivity")
    _check(comp(L.identity(b), f) == f and comp(f, L.identity(a)) == f, "identity laws")
    _check(L.phi(1, comp(g, f)) == comp(L.phi(1, g), L.phi(1, f)), "Phi is a functor")
    # coefficientwise composition formula
    expected: dict = {}
    for j, gj in g.coeffs:
        for i, fi in f.coeffs:
            term = gj @ fi.aut(j)
            expected[i + j] = expected[i + j] + term if i + j in expected else term
    _check(comp(g, f) == L.make(a, c, expected), "(g f)_k = sum g_j Phi^j(f_i)")
    # decisive relation (id t)(f t^0) = Phi(f) t
    u = random_matrix(rng, ring, b, a)
    full = LaurentCat(base, "all")
    lhs = full.compose(full.make(b, b, {1: Matrix.identity(ring, b)}), full.mono(u, 0))
    _check(lhs == full.make(a, b, {1: u.aut(1)}), "(id t) o (f t^0) = Phi(f) t")
    # evaluation after induction is the identity
    for side in ("+", "-"):
        _check(functor_apply("ev0" + side, base, functor_apply("i" + side, base, u)) == u, f"ev0{side} o i{side} = id")
        _check(functor_apply("ev0" + side, base, functor_apply("i" + side, base, a)) == a, f"ev0{side} o i{side} = id on objects")


def _laurent_zero(ring: RingSpec, cfg: Config, ctx: Ctx) -> None:
    L = LaurentCat(MatCat(ring), "all")
    z = L.zero(0, 0)
    _check(L.compose(z, z) == z and L.identity(0) == z, "zero object")
    _check(L.compose(L.t(0, 1), L.t(0, -1)) == L.identity(0), "t t^-1 = id on 0")


# ---------------------------------------------------------------- homotopy facts (cli name "lemma31")

def _random_pair(rng, ring, size):
    C = random_complex(rng, ring, size.max_length, size.max_rank)
    D = random_complex(rng, ring, size.max_length, size.max_rank)
    return C, D


def _equivalence_case(rng, ring, size) -> ChainMap:
    """A chain homotopy equivalence: ``C`` into ``C + contractible`` seen in random coordinates."""
    C = random_complex(rng, ring, size.max_length, size.max_rank)
    E = random_contractible(rng, ring, size.max_length, size.max_rank)
    S = direct_sum_complex(C.cat, [C, E])
    D2, iso, _ = _conjugate(rng, S.total)
    return compose_maps(iso, S.injections[0])


def _homotopy_facts_case(rng: random.Random, ring: RingSpec, size: Size, cfg: Config, ctx: Ctx) -> None:
    cat = MatCat(ring)
    C, D = _random_pair(rng, ring, size)
    f = random_chain_map(rng, C, D)
    ctx.complex("C", C)
    ctx.complex("D", D)
    ctx.chain_map("f", f)

    # three degreewise split sequences around the cylinder
    for s in cylinder_sequences(f):
        s.verify()

    # projection of the cylinder and its homotopy
    Y = cyl(f)
    pr, h = cyl_projection_homotopy(f)
    _check(compose_maps(pr, Y.i_D).equals(identity_map(D)), "pr o i_D = id")
    _check(compose_maps(pr, Y.i_C).equals(f), "pr o i_C = f")
    h.verify()
    _check(h.g.equals(compose_maps(Y.i_D, pr)), "h ends at i_D o pr")

    # maps between cones from squares commuting up to homotopy
    C3 = random_complex(rng, ring, size.max_length, size.max_rank)
    D2 = random_complex(rng, ring, size.max_length, size.max_rank)
    v = random_chain_map(rng, D, D2)
    H = random_graded(rng, C, D2)
    bd = null_homotopy_boundary(C, D2, H)
    CC = direct_sum_complex(cat, [C, C3])
    u = ChainMap(C, CC.total, {n: CC.injections[0].at(n) for n in _span(C, CC.total)})
    top = sub_maps(compose_maps(v, f), bd)
    side = random_chain_map(rng, C3, D2)
    f2 = ChainMap(CC.total, D2, {n: cat.block([[top.at(n), side.at(n)]], [D2.obj(n)], [C.obj(n), C3.obj(n)]) for n in _span(CC.total, D2)})
    f2.verify()
    g = cone_functorial(f, f2, u, v, H)
    g.verify()
    data = cone_map_extract(f, f2, g)
    _check(data.square_certified and data.u.equals(u) and data.v.equals(v), "extractor recovers (u, v, h)")
    _check(all(cat.is_zero(x) for x in data.w.values()), "extracted w vanishes")

    # maps out of the cylinder
    E = random_complex(rng, ring, size.max_length, size.max_rank)
    vE = random_chain_map(rng, D, E)
    HE = random_graded(rng, C, E)
    uE = sub_maps(compose_maps(vE, f), null_homotopy_boundary(C, E, HE))
    F = cyl_corestriction(f, uE, vE, HE)
    _check(compose_maps(F, Y.i_C).equals(uE) and compose_maps(F, Y.i_D).equals(vE), "F o i_C = u and F o i_D = v")
    u_back, v_back, h_back = cyl_decorestriction(f, F)
    _check(u_back.equals(uE) and v_back.equals(vE), "decorestriction recovers u and v")

    # f is an equivalence iff its cone is contractible
    fe = _equivalence_case(rng, ring, size) if rng.random() < 0.5 else f
    K = cone(fe).complex
    found = contraction_search(K)
    if ring.is_integers:
        oracle = not _homology(K)
    else:
        oracle = is_quasi_isomorphism(fe)
    _check(isinstance(found, HomologyWitness) != oracle, "cone contractible iff homology comparison says equivalence")
    if not isinstance(found, HomologyWitness):
        inv = inverse_from_cone_contraction(fe, found)
        inv.h_src.verify()
        inv.h_tgt.verify()

    # sections from a contraction of the quotient
    Ec = random_contractible(rng, ring, size.max_length, size.max_rank)
    ses = _extension(rng, C, Ec)
    gE = contraction_search(Ec)
    _check(not isinstance(gE, HomologyWitness), "generated contractible complex is contractible")
    sp = splitting_from_contraction(ses, gE)
    _check(compose_maps(ses.p, sp.s).equals(identity_map(Ec)), "p o s = id")

    # two out of three against contraction search
    Cq = random_contractible(rng, ring, size.max_length, size.max_rank) if rng.random() < 0.5 else C
    Eq = random_contractible(rng, ring, size.max_length, size.max_rank) if rng.random() < 0.7 else D
    ses2 = _extension(rng, Cq, Eq)
    found3 = [contraction_search(X) for X in (ses2.C, ses2.D, ses2.E)]
    gam = [None if isinstance(x, HomologyWitness) else x for x in found3]
    for miss in range(3):
        given = [gam[k] if k != miss else None for k in range(3)]
        if all(given[k] is not None for k in range(3) if k != miss):
            out = two_of_three(ses2, *given)
            out.verify()
            _check(gam[miss] is not None, "two of three: search agrees the third term is contractible", miss)

    # elementary decomposition of a contractible complex
    dec = elementary_decomposition(Ec, gE)
    _check_iso(dec.iso, dec.inv)
    Xr = _elementary_ranks(cat, dec.X)
    Xp = _elementary_ranks(cat, dec.Xprime)
    for n in set(Xr) | set(Xp) | set(Ec.degrees()):
        _check(Ec.obj(n) + Xp.get(n, 0) == Xr.get(n, 0), "rank(C) + rank(X') = rank(X)", n)


def _elementary_ranks(cat, pieces) -> dict:
    out: dict = {}
    for X, d in pieces:
        for n in (d, d + 1):
            out[n] = out.get(n, 0) + cat.rank(X)
    return out


def _homotopy_facts_zero(ring: RingSpec, cfg: Config, ctx: Ctx) -> None:
    cat = MatCat(ring)
    Z = ChainComplex.zero(cat)
    f = ChainMap(Z, Z, {})
    for s in cylinder_sequences(f):
        s.verify()
    _check(cone(f).complex.is_empty and cyl(f).complex.is_empty, "cone and cylinder of 0 -> 0 are zero")
    g = contraction_search(Z)
    _check(not isinstance(g, HomologyWitness), "zero complex is contractible")
    dec = elementary_decomposition(Z, g)
    _check(not dec.X and not dec.Xprime, "zero complex needs no elementary pieces")
    one = ChainComplex.concentrated(cat, 1, 0)
    idm = identity_map(one)
    _check(not isinstance(contraction_search(cone(idm).complex), HomologyWitness), "cone of id is contractible")
    e = el(cat, 0, 0)
    _check(e.trimmed().is_empty, "el(0, d) is zero")


# ---------------------------------------------------------------- charseq

def _charseq_check(cs, ctx: Ctx, expected_it: Callable[[int], Any]) -> None:
    cat = cs.cat
    A, w0 = cs.A, cs.w0
    ident = cat.identity
    phi1 = expected_it(1)
    for j in range(1, w0 + 1):
        for i in range(w0 + 1):
            want = cat.phi(j - 1, phi1) if i == j - 1 else (cat.neg(ident(cat.phi(j, A))) if i == j else None)
            got = cs.block("m", i, j - 1)
            _check(cat.is_zero(got) if want is None else got == want, "m block", (i, j - 1))
    for k in range(w0 + 1):
        _check(cs.block("e", 0, k) == expected_it(k), "e block is phi^(k)", k)
        want = ident(A) if k == 0 else None
        got = cs.block("gamma0", k, 0)
        _check(cat.is_zero(got) if want is None else got == want, "gamma0 block", k)
    for j in range(1, w0 + 1):
        for k in range(w0 + 1):
            got = cs.block("gamma1", j - 1, k)
            if k >= j:
                _check(got == cat.neg(cat.phi(j, expected_it(k - j))), "gamma1 block", (j - 1, k))
            else:
                _check(cat.is_zero(got), "gamma1 block vanishes below the diagonal", (j - 1, k))
    K = cs.complex
    e, m, g0, g1 = cs.e, cs.m, cs.gamma0, cs.gamma1
    _check(cat.is_zero(cat.compose(e, m)), "e o m = 0")
    _check(cat.compose(e, g0) == ident(K.obj(0)), "e gamma0 = id")
    _check(cat.add(cat.compose(g0, e), cat.compose(m, g1)) == ident(K.obj(1)), "gamma0 e + m gamma1 = id")
    _check(cat.compose(g1, m) == ident(K.obj(2)), "gamma1 m = id")
    cs.contraction.verify()
    cs.split_ses().verify()


def _base_iterate(phi: Matrix, k: int, A: int) -> Matrix:
    out = Matrix.identity(phi.ring, A)
    for j in range(k):
        out = out @ phi.aut(j)
    return out


def _charseq_case(rng: random.Random, ring: RingSpec, size: Size, cfg: Config, ctx: Ctx) -> None:
    base = MatCat(ring)
    A = rng.randint(0, size.max_rank)
    windows = cfg.windows
    w0 = windows[rng.randrange(len(windows))]
    phi = random_nilpotent(rng, ring, A)
    ctx.update(A=A, w0=w0, phi=ctx.codec.matrix(phi))
    nil = NilObject(base, A, phi, max(A, 1))
    cs = characteristic_sequence("over-base", nil, w0)
    _charseq_check(cs, ctx, lambda k: _base_iterate(phi, k, A))
    L = LaurentCat(base, "nonpos")
    cs2 = characteristic_sequence("over-laurent", (L, A), w0)
    _charseq_check(cs2, ctx, lambda k: L.make(A, A, {-k: Matrix.identity(ring, A)}))


def _charseq_zero(ring: RingSpec, cfg: Config, ctx: Ctx) -> None:
    base = MatCat(ring)
    for w0 in sorted(set(cfg.windows) | {1}):
        cs = characteristic_sequence("over-base", NilObject(base, 0, Matrix.zeros(ring, 0, 0), 1), w0)
        _charseq_check(cs, ctx, lambda k: Matrix.zeros(ring, 0, 0))
    one = NilObject(base, 1, Matrix.zeros(ring, 1, 1), 1)
    cs = characteristic_sequence("over-base", one, 1)
    _charseq_check(cs, ctx, lambda k: _base_iterate(Matrix.zeros(ring, 1, 1), k, 1))


# ---------------------------------------------------------------- chi

def _chi_case(rng: random.Random, ring: RingSpec, size: Size, cfg: Config, ctx: Ctx) -> None:
    base = MatCat(ring)
    A = rng.randint(0, size.max_rank)
    phi = random_nilpotent(rng, ring, A)
    ctx.update(A=A, phi=ctx.codec.matrix(phi))
    nil = NilObject.certify(base, A, phi)
    res = chi(nil)
    full = LaurentCat(base, "all")
    series = {i + 1: _base_iterate(phi, i, A).aut(1) for i in range(nil.n)}
    _check(res.inverse == full.make(A, A, series), "inverse is t o sum (phi t)^i")
    delta = res.D_full.d(1)
    _check(full.compose(delta, res.inverse) == full.identity(A), "delta o inverse = id")
    _check(full.compose(res.inverse, delta) == full.identity(A), "inverse o delta = id")
    _check(delta == full.make(A, A, {-1: Matrix.identity(ring, A), 0: -phi}), "delta = t^-1 - phi")
    res.contraction.verify()


def _chi_zero(ring: RingSpec, cfg: Config, ctx: Ctx) -> None:
    base = MatCat(ring)
    res = chi(NilObject(base, 0, Matrix.zeros(ring, 0, 0), 1))
    res.contraction.verify()
    res = chi(NilObject(base, 1, Matrix.zeros(ring, 1, 1), 1))
    _check(res.inverse == LaurentCat(base, "all").make(1, 1, {1: Matrix.identity(ring, 1)}), "inverse of t^-1 is t")


# ---------------------------------------------------------------- gamma

def _gamma_case(rng: random.Random, ring: RingSpec, size: Size, cfg: Config, ctx: Ctx) -> None:
    base = MatCat(ring)
    C = random_complex(rng, ring, size.max_length, size.max_rank)
    ctx.complex("C", C)
    H = _homology(C)
    G0 = gamma_finite(apply_objectwise("l0", C))
    G0.verify()
    _check(_homology(G0.G) == H, "Gamma(l0 C) has the homology of C")
    G1 = gamma_finite(apply_objectwise("l1", C))
    G1.verify()
    _check(not isinstance(contraction_search(G1.G), HomologyWitness), "Gamma(l1 C) is contractible")
    M = rng.randint(1, 2)
    T = t_sequence(C, M)
    T.ses.verify()
    # a random glued object (A, u t^0, A) is isomorphic to l0(A)
    L = LaurentCat(base, "all")
    A = rng.randint(0, size.max_rank)
    P, Pinv = random_unimodular(rng, ring, A)
    x = ProjLineObject.make(base, A, A, L.mono(P, 0), L.mono(Pinv, 0))
    Gx = gamma_finite(x_complex(base, 0, [x]))
    _check(_homology(Gx.G) == ({0: A} if A and not ring.is_integers else ({0: (A, ())} if A else {})), "Gamma(A, u, A) = A[0]")
    # and an arbitrary automorphism over the Laurent category still gives a verified model
    f, finv = random_invertible_laurent(rng, L, A)
    y = ProjLineObject.make(base, A, A, f, finv)
    gamma_finite(x_complex(base, 0, [y])).verify()


def _gamma_zero(ring: RingSpec, cfg: Config, ctx: Ctx) -> None:
    base = MatCat(ring)
    Z = ChainComplex.zero(base)
    for name in ("l0", "l1"):
        G = gamma_finite(apply_objectwise(name, Z))
        _check(G.G.trimmed().is_empty, f"Gamma({name} 0) = 0")
    T = t_sequence(Z, 1)
    T.ses.verify()


# ---------------------------------------------------------------- strictify

def homotopy_nilpotent_input(rng: random.Random, ring: RingSpec, size: Size) -> tuple[ChainComplex, ChainMap]:
    """``(D, psi)``: a contractible block with a non-nilpotent endomorphism plus a nilpotent block."""
    cat = MatCat(ring)
    use_id = rng.random() < 0.5
    length = max(size.max_length, 2)  # a nonzero contractible complex needs two degrees
    while True:
        K = random_contractible(rng, ring, length, size.max_rank, lo=0, prime=use_id)
        if not K.trimmed().is_empty:
            break
    a = identity_map(K) if use_id else random_chain_map(rng, K.phi(1), K)
    if not use_id and isinstance(chain_nilpotency(K, a, 8), Nilpotent):
        # fall back to the identity of an automorphism-fixed complex
        K = random_contractible(rng, ring, length, size.max_rank, lo=0, prime=True)
        if K.trimmed().is_empty:
            K = el(cat, 1, 0)
        a = identity_map(K)
    N1 = random_complex(rng, ring, size.max_length, 1, lo=0)
    N2 = random_complex(rng, ring, size.max_length, 1, lo=0)
    s = direct_sum_complex(cat, [K, N1, N2])
    T = s.total
    off = random_chain_map(rng, N2.phi(1), N1)
    comps = {}
    for n in T.degrees():
        grid = [[a.at(n), None, None], [None, None, off.at(n)], [None, None, None]]
        objs = [K.obj(n), N1.obj(n), N2.obj(n)]
        comps[n] = cat.block(grid, objs, objs)
    psi = ChainMap(T.phi(1), T, comps)
    psi.verify()
    D, iso, inv = _conjugate(rng, T)
    psi = compose_maps(iso, psi, inv.phi(1))
    return D, ChainMap(D.phi(1), D, psi.comps)


def _strictify_case(rng: random.Random, ring: RingSpec, size: Size, cfg: Config, ctx: Ctx) -> None:
    D, psi = homotopy_nilpotent_input(rng, ring, size)
    ctx.complex("D", D)
    ctx.chain_map("psi", psi)
    _check(not isinstance(chain_nilpotency(D, psi, cfg.nmax), Nilpotent), "input is not strictly nilpotent")
    s = strictify_object(D, psi, n_max=cfg.nmax)
    s.verify()
    _check(chain_iterate(s.mu, s.n_mu).is_zero(), "mu^(n) = 0")
    _check(not isinstance(contraction_search(cone(s.v_prime).complex), HomologyWitness), "E is equivalent to D")


def _strictify_zero(ring: RingSpec, cfg: Config, ctx: Ctx) -> None:
    cat = MatCat(ring)
    Z = ChainComplex.zero(cat)
    s = strictify_object(Z, ChainMap(Z, Z, {}), n_max=cfg.nmax)
    s.verify()
    E = el(cat, 1, 0)
    s = strictify_object(E, identity_map(E), n_max=cfg.nmax)
    s.verify()


# ---------------------------------------------------------------- registry

@dataclass(frozen=True)
class Suite:
    name: str
    supports: Callable[[RingSpec], Optional[str]]
    degenerate: tuple
    case: Callable
    default_cases: int


SUITES: dict[str, Suite] = {
    "laurent": Suite("laurent", _any, (("zero", _laurent_zero),), _laurent_case, 200),
    "lemma31": Suite("lemma31", _field_or_z, (("zero", _homotopy_facts_zero),), _homotopy_facts_case, 100),
    "charseq": Suite("charseq", _any, (("zero", _charseq_zero),), _charseq_case, 100),
    "chi": Suite("chi", _any, (("zero", _chi_zero),), _chi_case, 100),
    "gamma": Suite("gamma", _field_or_z, (("zero", _gamma_zero),), _gamma_case, 30),
    "strictify": Suite("strictify", _field_only, (("zero", _strictify_zero),), _strictify_case, 50),
}


def _run_one(fn: Callable, args: tuple, ring: RingSpec) -> tuple[bool, str, Any, dict]:
    ctx = Ctx(ring)
    try:
        fn(*args, ctx)
    except (LaurentKitError, ArithmeticError, ValueError, AssertionError) as exc:
        return False, f"{type(exc).__name__}: {exc}", getattr(exc, "location", None), dict(ctx)
    return True, "", None, dict(ctx)


def case_seed(seed: int, suite: str, k: int) -> str:
    return f"{seed}:{suite}:{k}"


def _shrink(suite: Suite, ring: RingSpec, cfg: Config, seed_key: str, size: Size) -> Optional[tuple[Size, str, dict, str, Any]]:
    for s in SHRINK_SIZES:
        if s.max_length > size.max_length or s.max_rank > size.max_rank:
            continue
        for t in range(SHRINK_TRIES):
            key = f"{seed_key}:shrink:{s.max_length}:{s.max_rank}:{t}"
            ok, msg, loc, ctx = _run_one(suite.case, (random.Random(key), ring, s, cfg), ring)
            if not ok:
                return s, key, ctx, msg, loc
    return None


def run_suite(name: str, ring: RingSpec, cfg: Config, cases: Optional[int] = None, size: Size = Size()) -> Report:
    """Run one suite: the degenerate corpus first, then ``cases`` seeded random cases."""
    suite = SUITES[name]
    n_cases = suite.default_cases if cases is None else cases
    start = time.perf_counter()
    report = Report(name, ring.label(), cfg.seed, 0)
    reason = suite.supports(ring)
    if reason:
        report.skipped = reason
        report.wall_time = time.perf_counter() - start
        return report
    outcomes = []
    for label, fn in suite.degenerate:
        ok, msg, loc, ctx = _run_one(fn, (ring, cfg), ring)
        outcomes.append(CaseOutcome(f"{name}/degenerate/{label}", ok, msg, loc, None if ok else {"inputs": ctx}))
    for k in range(n_cases):
        key = case_seed(cfg.seed, name, k)
        ok, msg, loc, ctx = _run_one(suite.case, (random.Random(key), ring, size, cfg), ring)
        cx = None
        if not ok:
            cx = {"seed": key, "size": [size.max_length, size.max_rank], "inputs": ctx}
            small = _shrink(suite, ring, cfg, key, size)
            if small is not None:
                s, skey, sctx, smsg, sloc = small
                cx = {"seed": skey, "size": [s.max_length, s.max_rank], "inputs": sctx, "message": smsg}
        outcomes.append(CaseOutcome(f"{name}/{k:04d}", ok, msg, loc, cx))
    report.cases_run = len(outcomes)
    report.failures = sorted((o for o in outcomes if not o.ok), key=lambda o: o.case_id)
    report.wall_time = time.perf_counter() - start
    return report


def run_suites(names, ring: RingSpec, cfg: Config, cases: Optional[int] = None) -> list[Report]:
    if names == "all":
        names = list(SUITES)
    return [run_suite(n, ring, cfg, cases) for n in names]
