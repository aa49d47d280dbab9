"""Replace a homotopy nilpotent endomorphism by a strictly nilpotent one up to equivalence.

Input is a chain map ``u: (C, phi) -> (D, psi)`` of complexes with twisted
endomorphisms over ``MatCat`` of a field, with ``phi`` strictly nilpotent and
``psi`` homotopy nilpotent.  Output is a commutative square

    (C, phi) --u--> (D, psi)
       |j              | (cofibration, equivalence)
    (E, mu) --~--> (F, sigma)

with ``mu`` strictly nilpotent.  Every identity the construction relies on
is checked as it is produced; a failure raises
:class:`~laurentkit.errors.IdentityViolated` naming the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .categories import MatCat
from .chains import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    Cylinder,
    HomotopyInverse,
    compose_maps,
    cone,
    cyl,
    identity_map,
    inverse_from_cone_contraction,
    is_cofibration,
    zero_map,
)
from .errors import BadCertificate, IdentityViolated, ObjectMismatch, WrongBase
from .homology import HomologyWitness, contraction_search, homology_retract, homotopy_solver
from .linalg import complement_columns, inverse, nullspace_rows, solve
from .matrix import Matrix
from .nil import (
    DEFAULT_NMAX,
    HomotopyNilCertificate,
    Nilpotent,
    NilpotencyResult,
    chain_iterate,
    homotopy_nilpotent_certify,
    nilpotency_degree,
    twisted_iterate,
)


class _Checks:
    """Records every asserted identity by name."""

    def __init__(self):
        self.names: list[str] = []

    def __call__(self, ok: bool, name: str, where=None) -> None:
        if not ok:
            raise IdentityViolated(name, where)
        self.names.append(name)

    def chain_map(self, f: ChainMap, name: str) -> None:
        try:
            f.verify()
        except IdentityViolated as e:
            raise IdentityViolated(f"{name} is a chain map", e.location) from e
        self.names.append(f"{name} is a chain map")

    def homotopy(self, h: ChainHomotopy, name: str) -> None:
        if not h.is_valid():
            raise IdentityViolated(name)
        self.names.append(name)

    def maps_equal(self, f: ChainMap, g: ChainMap, name: str) -> None:
        self(f.equals(g), name)


# ---------------------------------------------------------------- helpers

def chain_nilpotency(C: ChainComplex, phi: ChainMap, n_max: int = DEFAULT_NMAX) -> NilpotencyResult:
    """Nilpotency of a chain endomorphism ``Phi(C) -> C``, decided on the total object."""
    cat = C.cat
    degs = list(C.degrees())
    if not degs:
        return Nilpotent(1)
    total = sum(C.obj(n) for n in degs)
    M = Matrix.diag(cat.ring, [phi.at(n) for n in degs])
    return nilpotency_degree(cat, total, M, n_max)


def _phi_htpy(h: ChainHomotopy, k: int) -> ChainHomotopy:
    return ChainHomotopy(h.f.phi(k), h.g.phi(k), {n: c.aut(k) for n, c in h.comps.items()})


def _blocks(ring, entries: dict, rows: list[int], cols: list[int]) -> Matrix:
    grid = [[entries.get((i, j)) for j in range(len(cols))] for i in range(len(rows))]
    return Matrix.block(ring, grid, rows, cols)


def _check_endo(C: ChainComplex, phi: ChainMap, name: str) -> None:
    if not (phi.src.same_as(C.phi(1)) and phi.tgt.same_as(C)):
        raise ObjectMismatch(f"{name} must be a chain map Phi(X) -> X")
    phi.verify()


# ---------------------------------------------------------------- splitting along the cofibration

@dataclass(frozen=True, eq=False)
class CokernelSplitting:
    """``D`` rewritten as ``C + Ebar`` with ``d = [[c, x], [0, e]]`` and ``psi = [[phi, *], [0, psibar]]``."""

    Dh: ChainComplex
    psih: ChainMap
    uh: ChainMap  # C -> Dh, inclusion of the first summand
    to_hat: ChainMap  # D -> Dh
    from_hat: ChainMap  # Dh -> D
    Ebar: ChainComplex
    psibar: ChainMap
    x: dict  # x_k: Ebar_k -> C_{k-1}


def split_cofibration(u: ChainMap, phi: ChainMap, psi: ChainMap, chk: _Checks) -> CokernelSplitting:
    C, D = u.src, u.tgt
    ring = D.cat.ring
    cat = D.cat
    degs = list(D.degrees())
    P, Pinv, a, b = {}, {}, {}, {}
    for k in degs:
        uk = u.at(k)
        Q = complement_columns(uk)
        P[k] = uk.hstack(Q) if uk.cols else Q
        Pinv[k] = inverse(P[k])
        if Pinv[k] is None:
            raise IdentityViolated("adapted basis is invertible", k)
        a[k], b[k] = C.obj(k), D.obj(k) - C.obj(k)
    A = lambda k: a.get(k, 0)
    B = lambda k: b.get(k, 0)
    dh = {k: Pinv[k - 1] @ D.d(k) @ P[k] for k in degs if k - 1 in P}
    Dh = ChainComplex.make(cat, D.lo, list(D.objs), dh)
    to_hat = ChainMap(D, Dh, Pinv)
    from_hat = ChainMap(Dh, D, P)
    chk.chain_map(to_hat, "basis change D -> C + Ebar")
    psih = ChainMap(Dh.phi(1), Dh, {k: Pinv[k] @ psi.at(k) @ P[k].aut(1) for k in degs})
    chk.chain_map(psih, "psi in adapted coordinates")
    uh = ChainMap(C, Dh, {k: Matrix.identity(ring, D.obj(k)).cols_of(range(A(k))) for k in degs})
    chk.maps_equal(compose_maps(to_hat, u), uh, "adapted basis sends u to the first summand")
    x, e, pb = {}, {}, {}
    for k in degs:
        d = Dh.d(k)
        lo = A(k - 1)
        chk(d.sub(lo, d.rows, 0, A(k)).is_zero(), "differential is upper triangular", k)
        chk(d.sub(0, lo, 0, A(k)) == C.d(k), "upper left block of d is c", k)
        x[k] = d.sub(0, lo, A(k), d.cols)
        e[k] = d.sub(lo, d.rows, A(k), d.cols)
        ps = psih.at(k)
        chk(ps.sub(A(k), ps.rows, 0, A(k)).is_zero(), "psi preserves C", k)
        chk(ps.sub(0, A(k), 0, A(k)) == phi.at(k), "psi restricts to phi on C", k)
        pb[k] = ps.sub(A(k), ps.rows, A(k), ps.cols)
    Ebar = ChainComplex.make(cat, D.lo, [B(k) for k in degs], {k: e[k] for k in degs if k > D.lo})
    psibar = ChainMap(Ebar.phi(1), Ebar, pb)
    chk.chain_map(psibar, "induced psibar on the cokernel")
    return CokernelSplitting(Dh, psih, uh, to_hat, from_hat, Ebar, psibar, x)


# ---------------------------------------------------------------- the homotopy h(psi)

@dataclass(frozen=True, eq=False)
class RelativeNullHomotopy:
    m: int
    n: int  # = 2 m
    Hbar: ChainHomotopy  # 0 ~ psibar^(m)
    omega: ChainMap  # Phi^m(D) -> D, [[0, z], [0, 0]]
    H: ChainHomotopy  # omega ~ psi^(m)
    h_psi: ChainHomotopy  # 0 ~ psi^(n), vanishing on Phi^n(C)


def relative_null_homotopy(S: CokernelSplitting, C: ChainComplex, phi: ChainMap, n_phi: int, n_max: int, chk: _Checks) -> RelativeNullHomotopy:
    ring = C.cat.ring
    Dh, Eb = S.Dh, S.Ebar
    degs = list(Dh.degrees())
    a = lambda k: C.obj(k)
    for m in range(max(1, n_phi), n_max + 1):
        pbm = chain_iterate(S.psibar, m)
        Hb = homotopy_solver(Eb.phi(m), Eb).solve({k: pbm.at(k) for k in Eb.degrees()})
        if Hb is not None:
            break
    else:
        raise BadCertificate(f"psibar is not null-homotopic up to exponent {n_max}")
    src_m = Eb.phi(m)
    Hbar = ChainHomotopy(zero_map(src_m, Eb), ChainMap(src_m, Eb, pbm.comps), Hb)
    chk.homotopy(Hbar, "Hbar: 0 ~ psibar^(m)")
    psim = chain_iterate(S.psih, m)
    Dm = Dh.phi(m)
    psim = ChainMap(Dm, Dh, psim.comps)
    Hc, om = {}, {}
    for k in degs:
        ps = psim.at(k)
        chk(ps.sub(0, a(k), 0, a(k)).is_zero(), "phi^(m) = 0", k)
        chk(ps.sub(a(k), ps.rows, 0, a(k)).is_zero(), "psi^(m) preserves C", k)
        chk(ps.sub(a(k), ps.rows, a(k), ps.cols) == pbm.at(k), "psi^(m) induces psibar^(m)", k)
        y = ps.sub(0, a(k), a(k), ps.cols)
        hb = Hbar.at(k)
        rows = [a(k + 1), Eb.obj(k + 1)]
        cols = [a(k), Eb.obj(k)]
        Hc[k] = _blocks(ring, {(1, 1): hb}, rows, cols)
        xk1 = S.x.get(k + 1, Matrix.zeros(ring, a(k), Eb.obj(k + 1)))
        z = y - xk1 @ hb
        om[k] = _blocks(ring, {(0, 1): z}, [a(k), Eb.obj(k)], cols)
    omega = ChainMap(Dm, Dh, om)
    chk.chain_map(omega, "omega")
    H = ChainHomotopy(omega, psim, Hc)
    chk.homotopy(H, "H: omega ~ psi^(m)")
    um = S.uh.phi(m)
    chk(compose_maps(omega, um).is_zero(), "omega o Phi^m(u) = 0")
    chk(all((H.at(k) @ um.at(k)).is_zero() for k in degs), "H o Phi^m(u) = 0")
    n = 2 * m
    om_m = omega.phi(m)
    chk(compose_maps(omega, om_m).is_zero(), "omega o Phi^m(omega) = 0")
    Hm = _phi_htpy(H, m)
    comps = {k: psim.at(k + 1) @ Hm.at(k) + H.at(k) @ om_m.at(k) for k in degs}
    psin = chain_iterate(S.psih, n)
    Dn = Dh.phi(n)
    h_psi = ChainHomotopy(zero_map(Dn, Dh), ChainMap(Dn, Dh, psin.comps), comps)
    chk.homotopy(h_psi, "h(psi) = psi^(m) Phi^m(H) + H Phi^m(omega): 0 ~ psi^(n)")
    un = S.uh.phi(n)
    chk(all((h_psi.at(k) @ un.at(k)).is_zero() for k in degs), "h(psi) o Phi^n(u) = 0")
    return RelativeNullHomotopy(m, n, Hbar, omega, H, h_psi)


# ---------------------------------------------------------------- iterated cylinders

@dataclass(frozen=True, eq=False)
class Telescope:
    """Glued cylinders ``Phi^{n-2}(cyl f) u ... u cyl f`` of ``f: Phi(X) -> X``.

    Degree ``k`` is laid out as levels ``Phi^i X_k`` (``i = 0..n-1``)
    followed by cone coordinates ``Phi^l X_{k-1}`` (``l = 1..n-1``); level
    ``l`` and ``l-1`` are the ends of the ``l``-th cylinder.
    """

    X: ChainComplex
    f: ChainMap
    n: int
    complex: ChainComplex
    p: ChainMap  # -> X, level i by f^(i)
    levels: tuple  # inclusions Phi^i(X) -> telescope
    g: ChainHomotopy  # id ~ i_0 p

    def layout(self, k: int) -> list[int]:
        return [self.X.obj(k)] * self.n + [self.X.obj(k - 1)] * (self.n - 1)


def telescope(X: ChainComplex, f: ChainMap, n: int) -> Telescope:
    cat = X.cat
    ring = cat.ring
    lay = lambda k: [X.obj(k)] * n + [X.obj(k - 1)] * (n - 1)
    cone_idx = lambda l: n + l - 1
    lo, hi = (X.lo, X.hi + 1) if not X.is_empty else (0, -1)
    degs = range(lo, hi + 1)
    it = lambda k, i: twisted_iterate(cat, f.at(k), i, X.obj(k))
    diffs = {}
    for k in degs:
        ent = {}
        for i in range(n):
            ent[(i, i)] = X.d(k).aut(i)
        for l in range(1, n):
            c = cone_idx(l)
            ent[(c, c)] = -X.d(k - 1).aut(l)
            ent[(l, c)] = -Matrix.identity(ring, X.obj(k - 1))
            ent[(l - 1, c)] = f.at(k - 1).aut(l - 1)
        diffs[k] = _blocks(ring, ent, lay(k - 1), lay(k))
    T = ChainComplex.make(cat, lo, [sum(lay(k)) for k in degs], {k: diffs[k] for k in degs if k > lo})
    p = ChainMap(T, X, {k: _blocks(ring, {(0, i): it(k, i) for i in range(n)}, [X.obj(k)], lay(k)) for k in degs})
    levels = tuple(
        ChainMap(X.phi(i), T, {k: _blocks(ring, {(i, 0): Matrix.identity(ring, X.obj(k))}, lay(k), [X.obj(k)]) for k in degs})
        for i in range(n)
    )
    gc = {}
    for k in degs:
        ent = {}
        for i in range(1, n):
            for l in range(1, i + 1):
                ent[(cone_idx(l), i)] = it(k, i - l).aut(l)
        gc[k] = _blocks(ring, ent, lay(k + 1), lay(k))
    g = ChainHomotopy(identity_map(T), compose_maps(levels[0], p), gc)
    return Telescope(X, f, n, T, p, levels, g)


@dataclass(frozen=True, eq=False)
class TowerReport:
    n: int
    C_tower: Telescope
    D_tower: Telescope
    u_prime: ChainMap
    phi_prime: ChainMap
    psi_prime: ChainMap
    psi_prime_nilpotency: NilpotencyResult


def _telescope_endo(T: Telescope, k_htpy: ChainHomotopy) -> ChainMap:
    """Shift each cylinder one step up; the last cone coordinate goes through ``-k``."""
    X, n = T.X, T.n
    ring = X.cat.ring
    src = T.complex.phi(1)
    comps = {}
    for k in T.complex.degrees():
        lay = T.layout(k)
        ent = {}
        for i in range(n - 1):
            ent[(i + 1, i)] = Matrix.identity(ring, X.obj(k))
        for l in range(1, n - 1):
            ent[(n + l, n + l - 1)] = Matrix.identity(ring, X.obj(k - 1))
        M = _blocks(ring, ent, lay, lay)
        if n >= 2:
            a = M.a.copy()
            a[:, sum(lay[:-1]):] = (-k_htpy.at(k - 1)).a  # Phi^n X_{k-1} -> T_k
            M = Matrix(ring, a)
        comps[k] = M
    return ChainMap(src, T.complex, comps)


def build_tower(C: ChainComplex, phi: ChainMap, Dh: ChainComplex, psih: ChainMap, uh: ChainMap, h_psi: ChainHomotopy, n: int, chk: _Checks, n_max: int) -> TowerReport:
    ring = C.cat.ring
    TC, TD = telescope(C, phi, n), telescope(Dh, psih, n)
    for name, T, f in (("C", TC, phi), ("D", TD, psih)):
        chk.chain_map(T.p, f"p({name})")
        chk.maps_equal(compose_maps(T.p, T.levels[0]), identity_map(T.X), f"p({name}) o i({name}) = id")
        top = chain_iterate(f, n - 1)
        chk.maps_equal(compose_maps(T.p, T.levels[n - 1]), ChainMap(T.X.phi(n - 1), T.X, top.comps), f"p({name}) o i(Phi^(n-1)({name})) = iterate^(n-1)")
        chk.homotopy(T.g, f"g({name}): id ~ i({name}) p({name})")
        chk(all((T.p.at(k + 1) @ T.g.at(k)).is_zero() for k in T.complex.degrees()), f"p({name}) o g({name}) = 0")
    up = {}
    for k in TD.complex.degrees():
        blocks = [uh.at(k).aut(i) for i in range(n)] + [uh.at(k - 1).aut(l) for l in range(1, n)]
        up[k] = Matrix.diag(ring, blocks)
    u_prime = ChainMap(TC.complex, TD.complex, up)
    chk.chain_map(u_prime, "u'")
    chk(is_cofibration(u_prime), "u' is a cofibration")
    chk.maps_equal(compose_maps(u_prime, TC.levels[0]), compose_maps(TD.levels[0], uh), "u' o i(C) = i(D) o u")
    chk.maps_equal(compose_maps(TD.p, u_prime), compose_maps(uh, TC.p), "p(D) o u' = u o p(C)")
    chk(all(u_prime.at(k + 1) @ TC.g.at(k) == TD.g.at(k) @ u_prime.at(k) for k in TD.complex.degrees()), "u' o g(C) = g(D) o u'")

    def k_of(T: Telescope, f: ChainMap, h: Optional[ChainHomotopy]) -> ChainHomotopy:
        X = T.X
        Xn = X.phi(n)
        last = compose_maps(T.levels[n - 1], ChainMap(Xn, X.phi(n - 1), f.phi(n - 1).comps))
        comps = {}
        for k in T.complex.degrees():
            c = T.g.at(k) @ last.at(k)
            if h is not None:
                c = c - T.levels[0].at(k + 1) @ h.at(k)
            comps[k] = c
        return ChainHomotopy(last, zero_map(Xn, T.complex), comps)

    kC = k_of(TC, phi, None)
    kD = k_of(TD, psih, h_psi)
    chk.homotopy(kC, "k(C): i(Phi^(n-1)C) Phi^(n-1)(phi) ~ 0")
    chk.homotopy(kD, "k(D): i(Phi^(n-1)D) Phi^(n-1)(psi) ~ 0")
    un = uh.phi(n)
    chk(all(kD.at(k) @ un.at(k) == u_prime.at(k + 1) @ kC.at(k) for k in TD.complex.degrees()), "k(D) o Phi^n(u) = u' o k(C)")
    chk(all((TC.p.at(k + 1) @ kC.at(k)).is_zero() for k in TC.complex.degrees()), "p(C) o k(C) = 0")
    phi_p = _telescope_endo(TC, kC)
    psi_p = _telescope_endo(TD, kD)
    chk.chain_map(phi_p, "phi'")
    chk.chain_map(psi_p, "psi'")
    chk.maps_equal(compose_maps(u_prime, phi_p), compose_maps(psi_p, u_prime.phi(1)), "u' o phi' = psi' o Phi(u')")
    chk.maps_equal(compose_maps(TC.p, phi_p), compose_maps(phi, TC.p.phi(1)), "p(C) o phi' = phi o Phi(p(C))")
    chk.maps_equal(compose_maps(TD.p, psi_p, TD.levels[0].phi(1)), psih, "p(D) o psi' o Phi(i(D)) = psi")
    nil = chain_nilpotency(TD.complex, psi_p, n_max)
    return TowerReport(n, TC, TD, u_prime, phi_p, psi_p, nil)


# ---------------------------------------------------------------- minimal model and pushout

@dataclass(frozen=True, eq=False)
class Strictification:
    """Output square together with every certificate produced on the way."""

    C: ChainComplex
    phi: ChainMap
    D: ChainComplex  # top right corner; the cylinder of u if u was not a cofibration
    psi: ChainMap
    u: ChainMap
    E: ChainComplex
    mu: ChainMap
    j: ChainMap
    F: ChainComplex
    sigma: ChainMap
    d_leg: ChainMap  # D -> F
    e_leg: ChainMap  # E -> F
    v_prime: ChainMap  # D -> E with v' u = j
    H_prime: ChainHomotopy  # v' psi ~ mu Phi(v'), zero on Phi(C)
    n_mu: int
    m: int
    n: int
    equivalences: dict  # name -> HomotopyInverse
    tower: TowerReport
    reduction: Optional[Cylinder]  # cylinder replacing a non-cofibration u
    checks: tuple = field(default_factory=tuple)

    def verify(self) -> None:
        """Re-check the output square from scratch."""
        _verify_square(self)


def _verify_square(s: Strictification) -> None:
    chk = _Checks()
    for f, name in ((s.j, "j"), (s.d_leg, "D -> F"), (s.e_leg, "E -> F"), (s.mu, "mu"), (s.sigma, "sigma"), (s.v_prime, "v'")):
        chk.chain_map(f, name)
    chk.maps_equal(compose_maps(s.d_leg, s.u), compose_maps(s.e_leg, s.j), "square commutes")
    chk(is_cofibration(s.j), "j is a cofibration")
    chk(is_cofibration(s.d_leg), "D -> F is a cofibration")
    chk.maps_equal(compose_maps(s.mu, s.j.phi(1)), compose_maps(s.j, s.phi), "j commutes with the endomorphisms")
    chk.maps_equal(compose_maps(s.sigma, s.d_leg.phi(1)), compose_maps(s.d_leg, s.psi), "D -> F commutes with the endomorphisms")
    chk.maps_equal(compose_maps(s.sigma, s.e_leg.phi(1)), compose_maps(s.e_leg, s.mu), "E -> F commutes with the endomorphisms")
    it = chain_iterate(s.mu, s.n_mu)
    chk(it.is_zero(), f"mu^({s.n_mu}) = 0")
    for name, f in (("D -> F", s.d_leg), ("E -> F", s.e_leg), ("v'", s.v_prime)):
        chk(not isinstance(contraction_search(cone(f).complex), HomologyWitness), f"{name} has contractible cone")


def strictify(
    u: ChainMap,
    phi: ChainMap,
    psi: ChainMap,
    phi_n: Optional[int] = None,
    psi_cert: Optional[HomotopyNilCertificate] = None,
    n_max: int = DEFAULT_NMAX,
) -> Strictification:
    """Strictify ``psi`` relative to ``u: (C, phi) -> (D, psi)``.

    Args:
        u: chain map ``C -> D`` commuting with the endomorphisms.
        phi: strictly nilpotent ``Phi(C) -> C``.
        psi: homotopy nilpotent ``Phi(D) -> D``.
        phi_n: exponent with ``phi^(phi_n) = 0``; computed when omitted.
        psi_cert: null-homotopy of an iterate of ``psi``; computed when omitted.
        n_max: search limit for exponents.
    """
    C, D = u.src, u.tgt
    cat = D.cat
    if not isinstance(cat, MatCat) or not cat.ring.is_field:
        raise WrongBase("strictification runs over MatCat of a field")
    chk = _Checks()
    _check_endo(C, phi, "phi")
    _check_endo(D, psi, "psi")
    u.verify()
    chk.maps_equal(compose_maps(psi, u.phi(1)), compose_maps(u, phi), "psi o Phi(u) = u o phi")

    if phi_n is None:
        res = chain_nilpotency(C, phi, n_max)
        if not isinstance(res, Nilpotent):
            raise BadCertificate("phi is not strictly nilpotent", "phi")
        phi_n = res.n
    if not chain_iterate(phi, phi_n).is_zero():
        raise BadCertificate(f"phi^({phi_n}) is not zero", "phi_n")
    if psi_cert is None:
        psi_cert = homotopy_nilpotent_certify(D, psi, n_max)
        if not isinstance(psi_cert, HomotopyNilCertificate):
            raise BadCertificate("psi is not homotopy nilpotent", "psi")
    else:
        try:
            psi_cert.verify()
        except Exception as exc:
            raise BadCertificate(f"psi certificate does not verify: {exc}", "psi_cert") from exc
        if not psi_cert.K.g.equals(chain_iterate(psi, psi_cert.n)):
            raise BadCertificate("psi certificate is for a different map", "psi_cert")

    reduction = None
    if not is_cofibration(u):
        Y = cyl(u)
        reduction = Y
        ring = cat.ring
        comps = {k: Matrix.diag(ring, [phi.at(k - 1), phi.at(k), psi.at(k)]) for k in Y.complex.degrees()}
        psi = ChainMap(Y.complex.phi(1), Y.complex, comps)
        chk.chain_map(psi, "endomorphism of cyl(u)")
        chk.maps_equal(compose_maps(psi, Y.i_C.phi(1)), compose_maps(Y.i_C, phi), "C -> cyl(u) commutes with the endomorphisms")
        u = Y.i_C
        D = Y.complex

    S = split_cofibration(u, phi, psi, chk)
    R = relative_null_homotopy(S, C, phi, phi_n, n_max, chk)
    tower = build_tower(C, phi, S.Dh, S.psih, S.uh, R.h_psi, R.n, chk, n_max)
    out = _minimal_model_square(C, phi, S, chk, n_max)
    E, mu, j, v_h, Hp, F, sigma, dleg_h, eleg, n_mu, eqs = out
    v_prime = compose_maps(v_h, S.to_hat)
    d_leg = compose_maps(dleg_h, S.to_hat)
    H_prime = ChainHomotopy(
        compose_maps(v_prime, psi),
        compose_maps(mu, v_prime.phi(1)),
        {k: Hp.at(k) @ S.to_hat.at(k).aut(1) for k in D.degrees()},
    )
    chk.homotopy(H_prime, "H': v' psi ~ mu Phi(v') in the original coordinates")
    eqs["v'"] = _equivalence(v_prime)
    eqs["D -> F"] = _equivalence(d_leg)
    s = Strictification(C, phi, D, psi, u, E, mu, j, F, sigma, d_leg, eleg, v_prime, H_prime, n_mu, R.m, R.n, eqs, tower, reduction, tuple(chk.names))
    _verify_square(s)
    return s


def strictify_object(D: ChainComplex, psi: ChainMap, psi_cert: Optional[HomotopyNilCertificate] = None, n_max: int = DEFAULT_NMAX) -> Strictification:
    """Entry point with ``C = 0``: a strictly nilpotent ``(E, mu)`` equivalent to ``(D, psi)``."""
    Z = ChainComplex.zero(D.cat)
    u = ChainMap(Z, D, {})
    phi = ChainMap(Z.phi(1), Z, {})
    return strictify(u, phi, psi, 1, psi_cert, n_max)


def _equivalence(f: ChainMap) -> HomotopyInverse:
    gamma = contraction_search(cone(f).complex)
    if isinstance(gamma, HomologyWitness):
        raise IdentityViolated(f"cone is contractible ({gamma.describe()})")
    return inverse_from_cone_contraction(f, gamma)


def _minimal_model_square(C: ChainComplex, phi: ChainMap, S: CokernelSplitting, chk: _Checks, n_max: int):
    """Replace the cokernel by its homology: ``E = C + H`` with ``d = [[c, x iota], [0, 0]]``."""
    cat = C.cat
    ring = cat.ring
    Dh, Eb = S.Dh, S.Ebar
    degs = list(Dh.degrees())
    a = lambda k: C.obj(k)
    Rt = homology_retract(Eb)
    Hb = Rt.H
    hb = lambda k: Hb.obj(k)
    g = Rt.g_at
    x = lambda k: S.x.get(k, Matrix.zeros(ring, a(k - 1), Eb.obj(k)))
    dE = {k: _blocks(ring, {(0, 0): C.d(k), (0, 1): x(k) @ Rt.iota.at(k)}, [a(k - 1), hb(k - 1)], [a(k), hb(k)]) for k in degs if k > Dh.lo}
    E = ChainComplex.make(cat, Dh.lo, [a(k) + hb(k) for k in degs], dE)
    I = lambda n: Matrix.identity(ring, n)
    v = ChainMap(Dh, E, {k: _blocks(ring, {(0, 0): I(a(k)), (0, 1): -(x(k + 1) @ g(k)), (1, 1): Rt.pi.at(k)}, [a(k), hb(k)], [a(k), Eb.obj(k)]) for k in degs})
    w = ChainMap(E, Dh, {k: _blocks(ring, {(0, 0): I(a(k)), (1, 1): Rt.iota.at(k)}, [a(k), Eb.obj(k)], [a(k), hb(k)]) for k in degs})
    j = ChainMap(C, E, {k: _blocks(ring, {(0, 0): I(a(k))}, [a(k), hb(k)], [a(k)]) for k in degs})
    for f, name in ((v, "v'"), (w, "w"), (j, "j")):
        chk.chain_map(f, name)
    chk.maps_equal(compose_maps(v, S.uh), j, "v' o u = j")
    chk.maps_equal(compose_maps(v, w), identity_map(E), "v' o w = id")
    chk(is_cofibration(j), "j is a cofibration")
    L = ChainHomotopy(compose_maps(w, v), identity_map(Dh), {k: _blocks(ring, {(1, 1): g(k)}, [a(k + 1), Eb.obj(k + 1)], [a(k), Eb.obj(k)]) for k in degs})
    chk.homotopy(L, "L: w v' ~ id")
    chk(all((L.at(k) @ S.uh.at(k)).is_zero() for k in degs), "L o u = 0")
    mu = compose_maps(v, S.psih, w.phi(1))
    mu = ChainMap(E.phi(1), E, mu.comps)
    chk.chain_map(mu, "mu = v' psi Phi(w)")
    chk.maps_equal(compose_maps(mu, j.phi(1)), compose_maps(j, phi), "mu o Phi(j) = j o phi")
    res = chain_nilpotency(E, mu, n_max)
    chk(isinstance(res, Nilpotent), "mu is strictly nilpotent")
    n_mu = res.n
    vpsi = compose_maps(v, S.psih)
    Hp = ChainHomotopy(vpsi, compose_maps(mu, v.phi(1)), {k: -(v.at(k + 1) @ S.psih.at(k + 1) @ L.at(k).aut(1)) for k in degs})
    chk.homotopy(Hp, "H' = -v' psi Phi(L): v' psi ~ mu Phi(v')")
    uph = S.uh.phi(1)
    chk(all((Hp.at(k) @ uph.at(k)).is_zero() for k in degs), "H' o Phi(u) = 0")

    # pushout of cyl(v') <- cyl(j) -> E
    Yv, Yj = cyl(v), cyl(j)
    Y, Z = Yv.complex, Yj.complex
    ydegs = list(Y.degrees())
    kappa = ChainMap(Z, Y, {k: Matrix.diag(ring, [S.uh.at(k - 1), S.uh.at(k), I(E.obj(k))]) for k in ydegs})
    chk.chain_map(kappa, "cyl(j) -> cyl(v')")
    rho = ChainMap(Y.phi(1), Y, {
        k: _blocks(ring, {(0, 0): S.psih.at(k - 1), (1, 1): S.psih.at(k), (2, 0): Hp.at(k - 1), (2, 2): mu.at(k)},
                   [Dh.obj(k - 1), Dh.obj(k), E.obj(k)], [Dh.obj(k - 1), Dh.obj(k), E.obj(k)])
        for k in ydegs
    })
    chk.chain_map(rho, "rho on cyl(v')")
    rhoZ = ChainMap(Z.phi(1), Z, {k: Matrix.diag(ring, [phi.at(k - 1), phi.at(k), mu.at(k)]) for k in ydegs})
    chk.chain_map(rhoZ, "endomorphism of cyl(j)")
    chk.maps_equal(compose_maps(rho, kappa.phi(1)), compose_maps(kappa, rhoZ), "cyl(j) -> cyl(v') commutes with the endomorphisms")
    chk.maps_equal(compose_maps(mu, Yj.pr.phi(1)), compose_maps(Yj.pr, rhoZ), "cyl(j) -> E commutes with the endomorphisms")
    F, q, sec = _pushout(kappa, Yj.pr, chk)
    PY = lambda k: [Y.obj(k), E.obj(k)]
    both = ChainMap(
        ChainComplex.make(cat, Y.lo, [Y.obj(k) + E.obj(k) for k in ydegs], {k: Matrix.diag(ring, [Y.d(k), E.d(k)]) for k in ydegs if k > Y.lo}).phi(1),
        q.src,
        {k: Matrix.diag(ring, [rho.at(k), mu.at(k)]) for k in ydegs},
    )
    sigma = ChainMap(F.phi(1), F, {k: q.at(k) @ both.at(k) @ sec[k].aut(1) for k in ydegs})
    chk.chain_map(sigma, "sigma")
    chk(all(sigma.at(k) @ q.at(k).aut(1) == q.at(k) @ both.at(k) for k in ydegs), "sigma o Phi(q) = q o (rho + mu)")
    inY = ChainMap(Y, q.src, {k: _blocks(ring, {(0, 0): I(Y.obj(k))}, PY(k), [Y.obj(k)]) for k in ydegs})
    inE = ChainMap(E, q.src, {k: _blocks(ring, {(1, 0): I(E.obj(k))}, PY(k), [E.obj(k)]) for k in ydegs})
    dleg = compose_maps(q, inY, Yv.i_C)
    eleg = compose_maps(q, inE)
    dleg = ChainMap(Dh, F, dleg.comps)
    eleg = ChainMap(E, F, eleg.comps)
    chk.maps_equal(compose_maps(dleg, S.uh), compose_maps(eleg, j), "pushout square commutes")
    eqs = {"E -> F": _equivalence(eleg)}
    return E, mu, j, v, Hp, F, sigma, dleg, eleg, n_mu, eqs


def _pushout(i: ChainMap, f: ChainMap, chk: _Checks):
    """Pushout of ``B <-i- A -f-> E`` with ``i`` split injective, as a cokernel of ``(i, -f)``."""
    A, B, E = i.src, i.tgt, f.tgt
    cat = B.cat
    ring = cat.ring
    degs = list(B.degrees())
    sizes = lambda k: [B.obj(k), E.obj(k)]
    M = {k: _blocks(ring, {(0, 0): i.at(k), (1, 0): -f.at(k)}, sizes(k), [A.obj(k)]) for k in degs}
    q, s = {}, {}
    for k in degs:
        tot = B.obj(k) + E.obj(k)
        if A.obj(k) == 0:
            q[k] = Matrix.identity(ring, tot)
        else:
            q[k] = nullspace_rows(M[k])
        chk(q[k].rows == tot - A.obj(k), "cokernel has the expected rank", k)
        s[k] = solve(q[k], Matrix.identity(ring, q[k].rows)) if q[k].rows else Matrix.zeros(ring, tot, 0)
        chk(s[k] is not None and (q[k] @ s[k]).is_identity() if q[k].rows else True, "cokernel section", k)
    P = ChainComplex.make(cat, B.lo, [B.obj(k) + E.obj(k) for k in degs], {k: Matrix.diag(ring, [B.d(k), E.d(k)]) for k in degs if k > B.lo})
    dF = {k: q[k - 1] @ P.d(k) @ s[k] for k in degs if k > B.lo}
    F = ChainComplex.make(cat, B.lo, [q[k].rows for k in degs], dF)
    Q = ChainMap(P, F, q)
    chk.chain_map(Q, "pushout quotient")
    return F, Q, s
