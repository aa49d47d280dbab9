"""Twisted nilpotent endomorphisms, the chi construction and characteristic sequences.

An object of the twisted Nil category is a pair ``(A, phi)`` with
``phi: Phi(A) -> A`` whose twisted iterate
``phi^(n) = phi o Phi(phi) o ... o Phi^{n-1}(phi)`` vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .categories import Category, MatCat
from .chains import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    Contraction,
    SplitSES,
    compose_maps,
    cone,
    identity_map,
    inverse_from_cone_contraction,
    zero_map,
)
from .errors import BadCertificate, IdentityViolated, NotAContraction, ObjectMismatch, WindowTooSmall, WrongBase
from .homology import homotopy_solver
from .laurent import LaurentCat, LaurentMor

DEFAULT_NMAX = 64


# ---------------------------------------------------------------- twisted iterates

def twisted_iterate(cat: Category, phi, k: int, A=None):
    """``phi^(k): Phi^k(A) -> A``; ``phi^(0)`` is the identity of ``A``."""
    if A is None:
        A = cat.tgt(phi)
    out = cat.identity(A)
    for j in range(k):
        out = cat.compose(out, cat.phi(j, phi))
    return out


def _check_endo(cat: Category, A, phi) -> None:
    if not cat.obj_equal(cat.src(phi), cat.phi(1, A)) or not cat.obj_equal(cat.tgt(phi), A):
        raise ObjectMismatch("phi must map Phi(A) -> A")


@dataclass(frozen=True)
class Nilpotent:
    n: int


@dataclass(frozen=True)
class NotNilpotent:
    """Every iterate up to ``bound`` is nonzero, and ``bound`` is a proven decision bound."""

    bound: int
    witness: object  # the nonzero iterate phi^(bound)


@dataclass(frozen=True)
class Undecided:
    n_max: int


NilpotencyResult = Union[Nilpotent, NotNilpotent, Undecided]


def decision_bound(cat: Category, A) -> Optional[int]:
    """Index past which a nonzero iterate proves non-nilpotence, or ``None``.

    If ``Phi`` has finite order ``m`` then ``phi^(k m) = (phi^(m))^k`` is an
    ordinary power of the endomorphism ``phi^(m)`` of ``A``; a nilpotent
    endomorphism of a rank ``r`` object has ``r``-th power zero.
    """
    ring = cat.ring
    if ring.order is None:
        return None
    if not (ring.is_field or ring.is_integers):
        return None
    return max(1, ring.order * cat.rank(A))


def nilpotency_degree(cat: Category, A, phi, n_max: int = DEFAULT_NMAX) -> NilpotencyResult:
    """Least ``n`` with ``phi^(n) = 0``, a proof that none exists, or ``Undecided``."""
    _check_endo(cat, A, phi)
    bound = decision_bound(cat, A)
    limit = bound if bound is not None else n_max
    it = cat.identity(A)
    for k in range(limit):
        it = cat.compose(it, cat.phi(k, phi))
        if cat.is_zero(it):
            return Nilpotent(k + 1)
    if bound is not None:
        return NotNilpotent(bound, it)
    return Undecided(n_max)


@dataclass(frozen=True, eq=False)
class NilObject:
    """``(A, phi)`` together with an exponent ``n`` such that ``phi^(n) = 0``."""

    cat: Category
    A: object
    phi: object
    n: int

    def __post_init__(self):
        self.verify()

    def verify(self) -> None:
        _check_endo(self.cat, self.A, self.phi)
        if self.n < 1:
            raise BadCertificate("nilpotency exponent must be positive", "n")
        if not self.cat.is_zero(twisted_iterate(self.cat, self.phi, self.n, self.A)):
            raise BadCertificate(f"phi^({self.n}) is not zero", "n")

    @staticmethod
    def certify(cat: Category, A, phi, n_max: int = DEFAULT_NMAX) -> "NilObject":
        res = nilpotency_degree(cat, A, phi, n_max)
        if not isinstance(res, Nilpotent):
            raise BadCertificate(f"phi is not nilpotent ({type(res).__name__})")
        return NilObject(cat, A, phi, res.n)


@dataclass(frozen=True, eq=False)
class NilMorphism:
    src: NilObject
    tgt: NilObject
    u: object

    def __post_init__(self):
        cat = self.src.cat
        lhs = cat.compose(self.u, self.src.phi)
        rhs = cat.compose(self.tgt.phi, cat.phi(1, self.u))
        if lhs != rhs:
            raise IdentityViolated("u o phi = mu o Phi(u)")


# ---------------------------------------------------------------- chi

def _delta(L: LaurentCat, A, phi) -> LaurentMor:
    """``t^-1 - phi: Phi(A) -> A`` in the Laurent category ``L``."""
    inner = L.inner
    return L.make(inner.phi(1, A), A, {-1: inner.identity(A), 0: inner.neg(phi)})


def chi_complex(C: ChainComplex, phi: ChainMap, mode: str = "nonpos") -> ChainComplex:
    """Cone of ``t^-1 - phi: Phi(C) -> C`` over the Laurent category in ``mode``."""
    L = LaurentCat(C.cat, mode)
    return cone(_laurent_chain_map(L, C, phi)).complex


def _lift_complex(L: LaurentCat, C: ChainComplex) -> ChainComplex:
    return ChainComplex(L, C.lo, C.objs, tuple(L.mono(d, 0, L.inner.src(d)) for d in C.diffs))


def _laurent_chain_map(L: LaurentCat, C: ChainComplex, phi: ChainMap) -> ChainMap:
    PC = C.phi(1)
    src, tgt = _lift_complex(L, PC), _lift_complex(L, C)
    return ChainMap(src, tgt, {n: _delta(L, C.obj(n), phi.at(n)) for n in C.degrees()})


@dataclass(frozen=True, eq=False)
class ChiResult:
    D: ChainComplex  # over A_Phi[t^-1]
    D_full: ChainComplex  # the same complex over A_Phi[t, t^-1]
    contraction: Contraction  # of D_full
    inverse: LaurentMor  # t o sum_{i<n} (phi t)^i : A -> Phi(A)


def laurent_inverse_of_delta(L: LaurentCat, nil: NilObject) -> LaurentMor:
    """``t o sum_{i=0}^{n-1} (phi . t)^i``, inverse to ``t^-1 - phi``."""
    cat, A = nil.cat, nil.A
    phit = L.make(A, A, {1: nil.phi})
    total = L.zero(A, A)
    power = L.identity(A)
    for _ in range(nil.n):
        total = L.add(total, power)
        power = L.compose(phit, power)
    t = L.t(cat.phi(1, A), 1)  # A -> Phi(A)
    return L.compose(t, total)


def chi(nil: NilObject) -> ChiResult:
    nil.verify()
    cat, A = nil.cat, nil.A
    C = ChainComplex.concentrated(cat, A, 0)
    phi = ChainMap(C.phi(1), C, {0: nil.phi})
    D = chi_complex(C, phi, "nonpos")
    full = LaurentCat(cat, "all")
    D_full = chi_complex(C, phi, "all")
    inv = laurent_inverse_of_delta(full, nil)
    delta = D_full.d(1)
    if full.compose(delta, inv) != full.identity(A) or full.compose(inv, delta) != full.identity(cat.phi(1, A)):
        raise BadCertificate("the geometric series does not invert t^-1 - phi", "n")
    gamma = Contraction(D_full, {0: inv})
    gamma.verify()
    return ChiResult(D, D_full, gamma, inv)


def read_nil(D: ChainComplex) -> tuple:
    """Recover ``(A, phi)`` from a two-term complex ``Phi(A) -> A`` with differential ``t^-1 - phi``."""
    L = D.cat
    if not isinstance(L, LaurentCat):
        raise ObjectMismatch("expected a complex over a Laurent category")
    T = D.trimmed()
    inner = L.inner
    if T.is_empty:
        return inner.zero_object(), inner.zero(inner.zero_object(), inner.zero_object())
    if T.lo != 0 or T.hi > 1:
        raise ObjectMismatch("expected a complex concentrated in degrees 0 and 1")
    A = D.obj(0)
    d = D.d(1)
    if not inner.obj_equal(D.obj(1), inner.phi(1, A)):
        raise ObjectMismatch("degree 1 must be Phi(A)")
    if set(d.support) - {-1, 0} or d.coeff(-1) != inner.identity(A):
        raise ObjectMismatch("differential is not of the form t^-1 - phi")
    c0 = d.coeff(0)
    phi = inner.zero(inner.phi(1, A), A) if c0 is None else inner.neg(c0)
    return A, phi


# ---------------------------------------------------------------- characteristic sequences

@dataclass(frozen=True, eq=False)
class CharacteristicSequence:
    """Truncated ``0 -> sub -m-> middle -e-> A -> 0`` with its contraction.

    ``sub`` has summands ``Phi^j(A)`` for ``j = 1..w0`` and ``middle`` has
    ``Phi^k(A)`` for ``k = 0..w0``.  ``complex`` places ``A``, ``middle``,
    ``sub`` in degrees 0, 1, 2; ``contraction`` is ``gamma0: A -> middle``
    and ``gamma1: middle -> sub``.
    """

    variant: str
    cat: Category
    A: object
    w0: int
    sub: tuple
    middle: tuple
    m: object
    e: object
    gamma0: object
    gamma1: object
    complex: ChainComplex
    contraction: Contraction

    def block(self, which: str, i: int, j: int):
        f = {"m": self.m, "e": self.e, "gamma0": self.gamma0, "gamma1": self.gamma1}[which]
        tg = {"m": self.middle, "e": (self.A,), "gamma0": self.middle, "gamma1": self.sub}[which]
        sr = {"m": self.sub, "e": self.middle, "gamma0": (self.A,), "gamma1": self.middle}[which]
        return self.cat.entry(f, list(tg), list(sr), i, j)

    def split_ses(self) -> SplitSES:
        """The sequence as a degreewise split sequence of complexes concentrated in degree 0."""
        cat = self.cat
        S = ChainComplex.concentrated(cat, self.complex.obj(2))
        M = ChainComplex.concentrated(cat, self.complex.obj(1))
        Q = ChainComplex.concentrated(cat, self.A)
        ses = SplitSES(ChainMap(S, M, {0: self.m}), ChainMap(M, Q, {0: self.e}), {0: self.gamma1}, {0: self.gamma0})
        ses.verify()
        return ses


def characteristic_sequence(variant: str, x, w0: int) -> CharacteristicSequence:
    """Truncated characteristic sequence on the window of width ``w0``.

    ``variant="over-laurent"`` takes ``x = (L, A)`` with ``L`` the
    ``A_Phi[t^-1]`` instance and ``t^-1`` in the role of ``phi``;
    ``variant="over-base"`` takes a :class:`NilObject`.
    """
    if w0 < 1:
        raise WindowTooSmall(f"window width must be at least 1, got {w0}")
    if variant == "over-base":
        if not isinstance(x, NilObject):
            raise ObjectMismatch("over-base variant takes a NilObject")
        x.verify()
        cat, A, phi = x.cat, x.A, x.phi
    elif variant == "over-laurent":
        cat, A = x
        if not isinstance(cat, LaurentCat) or cat.mode != "nonpos":
            raise ObjectMismatch("over-laurent variant needs the A_Phi[t^-1] instance")
        phi = cat.t(A, -1)  # t^-1: Phi(A) -> A
    else:
        raise ValueError(f"unknown variant {variant!r}")

    P = lambda k: cat.phi(k, A)
    sub = tuple(P(j) for j in range(1, w0 + 1))
    mid = tuple(P(k) for k in range(0, w0 + 1))
    it = [twisted_iterate(cat, phi, k, A) for k in range(w0 + 1)]  # phi^(k): Phi^k(A) -> A
    neg_id = lambda X: cat.neg(cat.identity(X))

    # column j (summand Phi^j A): Phi^{j-1}(phi) into slot j-1, -id into slot j
    m_grid = [[None] * w0 for _ in range(w0 + 1)]
    for j in range(1, w0 + 1):
        m_grid[j - 1][j - 1] = cat.phi(j - 1, phi)
        m_grid[j][j - 1] = neg_id(P(j))
    m = cat.block(m_grid, mid, sub)
    e = cat.block([it], [A], mid)
    g0 = cat.block([[cat.identity(A)]] + [[None] for _ in range(w0)], mid, [A])
    # row j, column k >= j: -Phi^j(phi^(k-j))
    g1_grid = [[None] * (w0 + 1) for _ in range(w0)]
    for j in range(1, w0 + 1):
        for k in range(j, w0 + 1):
            g1_grid[j - 1][k] = cat.neg(cat.phi(j, it[k - j]))
    g1 = cat.block(g1_grid, sub, mid)

    S = cat.direct_sum(sub).obj
    M = cat.direct_sum(mid).obj
    K = ChainComplex.make(cat, 0, [A, M, S], {1: e, 2: m})
    gamma = Contraction(K, {0: g0, 1: g1})
    try:
        gamma.verify()
    except NotAContraction as exc:
        raise IdentityViolated("characteristic contraction", str(exc)) from exc
    out = CharacteristicSequence(variant, cat, A, w0, sub, mid, m, e, g0, g1, K, gamma)
    out.split_ses()
    return out


# ---------------------------------------------------------------- homotopy nilpotence

@dataclass(frozen=True, eq=False)
class HomotopyNilCertificate:
    n: int
    K: ChainHomotopy  # from 0 to phi^(n)

    def verify(self) -> None:
        self.K.verify()
        if not self.K.f.is_zero():
            raise BadCertificate("homotopy must start at the zero map")


@dataclass(frozen=True)
class NotHomotopyNilpotent:
    n_max: int


def chain_iterate(phi: ChainMap, n: int) -> ChainMap:
    """``phi^(n): Phi^n(C) -> C`` for a chain map ``phi: Phi(C) -> C``."""
    C = phi.tgt
    out = identity_map(C)
    for j in range(n):
        out = compose_maps(out, phi.phi(j))
    return out


def _check_chain_endo(C: ChainComplex, phi: ChainMap) -> None:
    if not (phi.src.same_as(C.phi(1)) and phi.tgt.same_as(C)):
        raise ObjectMismatch("phi must be a chain map Phi(C) -> C")
    phi.verify()


def homotopy_nilpotent_certify(C: ChainComplex, phi: ChainMap, n_max: int = DEFAULT_NMAX) -> HomotopyNilCertificate | NotHomotopyNilpotent:
    """First ``n <= n_max`` with ``phi^(n)`` null-homotopic, with the null-homotopy."""
    if not isinstance(C.cat, MatCat) or not C.cat.ring.is_field:
        raise WrongBase("homotopy nilpotence is decided over MatCat of a field")
    _check_chain_endo(C, phi)
    it = identity_map(C)
    for n in range(1, n_max + 1):
        it = compose_maps(it, phi.phi(n - 1))
        src = C.phi(n)
        f = ChainMap(src, C, it.comps)
        if f.is_zero():
            K = ChainHomotopy(zero_map(src, C), f, {})
        else:
            h = homotopy_solver(src, C).solve({k: f.at(k) for k in C.degrees()})
            if h is None:
                continue
            K = ChainHomotopy(zero_map(src, C), f, h)
        cert = HomotopyNilCertificate(n, K)
        cert.verify()
        return cert
    return NotHomotopyNilpotent(n_max)


def nilpotence_from_laurent_contraction(C: ChainComplex, phi: ChainMap, H: Contraction) -> HomotopyNilCertificate:
    """Null-homotopy of ``phi^(n)`` extracted from a contraction of ``chi(C, phi)`` over ``A_Phi[t, t^-1]``.

    The contraction yields a Laurent chain map ``y: C -> C`` and a homotopy
    ``b`` with ``y (1 - x) = 1 + (d b + b d)``, where ``x = phi . t``.
    Composing with the power series ``sum x^i`` gives
    ``sum x^i = y - (d B + B d)`` with ``B = b o sum x^i``; in any exponent
    ``n`` outside the support of ``y`` this reads
    ``phi^(n) = d K + K d`` with ``K = -B_n``.
    """

    _check_chain_endo(C, phi)
    L = LaurentCat(C.cat, "all")
    delta = _laurent_chain_map(L, C, phi)
    expected = cone(delta).complex
    if not H.C.same_as(expected):
        raise BadCertificate("contraction is not on chi(C, phi) over the full Laurent category")
    try:
        H = Contraction(expected, H.comps)
        H.verify()
        inv = inverse_from_cone_contraction(delta, H)
    except (NotAContraction, ObjectMismatch, IdentityViolated) as exc:
        raise BadCertificate(f"supplied contraction does not verify: {exc}") from exc

    inner = C.cat
    degs = list(C.degrees())
    M = 1 + max((c.max_abs_exponent for comps in (H.comps,) for c in comps.values()), default=0)
    tau = {n: L.t(C.obj(n), -1) for n in _span_ext(C)}  # Phi(C_n) -> C_n
    tinv = {n: L.t(inner.phi(1, C.obj(n)), 1) for n in _span_ext(C)}  # C_n -> Phi(C_n)
    y = {n: L.compose(tau[n], inv.g.at(n)) for n in degs}
    a = inv.h_src  # id ~ g delta on Phi(C)
    b = {n: L.comp(tau[n + 1], a.at(n), tinv[n]) for n in degs}
    L_b = max((f.max_abs_exponent for f in b.values()), default=0)

    for n in range(1, M + 1):
        if any(y[k].coeff(n) is not None for k in degs):
            continue
        target = chain_iterate(phi, n)
        K = {}
        for k in degs:
            acc = None
            for i in range(0, n + L_b + 1):
                j = n - i
                bj = b[k].coeff(j)
                if bj is None:
                    continue
                term = inner.compose(bj, inner.phi(j, twisted_iterate(inner, phi.at(k), i, C.obj(k))))
                acc = term if acc is None else inner.add(acc, term)
            if acc is not None:
                K[k] = inner.neg(acc)
        src = C.phi(n)
        f = ChainMap(src, C, target.comps)
        hom = ChainHomotopy(zero_map(src, C), f, K)
        if hom.is_valid():
            return HomotopyNilCertificate(n, hom)
    raise BadCertificate(f"no null-homotopy extracted up to exponent {M}")


def _span_ext(C: ChainComplex) -> range:
    if C.is_empty:
        return range(0)
    return range(C.lo - 1, C.hi + 2)
