"""The twisted projective line ``X``, the auxiliary category ``Y`` and a finite model of global sections.

An object of ``X`` is a triple ``(A+, f, A-)`` with ``A+`` in ``A_Phi[t]``,
``A-`` in ``A_Phi[t^-1]`` and ``f: j+ A+ -> j- A-`` invertible over
``A_Phi[t, t^-1]``.  Everything here runs over a matrix base category, so
objects of every Laurent category are ranks and ``Phi`` fixes them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .categories import Category, DirectSum, GradedCat, MatCat
from .chains import (
    ChainComplex,
    ChainMap,
    Contraction,
    SplitSES,
    _check_iso,
    cone,
    direct_sum_complex,
    suspension,
)
from .errors import (
    BadCertificate,
    IdentityViolated,
    NotInvertible,
    ObjectMismatch,
    SupportViolation,
    WrongBase,
)
from .homology import contraction_search
from .laurent import LaurentCat, LaurentMor, Window, truncate_mor, truncate_object, try_invert_laurent
from .linalg import solve_any, split_idempotent
from .matrix import Matrix


# ---------------------------------------------------------------- objects and morphisms

def _full(inner: Category) -> LaurentCat:
    return LaurentCat(inner, "all")


def _as_full(inner: Category, f: LaurentMor) -> LaurentMor:
    return _full(inner).make(f.src, f.tgt, f.coeff_map())


def _check_support(f: LaurentMor, mode: str, what: str) -> None:
    ok = (lambda i: i >= 0) if mode == "nonneg" else (lambda i: i <= 0)
    bad = [i for i in f.support if not ok(i)]
    if bad:
        raise SupportViolation(f"{what} has exponent {bad[0]} outside A_Phi[t{'' if mode == 'nonneg' else '^-1'}]")


@dataclass(frozen=True, eq=False)
class ProjLineObject:
    """``(A+, f, A-)`` together with the inverse of ``f``."""

    inner: Category
    Aplus: object
    Aminus: object
    f: LaurentMor
    f_inv: LaurentMor

    @staticmethod
    def make(inner: Category, Aplus, Aminus, f: LaurentMor, f_inv: Optional[LaurentMor] = None) -> "ProjLineObject":
        L = _full(inner)
        f = _as_full(inner, f)
        if not inner.obj_equal(f.src, Aplus) or not inner.obj_equal(f.tgt, Aminus):
            raise ObjectMismatch("f must map A+ to A-")
        if f_inv is None:
            try:
                f_inv = try_invert_laurent(L, f)
            except NotInvertible as exc:
                raise BadCertificate(f"gluing map is not invertible: {exc}") from exc
        else:
            f_inv = _as_full(inner, f_inv)
        x = ProjLineObject(inner, Aplus, Aminus, f, f_inv)
        x.verify()
        return x

    def verify(self) -> None:
        L = _full(self.inner)
        if L.compose(self.f, self.f_inv) != L.identity(self.Aminus):
            raise BadCertificate("f o f_inv != id")
        if L.compose(self.f_inv, self.f) != L.identity(self.Aplus):
            raise BadCertificate("f_inv o f != id")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProjLineObject)
            and self.inner.obj_equal(self.Aplus, other.Aplus)
            and self.inner.obj_equal(self.Aminus, other.Aminus)
            and self.f == other.f
            and self.f_inv == other.f_inv
        )

    def __hash__(self) -> int:
        return hash((self.Aplus, self.Aminus, self.f))

    @property
    def span(self) -> int:
        """Largest absolute ``t``-exponent among ``f`` and its inverse."""
        return max(self.f.max_abs_exponent, self.f_inv.max_abs_exponent)


@dataclass(frozen=True, eq=False)
class ProjLineMorphism:
    """``(u+, u-)`` with ``g o j+ u+ = j- u- o f`` for ``f = src.f`` and ``g = tgt.f``."""

    src: ProjLineObject
    tgt: ProjLineObject
    uplus: LaurentMor
    uminus: LaurentMor

    @staticmethod
    def make(src: ProjLineObject, tgt: ProjLineObject, uplus: LaurentMor, uminus: LaurentMor) -> "ProjLineMorphism":
        inner = src.inner
        uplus = LaurentCat(inner, "nonneg").make(uplus.src, uplus.tgt, uplus.coeff_map())
        uminus = LaurentCat(inner, "nonpos").make(uminus.src, uminus.tgt, uminus.coeff_map())
        u = ProjLineMorphism(src, tgt, uplus, uminus)
        u.verify()
        return u

    def verify(self) -> None:
        inner = self.src.inner
        L = _full(inner)
        if not (inner.obj_equal(self.uplus.src, self.src.Aplus) and inner.obj_equal(self.uplus.tgt, self.tgt.Aplus)):
            raise ObjectMismatch("u+ has wrong ends")
        if not (inner.obj_equal(self.uminus.src, self.src.Aminus) and inner.obj_equal(self.uminus.tgt, self.tgt.Aminus)):
            raise ObjectMismatch("u- has wrong ends")
        _check_support(self.uplus, "nonneg", "u+")
        _check_support(self.uminus, "nonpos", "u-")
        left = L.compose(self.tgt.f, _as_full(inner, self.uplus))
        right = L.compose(_as_full(inner, self.uminus), self.src.f)
        if left != right:
            raise IdentityViolated("g o j+(u+) = j-(u-) o f")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProjLineMorphism)
            and self.src == other.src
            and self.tgt == other.tgt
            and self.uplus == other.uplus
            and self.uminus == other.uminus
        )

    def __hash__(self) -> int:
        return hash((self.uplus, self.uminus))


class XCat(Category):
    """The additive category ``X`` over a base category."""

    def __init__(self, inner: Category):
        self.inner = inner
        self.ring = inner.ring
        self.plus = LaurentCat(inner, "nonneg")
        self.minus = LaurentCat(inner, "nonpos")
        self.full = LaurentCat(inner, "all")

    def __eq__(self, other):
        return isinstance(other, XCat) and other.inner == self.inner

    def __hash__(self):
        return hash(("XCat", self.inner))

    def __repr__(self):
        return f"XCat({self.inner!r})"

    def obj(self, Aplus, Aminus, f: LaurentMor, f_inv: Optional[LaurentMor] = None) -> ProjLineObject:
        return ProjLineObject.make(self.inner, Aplus, Aminus, f, f_inv)

    def mor(self, src: ProjLineObject, tgt: ProjLineObject, uplus: LaurentMor, uminus: LaurentMor) -> ProjLineMorphism:
        return ProjLineMorphism.make(src, tgt, uplus, uminus)

    def zero_object(self):
        z = self.inner.zero_object()
        e = self.full.zero(z, z)
        return ProjLineObject(self.inner, z, z, e, e)

    def is_zero_object(self, x) -> bool:
        return self.inner.is_zero_object(x.Aplus) and self.inner.is_zero_object(x.Aminus)

    def direct_sum(self, objs: Sequence[ProjLineObject]) -> DirectSum:
        objs = tuple(objs)
        P = self.plus.direct_sum([x.Aplus for x in objs])
        M = self.minus.direct_sum([x.Aminus for x in objs])
        f = self.full.diag([x.f for x in objs], [x.Aminus for x in objs], [x.Aplus for x in objs])
        g = self.full.diag([x.f_inv for x in objs], [x.Aplus for x in objs], [x.Aminus for x in objs])
        S = ProjLineObject(self.inner, P.obj, M.obj, f, g)
        injs = tuple(ProjLineMorphism(x, S, a, b) for x, a, b in zip(objs, P.injections, M.injections))
        projs = tuple(ProjLineMorphism(S, x, a, b) for x, a, b in zip(objs, P.projections, M.projections))
        return DirectSum(S, injs, projs, objs)

    def src(self, u):
        return u.src

    def tgt(self, u):
        return u.tgt

    def identity(self, x):
        return ProjLineMorphism(x, x, self.plus.identity(x.Aplus), self.minus.identity(x.Aminus))

    def zero(self, x, y):
        return ProjLineMorphism(x, y, self.plus.zero(x.Aplus, y.Aplus), self.minus.zero(x.Aminus, y.Aminus))

    def compose(self, v, u):
        self.check_composable(v, u)
        return ProjLineMorphism(u.src, v.tgt, self.plus.compose(v.uplus, u.uplus), self.minus.compose(v.uminus, u.uminus))

    def add(self, u, v):
        if u.src != v.src or u.tgt != v.tgt:
            raise ObjectMismatch("cannot add morphisms with different ends")
        return ProjLineMorphism(u.src, u.tgt, self.plus.add(u.uplus, v.uplus), self.minus.add(u.uminus, v.uminus))

    def neg(self, u):
        return ProjLineMorphism(u.src, u.tgt, self.plus.neg(u.uplus), self.minus.neg(u.uminus))

    def is_zero(self, u) -> bool:
        return self.plus.is_zero(u.uplus) and self.minus.is_zero(u.uminus)

    def phi(self, power, x):
        L = self.full
        if isinstance(x, ProjLineObject):
            return ProjLineObject(self.inner, L.phi(power, x.Aplus), L.phi(power, x.Aminus), L.phi(power, x.f), L.phi(power, x.f_inv))
        return ProjLineMorphism(self.phi(power, x.src), self.phi(power, x.tgt), self.plus.phi(power, x.uplus), self.minus.phi(power, x.uminus))

    def rank(self, x) -> int:
        return self.inner.rank(x.Aplus)


# ---------------------------------------------------------------- the auxiliary category Y

@dataclass(frozen=True, eq=False)
class YObject:
    """``(A, B, f)`` with ``A`` in ``A_Phi[t]``, ``B`` in ``A_Phi[t, t^-1]`` and ``f: j+ A -> B`` invertible."""

    inner: Category
    A: object
    B: object
    f: LaurentMor
    f_inv: LaurentMor

    @staticmethod
    def make(inner: Category, A, B, f: LaurentMor, f_inv: LaurentMor) -> "YObject":
        y = YObject(inner, A, B, _as_full(inner, f), _as_full(inner, f_inv))
        y.verify()
        return y

    def verify(self) -> None:
        L = _full(self.inner)
        if not (self.inner.obj_equal(self.f.src, self.A) and self.inner.obj_equal(self.f.tgt, self.B)):
            raise ObjectMismatch("f must map A to B")
        if L.compose(self.f, self.f_inv) != L.identity(self.B) or L.compose(self.f_inv, self.f) != L.identity(self.A):
            raise BadCertificate("supplied inverse is not two-sided")

    def __eq__(self, other) -> bool:
        return isinstance(other, YObject) and (self.A, self.B, self.f, self.f_inv) == (other.A, other.B, other.f, other.f_inv)

    def __hash__(self) -> int:
        return hash((self.A, self.B, self.f))


@dataclass(frozen=True, eq=False)
class YMorphism:
    """``(u, w)`` with ``u`` in ``A_Phi[t]``, ``w`` in ``A_Phi[t, t^-1]`` and ``g o j+ u = w o f``."""

    src: YObject
    tgt: YObject
    u: LaurentMor
    w: LaurentMor

    @staticmethod
    def make(src: YObject, tgt: YObject, u: LaurentMor, w: LaurentMor) -> "YMorphism":
        inner = src.inner
        _check_support(u, "nonneg", "u")
        m = YMorphism(src, tgt, LaurentCat(inner, "nonneg").make(u.src, u.tgt, u.coeff_map()), _as_full(inner, w))
        L = _full(inner)
        if L.compose(tgt.f, _as_full(inner, m.u)) != L.compose(m.w, src.f):
            raise IdentityViolated("g o j+(u) = w o f")
        return m

    def __eq__(self, other) -> bool:
        return isinstance(other, YMorphism) and (self.src, self.tgt, self.u, self.w) == (other.src, other.tgt, other.u, other.w)

    def __hash__(self) -> int:
        return hash((self.u, self.w))


# ---------------------------------------------------------------- functors

FUNCTORS = ("k+", "k-", "l0", "l1", "s", "s^-1", "u", "v")


def functor(name: str, inner: Category, x):
    """Apply one of :data:`FUNCTORS` to an object or morphism.

    ``k+`` and ``k-`` read off the two halves of an ``X`` datum; ``l0`` and
    ``l1`` embed base data; ``s`` and ``s^-1`` reglue by ``t^{+-1}``; ``u``
    and ``v`` go between ``A_Phi[t]`` and ``Y``.
    """
    X = XCat(inner)
    L = X.full
    plus, minus = X.plus, X.minus
    if name in ("k+", "k-"):
        if isinstance(x, ProjLineObject):
            return x.Aplus if name == "k+" else x.Aminus
        if isinstance(x, ProjLineMorphism):
            return x.uplus if name == "k+" else x.uminus
        raise ObjectMismatch(f"{name} acts on X")
    if name == "l0":
        if isinstance(x, Matrix):
            src, tgt = l0(inner, inner.src(x)), l0(inner, inner.tgt(x))
            return ProjLineMorphism.make(src, tgt, plus.mono(x, 0), minus.mono(x, 0))
        _require_base_object(inner, x, name)
        return l0(inner, x)
    if name == "l1":
        if isinstance(x, Matrix):
            src, tgt = l1(inner, inner.src(x)), l1(inner, inner.tgt(x))
            return ProjLineMorphism.make(src, tgt, plus.mono(inner.phi(-1, x), 0), minus.mono(x, 0))
        _require_base_object(inner, x, name)
        return l1(inner, x)
    if name in ("s", "s^-1"):
        k = 1 if name == "s" else -1
        if isinstance(x, ProjLineObject):
            return shift(x, k)
        if isinstance(x, ProjLineMorphism):
            return ProjLineMorphism.make(shift(x.src, k), shift(x.tgt, k), plus.phi(-k, x.uplus), x.uminus)
        raise ObjectMismatch(f"{name} acts on X")
    if name == "u":
        if isinstance(x, LaurentMor):
            _check_support(x, "nonneg", "u")
            return YMorphism.make(functor("u", inner, x.src), functor("u", inner, x.tgt), x, _as_full(inner, x))
        _require_base_object(inner, x, name)
        return YObject.make(inner, x, x, L.identity(x), L.identity(x))
    if name == "v":
        if isinstance(x, YObject):
            return x.A
        if isinstance(x, YMorphism):
            return x.u
        raise ObjectMismatch("v acts on Y")
    raise ValueError(f"unknown functor {name!r}")


def _require_base_object(inner: Category, x, name: str) -> None:
    if isinstance(x, (ProjLineObject, ProjLineMorphism, YObject, YMorphism, LaurentMor)):
        raise ObjectMismatch(f"{name} acts on base data")
    if isinstance(inner, MatCat) and not isinstance(x, int):
        raise ObjectMismatch(f"{name} expects a rank, got {type(x).__name__}")


def l0(inner: Category, A) -> ProjLineObject:
    """``(A, id, A)``."""
    L = _full(inner)
    return ProjLineObject.make(inner, A, A, L.identity(A), L.identity(A))


def l1(inner: Category, A) -> ProjLineObject:
    """``(Phi^-1 A, id . t, A)`` with inverse ``id . t^-1``."""
    L = _full(inner)
    B = inner.phi(-1, A)
    return ProjLineObject.make(inner, B, A, L.t(A, 1), L.make(A, B, {-1: inner.identity(B)}))


def shift(x: ProjLineObject, k: int = 1) -> ProjLineObject:
    """``s^k``: ``(Phi^-k C+, f o t^k, C-)``."""
    inner = x.inner
    L = _full(inner)
    P = inner.phi(-k, x.Aplus)
    tk = L.t(x.Aplus, k)  # Phi^-k C+ -> C+
    tk_inv = L.make(x.Aplus, P, {-k: inner.identity(inner.phi(-k, x.Aplus))})
    return ProjLineObject.make(inner, P, x.Aminus, L.compose(x.f, tk), L.compose(tk_inv, x.f_inv))


# ---------------------------------------------------------------- complexes over X

def x_complex(inner: Category, lo: int, objs: Sequence[ProjLineObject], diffs: dict | Sequence | None = None) -> ChainComplex:
    """Chain complex over ``X``; every differential is checked as a morphism of ``X``."""
    X = XCat(inner)
    if isinstance(diffs, dict):
        items = diffs.values()
    else:
        items = diffs or ()
    for d in items:
        d.verify()
    return ChainComplex.make(X, lo, objs, diffs)


def apply_objectwise(name: str, C: ChainComplex) -> ChainComplex:
    """Apply an additive functor degreewise to a complex."""
    X = C.cat
    inner = X.inner if isinstance(X, XCat) else X
    if name in ("k+", "k-"):
        tgt = LaurentCat(inner, "nonneg" if name == "k+" else "nonpos")
    elif name in ("l0", "l1", "s", "s^-1"):
        tgt = XCat(inner)
    else:
        raise ValueError(f"{name} is not applied to complexes")
    objs = [functor(name, inner, A) for A in C.objs]
    diffs = {n: functor(name, inner, C.d(n)) for n in C.degrees() if n > C.lo}
    return ChainComplex.make(tgt, C.lo, objs, diffs)


def gluing_map(C: ChainComplex) -> tuple[ChainMap, ChainMap]:
    """``f: j+ C+ -> j- C-`` and its inverse as chain maps over ``A_Phi[t, t^-1]``."""
    X: XCat = C.cat
    L = X.full
    lift = lambda D: ChainComplex.make(L, D.lo, D.objs, {n: _as_full(X.inner, D.d(n)) for n in D.degrees() if n > D.lo})
    P, M = lift(apply_objectwise("k+", C)), lift(apply_objectwise("k-", C))
    f = ChainMap(P, M, {n: C.obj(n).f for n in C.degrees()})
    g = ChainMap(M, P, {n: C.obj(n).f_inv for n in C.degrees()})
    f.verify()
    g.verify()
    return f, g


# ---------------------------------------------------------------- finite model of global sections

@dataclass
class GammaModel:
    """Finite model ``G = Sigma^-1 cone(g: C+[0, N-1] -> R)``.

    ``R`` is the image of the idempotent ``e`` on ``C-[1, 2N-1]``;
    ``rho``, ``sigma`` split it (``sigma rho = e``, ``rho sigma = id``).
    """

    N: int
    source: ChainComplex  # C+[0, N-1], flattened
    window: ChainComplex  # C-[1, 2N-1], flattened
    idempotent: dict
    rho: dict
    sigma: dict
    R: ChainComplex
    g: ChainMap
    G: ChainComplex
    checks: int = 0

    def verify(self) -> None:
        """Re-check every identity the model rests on."""
        cat = self.window.cat
        for n in self.window.degrees():
            e = self.idempotent[n]
            if e @ e != e:
                raise IdentityViolated("e o e = e", n)
            if self.sigma[n] @ self.rho[n] != e:
                raise IdentityViolated("sigma o rho = e", n)
            if self.rho[n] @ self.sigma[n] != cat.identity(self.R.obj(n)):
                raise IdentityViolated("rho o sigma = id", n)
        self.R.verify()
        self.g.verify()
        self.G.verify()


def gamma_bound(C: ChainComplex) -> int:
    """``1 +`` the largest absolute exponent of any gluing map or its inverse."""
    return 1 + max((C.obj(n).span for n in C.degrees()), default=0)


def _trunc(L: LaurentCat, f: LaurentMor, src: Window, tgt: Window) -> Matrix:
    G = GradedCat(L.inner)
    return G.flatten(truncate_mor(L, f, src, tgt))


def _trunc_complex(L: LaurentCat, D: ChainComplex, w: Window) -> ChainComplex:
    inner = L.inner
    G = GradedCat(inner)
    objs = [G.flatten_obj(truncate_object(A, w)) for A in D.objs]
    diffs = {n: _trunc(L, D.d(n), w, w) for n in D.degrees() if n > D.lo}
    return ChainComplex.make(inner, D.lo, objs, diffs)


def gamma_finite(C: ChainComplex, N: Optional[int] = None) -> GammaModel:
    """Finite chain complex over the base computing global sections of a complex over ``X``.

    ``C+[0, N-1]`` is the quotient of ``C+[0, inf]`` by ``C+[N, inf]``; the
    cokernel ``R`` of ``f: C+[N, inf] -> C-[1, inf]`` is cut out of the finite
    window ``C-[1, 2N-1]`` by ``e = id - f o f^-1`` and ``g = -rho o f``.
    The bounds that make the window exact are checked, not assumed.
    """
    N = _gamma_setup(C, N)
    L = C.cat.full
    rho, sigma = {}, {}
    for n in C.degrees():
        x = C.obj(n)
        _check_window(L, x, N)
        e = window_idempotent(L, x, N)
        if e @ e != e:
            raise IdentityViolated("window idempotent e o e = e", n)
        rho[n], sigma[n] = split_idempotent(e)
    return gamma_from_splitting(C, N, rho, sigma)


def _gamma_setup(C: ChainComplex, N: Optional[int]) -> int:
    X = C.cat
    if not isinstance(X, XCat):
        raise ObjectMismatch("gamma_finite expects a complex over X")
    inner = X.inner
    if not isinstance(inner, MatCat) or not (inner.ring.is_field or inner.ring.is_integers):
        raise WrongBase("the finite model needs idempotent splitting over a field or the integers")
    need = gamma_bound(C)
    if N is None:
        return need
    if N < need:
        raise BadCertificate(f"N = {N} is below the support bound {need}")
    return N


def window_idempotent(L: LaurentCat, x: ProjLineObject, N: int) -> Matrix:
    """``e = id - f o f^-1`` on ``A-[1, 2N-1]``, through the weights ``N..3N-2`` that ``f^-1`` reaches."""
    w_win, w_mid = Window(1, 2 * N - 1), Window(N, 3 * N - 2)
    finv = _trunc(L, x.f_inv, w_win, w_mid)
    fback = _trunc(L, x.f, w_mid, w_win)
    return L.inner.identity(_total(x.Aminus, w_win)) - fback @ finv


def gamma_from_splitting(C: ChainComplex, N: int, rho: dict, sigma: dict) -> GammaModel:
    """Assemble and verify the finite model from a splitting ``(rho, sigma)`` of each window idempotent."""
    N = _gamma_setup(C, N)
    X: XCat = C.cat
    inner, L = X.inner, X.full
    P, M = apply_objectwise("k+", C), apply_objectwise("k-", C)
    w_src, w_win = Window(0, N - 1), Window(1, 2 * N - 1)
    if C.is_empty:
        Z = ChainComplex.zero(inner)
        g = ChainMap(Z, Z, {})
        return GammaModel(N, Z, Z, {}, {}, {}, Z, g, Z, 0)
    Cp = _trunc_complex(L, P, w_src)
    Cw = _trunc_complex(L, M, w_win)
    checks = 0
    e, gm, ranks = {}, {}, {}
    for n in C.degrees():
        x = C.obj(n)
        e[n] = window_idempotent(L, x, N)
        r, i = rho[n], sigma[n]
        if i.rows != Cw.rank(n) or r.cols != Cw.rank(n) or r.rows != i.cols:
            raise ObjectMismatch(f"splitting in degree {n} has wrong shape")
        if i @ r != e[n]:
            raise IdentityViolated("sigma o rho = e", n)
        if r @ i != inner.identity(r.rows):
            raise IdentityViolated("rho o sigma = id", n)
        ranks[n] = r.rows
        gm[n] = -(r @ _trunc(L, x.f, w_src, w_win))
        checks += 2
    for n in C.degrees():
        if n > C.lo:
            # the window differential preserves the image of e
            if Cw.d(n) @ e[n] != e[n - 1] @ Cw.d(n) @ e[n]:
                raise IdentityViolated("d preserves the image of e", n)
            checks += 1
    diffs = {n: rho[n - 1] @ Cw.d(n) @ sigma[n] for n in C.degrees() if n > C.lo}
    R = ChainComplex.make(inner, C.lo, [ranks[n] for n in C.degrees()], diffs)
    g = ChainMap(Cp, R, gm)
    g.verify()
    checks += len(C.degrees())
    G = suspension(cone(g).complex, -1)
    model = GammaModel(N, Cp, Cw, e, dict(rho), dict(sigma), R, g, G, checks)
    model.verify()
    return model


def _check_window(L: LaurentCat, x: ProjLineObject, N: int) -> None:
    """The two facts behind the window: ``f^-1 f = id`` on ``C+[N, inf]`` and ``e = 0`` on ``C-[2N, inf]``.

    Both are checked on the band of weights whose images stay inside a
    window of width ``4N``; the support bound makes every further weight a
    translate of one of these.
    """
    inner = L.inner
    band = Window(N, 3 * N - 1)
    reach = Window(1, 4 * N)
    a = _trunc(L, x.f, band, reach)
    b = _trunc(L, x.f_inv, reach, Window(N, 5 * N))
    top = Window(2 * N, 3 * N - 1)
    if b @ a != _weight_inclusion(inner.ring, x.Aplus, Window(N, 5 * N), band):
        raise IdentityViolated("f^-1 o f = id on C+[N, inf]")
    u = _trunc(L, x.f_inv, top, Window(N, 4 * N - 1))
    v = _trunc(L, x.f, Window(N, 4 * N - 1), Window(1, 5 * N))
    ident = _trunc(L, _full(inner).identity(x.Aminus), top, Window(1, 5 * N))
    if v @ u != ident:
        raise IdentityViolated("e vanishes on C-[2N, inf]")


def _total(A, w: Window) -> int:
    return A * len(w.weights())


def _rows_for(A, outer: Window, inner_w: Window) -> list[int]:
    off = (inner_w.a - outer.a) * A
    return list(range(off, off + _total(A, inner_w)))


# ---------------------------------------------------------------- additivity

@dataclass
class GammaSumIso:
    """Mutually inverse chain maps ``G(x) + G(y) <-> G(x + y)`` built with a common ``N``."""

    forward: ChainMap
    backward: ChainMap


def _interleave(a: int, b: int, weights: int) -> list[int]:
    """Positions of the flattened ``(A[w] + B[w])`` coordinates inside ``A[w] (+) B[w]`` order."""
    left, right = [], []
    for k in range(weights):
        base = k * (a + b)
        left += list(range(base, base + a))
        right += list(range(base + a, base + a + b))
    return left + right


def gamma_sum_iso(C: ChainComplex, D: ChainComplex) -> GammaSumIso:
    """Verified isomorphism ``Gamma(C) + Gamma(D) -> Gamma(C + D)`` (common window)."""

    X = C.cat
    S = direct_sum_complex(X, [C, D]).total
    N = max(gamma_bound(C), gamma_bound(D), 1)
    mc, md, ms = gamma_finite(C, N), gamma_finite(D, N), gamma_finite(S, N)
    inner = X.inner
    ring = inner.ring
    fw, bw = {}, {}
    Gsum = direct_sum_complex(inner, [mc.G, md.G]).total
    for n in range(S.lo - 1, S.hi + 1):
        # degree n of G: C+[0,N-1]_{n} (from the cone, shifted) then R_{n+1}
        pc, pd = C.obj(n).Aplus if n in C.degrees() else 0, D.obj(n).Aplus if n in D.degrees() else 0
        qc, qd = C.obj(n + 1).Aminus if n + 1 in C.degrees() else 0, D.obj(n + 1).Aminus if n + 1 in D.degrees() else 0
        src_perm = _interleave(pc, pd, N)
        Pp = Matrix.identity(ring, len(src_perm)).cols_of(src_perm)  # pair coords -> sum coords
        win_perm = _interleave(qc, qd, 2 * N - 1)
        Pw = Matrix.identity(ring, len(win_perm)).cols_of(win_perm)
        sig = Matrix.diag(ring, [_get(mc.sigma, n + 1, ring, qc * (2 * N - 1), mc.R.rank(n + 1)), _get(md.sigma, n + 1, ring, qd * (2 * N - 1), md.R.rank(n + 1))])
        rh = Matrix.diag(ring, [_get(mc.rho, n + 1, ring, mc.R.rank(n + 1), qc * (2 * N - 1)), _get(md.rho, n + 1, ring, md.R.rank(n + 1), qd * (2 * N - 1))])
        rs = _get(ms.rho, n + 1, ring, ms.R.rank(n + 1), (qc + qd) * (2 * N - 1))
        ss = _get(ms.sigma, n + 1, ring, (qc + qd) * (2 * N - 1), ms.R.rank(n + 1))
        Rf = rs @ Pw @ sig
        Rb = rh @ Pw.T @ ss
        # reorder (C+_c, R_c, C+_d, R_d) <-> (C+_s, R_s)
        a, b = pc * N, mc.R.rank(n + 1)
        c, d = pd * N, md.R.rank(n + 1)
        blockf = Matrix.block(ring, [[Pp.cols_of(range(0, a)), None, Pp.cols_of(range(a, a + c)), None], [None, Rf.cols_of(range(0, b)), None, Rf.cols_of(range(b, b + d))]], [a + c, ms.R.rank(n + 1)], [a, b, c, d])
        blockb = Matrix.block(ring, [[Pp.T.rows_of(range(0, a)), None], [None, Rb.rows_of(range(0, b))], [Pp.T.rows_of(range(a, a + c)), None], [None, Rb.rows_of(range(b, b + d))]], [a, b, c, d], [a + c, ms.R.rank(n + 1)])
        fw[n], bw[n] = blockf, blockb
    forward = ChainMap(Gsum, ms.G, fw)
    backward = ChainMap(ms.G, Gsum, bw)
    forward.verify()
    backward.verify()
    _check_iso(forward, backward)
    return GammaSumIso(forward, backward)


def _get(d: dict, n: int, ring, rows: int, cols: int) -> Matrix:
    return d[n] if n in d else Matrix.zeros(ring, rows, cols)


# ---------------------------------------------------------------- the truncated sequence T(C)

@dataclass
class TSequence:
    """``0 -> C -> C[0,M] + C[-M,0] -> C[-M,M] -> 0`` with a degreewise splitting and a comparison contraction."""

    M: int
    ses: SplitSES
    comparison: Contraction


def _const_trunc(C: ChainComplex, w: Window) -> ChainComplex:
    L = LaurentCat(C.cat, "all")
    lifted = ChainComplex.make(L, C.lo, C.objs, {n: L.mono(C.d(n), 0) for n in C.degrees() if n > C.lo})
    return _trunc_complex(L, lifted, w)


def _weight_inclusion(ring, A: int, outer: Window, inner_w: Window) -> Matrix:
    """Columns placing ``A[inner_w]`` inside ``A[outer]``."""
    return Matrix.identity(ring, _total(A, outer)).cols_of(_rows_for(A, outer, inner_w))


def t_sequence(C: ChainComplex, M: int = 1) -> TSequence:
    """Build and verify the truncated sequence exhibiting ``C`` as a kernel of weight truncations."""

    if M < 1:
        raise BadCertificate("window M must be at least 1")
    cat = C.cat
    ring = cat.ring
    pos, neg, full = Window(0, M), Window(-M, 0), Window(-M, M)
    Cp, Cn, Cf = _const_trunc(C, pos), _const_trunc(C, neg), _const_trunc(C, full)
    mid = direct_sum_complex(cat, [Cp, Cn]).total
    i_c, p_c, r_c, t_c = {}, {}, {}, {}
    for n in C.degrees():
        A = C.obj(n)
        zero_p = _weight_inclusion(ring, A, pos, Window(0, 0))
        zero_n = _weight_inclusion(ring, A, neg, Window(0, 0))
        i_c[n] = zero_p.vstack(zero_n)
        jp = _weight_inclusion(ring, A, full, pos)
        jn = _weight_inclusion(ring, A, full, neg)
        p_c[n] = (-jp).hstack(jn)
        r_c[n] = zero_p.T.hstack(Matrix.zeros(ring, A, _total(A, neg)))
        # t: positive weights go to -C[0,M], the rest to C[-M,0]
        plus_only = _weight_inclusion(ring, A, full, Window(1, M))
        tp = -(_weight_inclusion(ring, A, pos, Window(1, M)) @ plus_only.T)
        tn = jn.T
        t_c[n] = tp.vstack(tn)
    i = ChainMap(C, mid, i_c)
    p = ChainMap(mid, Cf, p_c)
    ses = SplitSES(i, p, r_c, t_c)
    ses.verify()
    K = cone(i).complex
    cmp = ChainMap(K, Cf, {n: Matrix.zeros(ring, Cf.rank(n), C.rank(n - 1)).hstack(p.at(n)) for n in K.degrees()})
    cmp.verify()
    gamma = contraction_search(cone(cmp).complex)
    if not isinstance(gamma, Contraction):
        raise IdentityViolated(f"comparison cone is not contractible: {gamma.describe()}")
    return TSequence(M, ses, gamma)


# ---------------------------------------------------------------- exact structure

@dataclass(frozen=True)
class LaurentSplitting:
    r: LaurentMor
    t: LaurentMor


def _laurent_solve_left(L: LaurentCat, i: LaurentMor, K: int) -> Optional[LaurentMor]:
    """``r`` with ``r o i = id`` and exponents in ``0..K`` (or ``-K..0``)."""
    inner = L.inner
    ring = inner.ring
    a, b = i.src, i.tgt
    sgn = 1 if L.mode == "nonneg" else -1
    js = [sgn * j for j in range(K + 1)]
    ks = sorted({j + e for j in js for e in i.support} | {0})
    im = i.coeff_map()
    # sum_j r_j Phi^j(i_{k-j}) = delta_{k0}; unknown X = [r_j]_j, a x b(K+1)
    cols = []
    rhs = []
    for k in ks:
        blocks = [inner.phi(j, im[k - j]) if (k - j) in im else Matrix.zeros(ring, b, a) for j in js]
        cols.append(Matrix.block(ring, [[B] for B in blocks], [b] * len(js), [a]) if js else None)
        rhs.append(Matrix.identity(ring, a) if k == 0 else Matrix.zeros(ring, a, a))
    big = cols[0].hstack(*cols[1:]) if len(cols) > 1 else cols[0]
    R = rhs[0].hstack(*rhs[1:]) if len(rhs) > 1 else rhs[0]
    Xt = solve_any(big.T, R.T)
    if Xt is None:
        return None
    X = Xt.T
    return L.make(b, a, {j: X.sub(0, a, idx * b, (idx + 1) * b) for idx, j in enumerate(js)})


def _laurent_solve_right(L: LaurentCat, p: LaurentMor, K: int) -> Optional[LaurentMor]:
    """``t`` with ``p o t = id``; coefficients are solved in left form ``t^m tau_m`` to stay linear."""
    inner = L.inner
    ring = inner.ring
    b, c = p.src, p.tgt
    sgn = 1 if L.mode == "nonneg" else -1
    ms = [sgn * m for m in range(K + 1)]
    ks = sorted({j + m for j in p.support for m in ms} | {0})
    pm = p.coeff_map()
    rows, rhs = [], []
    for k in ks:
        # Phi^-k of sum_{j+m=k} p_j Phi^k(tau_m) = sum Phi^-k(p_j) tau_m
        blocks = [inner.phi(-k, pm[k - m]) if (k - m) in pm else Matrix.zeros(ring, c, b) for m in ms]
        rows.append(blocks[0].hstack(*blocks[1:]) if len(blocks) > 1 else blocks[0])
        rhs.append(Matrix.identity(ring, c) if k == 0 else Matrix.zeros(ring, c, c))
    big = rows[0].vstack(*rows[1:]) if len(rows) > 1 else rows[0]
    R = rhs[0].vstack(*rhs[1:]) if len(rhs) > 1 else rhs[0]
    T = solve_any(big, R)
    if T is None:
        return None
    # tau_m . t^m written as Phi^m(tau_m) . t^m
    return L.make(c, b, {m: inner.phi(m, T.sub(idx * b, (idx + 1) * b, 0, c)) for idx, m in enumerate(ms)})


def laurent_split_exact(L: LaurentCat, i: LaurentMor, p: LaurentMor, K: int = 4) -> Optional[LaurentSplitting]:
    """A splitting of ``0 -> A -i-> B -p-> C -> 0`` with exponents bounded by ``K``, or ``None``.

    With ``p i = 0``, any left inverse ``r`` of ``i`` and section ``t`` of
    ``p`` corrected to ``t - i r t`` make ``[i t]`` a split monomorphism of
    equal-rank free objects; it is an isomorphism exactly when
    ``i r + t p = id``, which is checked last.
    """
    if not L.is_zero(L.compose(p, i)):
        return None
    r = _laurent_solve_left(L, i, K)
    t = _laurent_solve_right(L, p, K)
    if r is None or t is None:
        return None
    t = L.sub(t, L.comp(i, r, t))
    if L.add(L.compose(i, r), L.compose(t, p)) != L.identity(i.tgt):
        return None
    return LaurentSplitting(r, t)


@dataclass(frozen=True)
class XExactness:
    plus: Optional[LaurentSplitting]
    minus: Optional[LaurentSplitting]

    @property
    def exact(self) -> bool:
        return self.plus is not None and self.minus is not None


def x_sequence_exact(i: ProjLineMorphism, p: ProjLineMorphism, K: int = 4) -> XExactness:
    """A sequence in ``X`` is exact when both halves are split exact."""
    if i.tgt != p.src:
        raise ObjectMismatch("i and p are not composable")
    inner = i.src.inner
    X = XCat(inner)
    return XExactness(laurent_split_exact(X.plus, i.uplus, p.uplus, K), laurent_split_exact(X.minus, i.uminus, p.uminus, K))
