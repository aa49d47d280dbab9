"""Contraction search, homology, homology retracts and a linear homotopy solver.

These are decision procedures over computable bases: matrix categories over
a field or the integers, their idempotent completion over a field, and
graded sums thereof (flattened to matrices).
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .categories import GradedCat, IdemCat, IdemMor, MatCat
from .chains import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    Contraction,
    _span,
    compose_maps,
    cone,
    cone_functorial,
    direct_sum_complex,
    identity_map,
)
from .errors import IdentityViolated, NotAContraction, WrongBase
from .linalg import complement_columns, inverse, rank, rank_kernel_image, rref, smith_normal_form, solve, solve_any, solve_z
from .matrix import Matrix


# ---------------------------------------------------------------- flattening

def flatten_complex(C: ChainComplex) -> ChainComplex:
    """Graded complex to a matrix complex (summands in increasing weight)."""
    cat = C.cat
    if not isinstance(cat, GradedCat):
        return C
    inner = cat.inner
    return ChainComplex.make(inner, C.lo, [cat.flatten_obj(A) for A in C.objs], {n: cat.flatten(C.d(n)) for n in C.degrees() if n > C.lo}, check=False)


def flatten_map(f: ChainMap) -> ChainMap:
    cat = f.cat
    if not isinstance(cat, GradedCat):
        return f
    return ChainMap(flatten_complex(f.src), flatten_complex(f.tgt), {n: cat.flatten(f.at(n)) for n in f.degrees()})


# ---------------------------------------------------------------- witnesses

@dataclass(frozen=True)
class HomologyWitness:
    """First degree where a complex fails to be contractible."""

    degree: int
    dim: Optional[int] = None  # field: dim H_n
    free_rank: Optional[int] = None  # integers
    torsion: tuple = ()

    def describe(self) -> str:
        if self.dim is not None:
            return f"H_{self.degree} has dimension {self.dim}"
        tors = " + ".join(f"Z/{t}" for t in self.torsion)
        return f"H_{self.degree} = Z^{self.free_rank}" + (f" + {tors}" if tors else "")


# ---------------------------------------------------------------- contraction search

def _base_ring(C: ChainComplex):
    cat = C.cat
    if isinstance(cat, GradedCat):
        cat = cat.inner
    if isinstance(cat, MatCat):
        if cat.ring.is_field or cat.ring.is_integers:
            return cat.ring
    elif isinstance(cat, IdemCat) and cat.ring.is_field:
        return cat.ring
    raise WrongBase(f"contraction search unsupported over {C.cat!r}")


def contraction_search(C: ChainComplex) -> Contraction | HomologyWitness:
    """A contraction of ``C``, or the first degree with nonvanishing homology.

    Solves ``c_{n+1} gamma_n = id - gamma_{n-1} c_n`` degree by degree from the
    bottom.  When ``C`` is exact the right side always lands in the image of
    ``c_{n+1}``, so failure pinpoints homology.
    """
    _base_ring(C)
    if isinstance(C.cat, GradedCat):
        F = flatten_complex(C)
        res = contraction_search(F)
        if isinstance(res, HomologyWitness):
            return res
        cat = C.cat
        return Contraction(C, {n: cat.unflatten(res.at(n), C.obj(n), C.obj(n + 1)) for n in C.degrees()})
    cat = C.cat
    idem = isinstance(cat, IdemCat)
    mat = (lambda x: x.m) if idem else (lambda x: x)
    gamma: dict = {}
    prev = None  # gamma_{n-1} as a matrix
    for n in C.degrees():
        A = mat(C.d(n + 1))
        ident = mat(cat.identity(C.obj(n)))
        rhs = ident if prev is None else ident - prev @ mat(C.d(n))
        X = solve_any(A, rhs)
        if X is None:
            return homology_witness(C, n)
        if idem:
            X = C.obj(n + 1).p @ X @ C.obj(n).p
            gamma[n] = IdemMor(C.obj(n), C.obj(n + 1), X)
        else:
            gamma[n] = X
        prev = X
    out = Contraction(C, gamma)
    out.verify()
    return out


def homology_witness(C: ChainComplex, n: int) -> HomologyWitness:
    ring = _base_ring(C)
    if ring.is_integers:
        fr, tors = homology_z(C, n)
        return HomologyWitness(n, free_rank=fr, torsion=tors)
    return HomologyWitness(n, dim=homology_ranks(C)[n])


def is_contractible(C: ChainComplex) -> bool:
    return isinstance(contraction_search(C), Contraction)


# ---------------------------------------------------------------- homology

def _mats(C: ChainComplex):
    """Matrix differentials; idempotent objects contribute through their images."""
    cat = C.cat
    if isinstance(cat, GradedCat):
        return _mats(flatten_complex(C))
    if isinstance(cat, IdemCat):
        return C, (lambda n: C.d(n).m), (lambda n: C.obj(n).p)
    return C, (lambda n: C.d(n)), None


def homology_ranks(C: ChainComplex) -> dict[int, int]:
    """``dim H_n`` over a field base."""
    C2, d, proj = _mats(C)
    ring = _base_ring(C)
    if not ring.is_field:
        raise WrongBase("homology_ranks needs a field base; use homology_z over the integers")
    out = {}
    for n in C2.degrees():
        dim = rank(proj(n)) if proj else C2.cat.rank(C2.obj(n))
        out[n] = dim - rank(d(n)) - rank(d(n + 1))
    return out


def homology_z(C: ChainComplex, n: int) -> tuple[int, tuple]:
    """``H_n`` over the integers as ``(free rank, torsion invariants)``."""
    ring = C.cat.ring
    if not ring.is_integers or not isinstance(C.cat, MatCat):
        raise WrongBase("homology_z needs MatCat over the integers")
    dn = C.d(n)
    dn1 = C.d(n + 1)
    dim = C.obj(n)
    # kernel basis of d_n from Smith form: columns of V beyond the rank
    if dn.rows == 0 or dim == 0:
        K = Matrix.identity(ring, dim)
    else:
        S, U, V = smith_normal_form(dn)
        r = sum(1 for i in range(min(S.shape)) if S.a[i, i] != 0)
        K = V.cols_of(range(r, dim))
    k = K.cols
    if k == 0:
        return 0, ()
    if dn1.cols == 0:
        return k, ()
    # write the boundaries in kernel coordinates: d_{n+1} = K M
    M = solve_z(K, dn1)
    assert M is not None
    S, _, _ = smith_normal_form(M)
    diag = [int(S.a[i, i]) for i in range(min(S.shape))]
    nonzero = [x for x in diag if x != 0]
    torsion = tuple(x for x in nonzero if x > 1)
    return k - len(nonzero), torsion


def induced_homology_rank(f: ChainMap, n: int) -> int:
    """Rank of ``H_n(f)`` over a field: ``dim(f(Z_n) + B_n) - dim B_n``."""
    src, tgt = f.src, f.tgt
    ring = src.cat.ring
    Zs = rank_kernel_image(src.d(n)).kernel if src.obj(n) else Matrix.zeros(ring, 0, 0)
    fn = f.at(n)
    img = fn @ Zs if Zs.cols else Matrix.zeros(ring, tgt.obj(n), 0)
    B = tgt.d(n + 1)
    both = B.hstack(img) if img.cols else B
    return rank(both) - rank(B)


def is_quasi_isomorphism(f: ChainMap) -> bool:
    hs, ht = homology_ranks(f.src), homology_ranks(f.tgt)
    for n in _span(f.src, f.tgt):
        a, b = hs.get(n, 0), ht.get(n, 0)
        if a != b or induced_homology_rank(f, n) != a:
            return False
    return True


# ---------------------------------------------------------------- homology retract

@dataclass(frozen=True, eq=False)
class HomologyRetract:
    """Strong deformation retract of ``C`` onto a zero-differential complex ``H``.

    ``pi iota = id``, ``d g + g d = id - iota pi``, ``g iota = 0``,
    ``pi g = 0`` and ``g g = 0``.
    """

    C: ChainComplex
    H: ChainComplex
    iota: ChainMap
    pi: ChainMap
    g: dict

    def g_at(self, n: int) -> Matrix:
        x = self.g.get(n)
        return Matrix.zeros(self.C.cat.ring, self.C.obj(n + 1), self.C.obj(n)) if x is None else x


def homology_retract(C: ChainComplex) -> HomologyRetract:
    cat = C.cat
    if not isinstance(cat, MatCat) or not cat.ring.is_field:
        raise WrongBase("homology_retract needs MatCat over a field")
    ring = cat.ring
    W, Bb, Hh = {}, {}, {}
    degs = list(C.degrees())
    for n in degs:
        dn = C.d(n)
        K = rank_kernel_image(dn).kernel
        W[n] = complement_columns(K)
        Hh[n] = K  # cycles for now; boundaries are split off below
    for n in degs:
        Wn1 = W.get(n + 1, Matrix.zeros(ring, C.obj(n + 1), 0))
        Bb[n] = C.d(n + 1) @ Wn1 if Wn1.cols else Matrix.zeros(ring, C.obj(n), 0)
        K = Hh[n]
        if Bb[n].cols:
            _, piv, _ = rref(Bb[n].hstack(K)) if K.cols else (None, [], None)
            extra = [p - Bb[n].cols for p in piv if p >= Bb[n].cols]
            Hh[n] = K.cols_of(extra)
        # else H_n = Z_n
    P, Pinv = {}, {}
    for n in degs:
        blocks = [m for m in (Bb[n], Hh[n], W[n]) if m.cols]
        P[n] = blocks[0].hstack(*blocks[1:]) if blocks else Matrix.zeros(ring, C.obj(n), 0)
        if P[n].cols != C.obj(n):
            raise AssertionError("adapted basis has wrong size")
        Pinv[n] = inverse(P[n]) if C.obj(n) else P[n].T
    Hobjs = [Hh[n].cols for n in degs]
    H = ChainComplex.make(cat, C.lo, Hobjs) if degs else ChainComplex.zero(cat)
    iota = ChainMap(H, C, {n: Hh[n] for n in degs})
    pi = ChainMap(C, H, {n: Pinv[n].rows_of(range(Bb[n].cols, Bb[n].cols + Hh[n].cols)) for n in degs})
    g = {}
    for n in degs:
        Wn1 = W.get(n + 1)
        if Wn1 is None or not Wn1.cols or not Bb[n].cols:
            continue
        g[n] = Wn1 @ Pinv[n].rows_of(range(Bb[n].cols))
    R = HomologyRetract(C, H, iota, pi, g)
    _check_retract(R)
    return R


def _check_retract(R: HomologyRetract) -> None:

    C = R.C
    ring = C.cat.ring
    R.iota.verify()
    R.pi.verify()
    for n in C.degrees():
        I = Matrix.identity(ring, C.obj(n))
        io = R.iota.at(n) @ R.pi.at(n)
        lhs = C.d(n + 1) @ R.g_at(n) + R.g_at(n - 1) @ C.d(n)
        if lhs != I - io:
            raise IdentityViolated("d g + g d = id - iota pi", n)
        if not (R.pi.at(n) @ R.iota.at(n)).is_identity():
            raise IdentityViolated("pi iota = id", n)
        if not (R.g_at(n) @ R.iota.at(n)).is_zero():
            raise IdentityViolated("g iota = 0", n)
        if not (R.pi.at(n + 1) @ R.g_at(n)).is_zero():
            raise IdentityViolated("pi g = 0", n)
        if not (R.g_at(n + 1) @ R.g_at(n)).is_zero():
            raise IdentityViolated("g g = 0", n)


# ---------------------------------------------------------------- homotopy solver

def _kron(ar, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    m, n = A.shape
    p, q = B.shape
    return ar.hadamard(A[:, None, :, None], B[None, :, None, :]).reshape(m * p, n * q)


class HomotopySolver:
    """Solve ``d h + h c = T`` for ``h: C -> D[1]`` over a field.

    The linear map ``h -> d h + h c`` depends only on ``(C, D)``, so it is
    reduced once and reused for every right side.
    """

    def __init__(self, C: ChainComplex, D: ChainComplex):
        cat = C.cat
        if not isinstance(cat, MatCat) or not cat.ring.is_field:
            raise WrongBase("homotopy solving needs MatCat over a field")
        self.C, self.D = C, D
        ring = cat.ring
        ar = ring.arith()
        self.ring = ring
        span = _span(C, D)
        self.unknowns = [n for n in range(span.start - 1, span.stop) if C.obj(n) and D.obj(n + 1)]
        self.eqs = [n for n in span if C.obj(n) and D.obj(n)]
        uoff, off = {}, 0
        for n in self.unknowns:
            uoff[n] = off
            off += D.obj(n + 1) * C.obj(n)
        eoff, eo = {}, 0
        for n in self.eqs:
            eoff[n] = eo
            eo += D.obj(n) * C.obj(n)
        self.uoff, self.eoff, self.nu, self.ne = uoff, eoff, off, eo
        M = np.zeros((eo, off), dtype=ar.dtype)
        for n in self.eqs:
            r0 = eoff[n]
            rs = D.obj(n) * C.obj(n)
            if n in uoff:  # d_{n+1} h_n
                blk = _kron(ar, D.d(n + 1).a, np.eye(C.obj(n), dtype=ar.dtype))
                M[r0:r0 + rs, uoff[n]:uoff[n] + blk.shape[1]] = ar.add(M[r0:r0 + rs, uoff[n]:uoff[n] + blk.shape[1]], blk)
            if n - 1 in uoff:  # h_{n-1} c_n
                blk = _kron(ar, np.eye(D.obj(n), dtype=ar.dtype), C.d(n).a.T.copy())
                c0 = uoff[n - 1]
                M[r0:r0 + rs, c0:c0 + blk.shape[1]] = ar.add(M[r0:r0 + rs, c0:c0 + blk.shape[1]], blk)
        self.M = Matrix(ring, M)
        if eo and off:
            R, piv, T = rref(self.M)
            self._piv, self._T, self._rank = piv, T, len(piv)
        else:
            self._piv, self._T, self._rank = [], Matrix.identity(ring, eo), 0

    def _rhs(self, target: dict) -> Matrix:
        ar = self.ring.arith()
        b = np.zeros((self.ne, 1), dtype=ar.dtype)
        for n in self.eqs:
            t = target.get(n)
            if t is not None:
                b[self.eoff[n]:self.eoff[n] + t.rows * t.cols, 0] = t.a.reshape(-1)
        return Matrix(self.ring, b)

    def solve(self, target: dict) -> Optional[dict]:
        """``h`` with ``d h + h c = target`` or ``None``; target entries are matrices ``C_n -> D_n``."""
        for n, t in target.items():
            if n not in self.eqs and not t.is_zero():
                return None
        b = self._rhs(target)
        if self.ne == 0:
            return {}
        Tb = self._T @ b
        if self._rank < self.ne and not Tb.sub(self._rank, self.ne, 0, 1).is_zero():
            return None
        x = np.zeros(self.nu, dtype=self.ring.arith().dtype)
        for i, pc in enumerate(self._piv):
            x[pc] = Tb.a[i, 0]
        h = {}
        for n in self.unknowns:
            r, c = self.D.obj(n + 1), self.C.obj(n)
            h[n] = Matrix(self.ring, x[self.uoff[n]:self.uoff[n] + r * c].reshape(r, c).copy())
        return h


_SOLVERS: "OrderedDict[tuple, HomotopySolver]" = OrderedDict()


def _complex_key(C: ChainComplex) -> tuple:
    return (C.cat, C.lo, tuple(C.objs), tuple(d.a.tobytes() + bytes(str(d.shape), "ascii") for d in C.diffs))


def homotopy_solver(C: ChainComplex, D: ChainComplex) -> HomotopySolver:
    key = (_complex_key(C), _complex_key(D))
    s = _SOLVERS.get(key)
    if s is None:
        s = HomotopySolver(C, D)
        _SOLVERS[key] = s
        if len(_SOLVERS) > 4096:
            _SOLVERS.popitem(last=False)
    else:
        _SOLVERS.move_to_end(key)
    return s


def solve_homotopy(f: ChainMap, g: ChainMap) -> Optional[ChainHomotopy]:
    """A homotopy from ``f`` to ``g`` over a field, or ``None``."""
    C, D = f.src, f.tgt
    target = {n: g.at(n) - f.at(n) for n in _span(C, D)}
    h = homotopy_solver(C, D).solve(target)
    if h is None:
        return None
    H = ChainHomotopy(f, g, h)
    H.verify()
    return H


def is_homotopy_equivalence(f: ChainMap) -> bool:
    return is_contractible(cone(f).complex)


# ---------------------------------------------------------------- homotopy cartesian squares

@dataclass(frozen=True, eq=False)
class CartesianVerdict:
    """Outcome for a square ``f: A -> B``, ``k: A -> C``, ``g: C -> D``, ``l: B -> D``."""

    cartesian: bool
    induced: ChainMap  # cone(f) -> cone(g)
    certificate: Optional[Contraction]  # of cone(induced)
    witness: Optional[HomologyWitness]


def _square_homotopy(h) -> dict:
    return dict(h.comps) if isinstance(h, ChainHomotopy) else dict(h)


def is_homotopy_cartesian(f: ChainMap, k: ChainMap, g: ChainMap, l: ChainMap, h, certificate: Optional[Contraction] = None) -> CartesianVerdict:
    """Decide whether the square is homotopy cartesian.

    ``h`` is a homotopy from ``g o k`` to ``l o f``.  The square is cartesian
    when the induced map ``cone(f) -> cone(g)`` is a homotopy equivalence,
    decided by searching for a contraction of its cone.  A supplied
    ``certificate`` (a contraction of that cone) is checked instead.
    """
    induced = cone_functorial(f, g, k, l, _square_homotopy(h))
    K = cone(induced).complex
    if certificate is not None:
        if not certificate.C.same_as(K):
            raise NotAContraction("certificate is not for the comparison cone")
        certificate.verify()
        return CartesianVerdict(True, induced, certificate, None)
    res = contraction_search(K)
    if isinstance(res, HomologyWitness):
        return CartesianVerdict(False, induced, None, res)
    return CartesianVerdict(True, induced, res, None)


def cartesian_conditions(f: ChainMap, k: ChainMap, g: ChainMap, l: ChainMap, h) -> tuple[bool, bool, bool]:
    """The three equivalent tests for a homotopy cartesian square.

    (1) ``cone(f) -> cone(g)`` is an equivalence; (2) ``cone(k) -> cone(l)``
    is one; (3) ``cone((f, k)) -> D`` induced by ``(-l, g)`` is one.
    """
    cat = f.cat
    hc = _square_homotopy(h)
    neg = {n: cat.neg(x) for n, x in hc.items()}
    c1 = is_homotopy_equivalence(cone_functorial(f, g, k, l, hc))
    c2 = is_homotopy_equivalence(cone_functorial(k, l, f, g, neg))
    A, B, C, D = f.src, f.tgt, k.tgt, g.tgt
    BC = direct_sum_complex(cat, [B, C])
    fk = ChainMap(A, BC.total, {n: cat.block([[f.at(n)], [k.at(n)]], [B.obj(n), C.obj(n)], [A.obj(n)]) for n in _span(A, BC.total)})
    q = ChainMap(BC.total, D, {n: cat.block([[cat.neg(l.at(n)), g.at(n)]], [D.obj(n)], [B.obj(n), C.obj(n)]) for n in _span(BC.total, D)})
    Z = ChainComplex.zero(cat)
    to_zero = ChainMap(A, Z, {})
    from_zero = ChainMap(Z, D, {})
    comparison = cone_functorial(fk, from_zero, to_zero, q, neg)
    c3 = is_homotopy_equivalence(compose_maps(_cone_of_zero_source(D), comparison))
    return c1, c2, c3


def _cone_of_zero_source(D: ChainComplex) -> ChainMap:
    """The canonical isomorphism ``cone(0 -> D) -> D``."""
    K = cone(ChainMap(ChainComplex.zero(D.cat), D, {})).complex
    cat = D.cat
    Z = cat.zero_object()
    return ChainMap(K, D, {n: cat.block([[None, cat.identity(D.obj(n))]], [D.obj(n)], [Z, D.obj(n)]) for n in _span(K, D)})
