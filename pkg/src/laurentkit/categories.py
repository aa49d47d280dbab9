"""Additive categories with an automorphism: matrices, idempotent completion, graded sums.

Every instance implements the same small protocol (:class:`Category`) so that
chain-complex code can run over any of them.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import NotIdempotent, NotRankClassified, ObjectMismatch
from .linalg import rank, split_idempotent
from .matrix import Matrix
from .rings import RingSpec


@dataclass(frozen=True)
class DirectSum:
    obj: Any
    injections: tuple
    projections: tuple
    parts: tuple


class Category(ABC):
    """Additive category with automorphism ``Phi``."""

    ring: RingSpec

    # objects
    @abstractmethod
    def zero_object(self): ...

    @abstractmethod
    def direct_sum(self, objs: Sequence) -> DirectSum: ...

    def is_zero_object(self, A) -> bool:
        return self.is_zero(self.identity(A))

    # morphisms
    @abstractmethod
    def src(self, f): ...

    @abstractmethod
    def tgt(self, f): ...

    @abstractmethod
    def identity(self, A): ...

    @abstractmethod
    def zero(self, A, B): ...

    @abstractmethod
    def compose(self, g, f): ...

    @abstractmethod
    def add(self, f, g): ...

    @abstractmethod
    def neg(self, f): ...

    @abstractmethod
    def is_zero(self, f) -> bool: ...

    @abstractmethod
    def phi(self, power: int, x): ...

    def sub(self, f, g):
        return self.add(f, self.neg(g))

    def equal(self, f, g) -> bool:
        return f == g

    def comp(self, *fs):
        """Compose right to left: ``comp(h, g, f) = h o g o f``."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def sum(self, fs: Sequence, A=None, B=None):
        fs = list(fs)
        if not fs:
            return self.zero(A, B)
        out = fs[0]
        for f in fs[1:]:
            out = self.add(out, f)
        return out

    def block(self, grid: Sequence[Sequence], tgts: Sequence, srcs: Sequence):
        """Morphism ``(+)srcs -> (+)tgts`` with components ``grid[i][j]: srcs[j] -> tgts[i]``.

        ``None`` entries are zero.
        """
        S = self.direct_sum(srcs)
        T = self.direct_sum(tgts)
        out = self.zero(S.obj, T.obj)
        for i in range(len(tgts)):
            for j in range(len(srcs)):
                f = grid[i][j]
                if f is not None:
                    out = self.add(out, self.comp(T.injections[i], f, S.projections[j]))
        return out

    def entry(self, f, tgts: Sequence, srcs: Sequence, i: int, j: int):
        S = self.direct_sum(srcs)
        T = self.direct_sum(tgts)
        return self.comp(T.projections[i], f, S.injections[j])

    def diag(self, fs: Sequence, tgts: Sequence | None = None, srcs: Sequence | None = None):
        srcs = list(srcs) if srcs is not None else [self.src(f) for f in fs]
        tgts = list(tgts) if tgts is not None else [self.tgt(f) for f in fs]
        grid = [[fs[i] if i == j else None for j in range(len(fs))] for i in range(len(fs))]
        return self.block(grid, tgts, srcs)

    def obj_equal(self, A, B) -> bool:
        return A == B

    def check_composable(self, g, f):
        if not self.obj_equal(self.tgt(f), self.src(g)):
            raise ObjectMismatch(f"target {self.tgt(f)!r} differs from source {self.src(g)!r}")

    def rank(self, A) -> int:
        raise NotRankClassified(f"{type(self).__name__} is not rank classified")

    @property
    def is_field_base(self) -> bool:
        return self.ring.is_field


# ---------------------------------------------------------------- matrices

class MatCat(Category):
    """Free modules ``R^n`` with matrices; ``Phi`` is the ring automorphism entrywise."""

    def __init__(self, ring: RingSpec):
        self.ring = ring

    def __eq__(self, other):
        return isinstance(other, MatCat) and other.ring == self.ring

    def __hash__(self):
        return hash(("MatCat", self.ring))

    def __repr__(self):
        return f"MatCat({self.ring.label()})"

    def zero_object(self):
        return 0

    def is_zero_object(self, A) -> bool:
        return A == 0

    def direct_sum(self, objs):
        objs = tuple(int(o) for o in objs)
        total = sum(objs)
        injs, projs = [], []
        off = 0
        I = Matrix.identity(self.ring, total)
        for n in objs:
            injs.append(I.cols_of(range(off, off + n)))
            projs.append(I.rows_of(range(off, off + n)))
            off += n
        return DirectSum(total, tuple(injs), tuple(projs), objs)

    def src(self, f: Matrix):
        return f.cols

    def tgt(self, f: Matrix):
        return f.rows

    def identity(self, A):
        return Matrix.identity(self.ring, A)

    def zero(self, A, B):
        return Matrix.zeros(self.ring, B, A)

    def compose(self, g: Matrix, f: Matrix):
        return g @ f

    def add(self, f, g):
        return f + g

    def neg(self, f):
        return -f

    def sub(self, f, g):
        return f - g

    def is_zero(self, f) -> bool:
        return f.is_zero()

    def phi(self, power: int, x):
        if isinstance(x, Matrix):
            return x.aut(power)
        return x

    def block(self, grid, tgts, srcs):
        return Matrix.block(self.ring, grid, list(tgts), list(srcs))

    def entry(self, f, tgts, srcs, i, j):
        r0 = sum(tgts[:i])
        c0 = sum(srcs[:j])
        return f.sub(r0, r0 + tgts[i], c0, c0 + srcs[j])

    def rank(self, A) -> int:
        return int(A)


# ---------------------------------------------------------------- idempotent completion

@dataclass(frozen=True)
class IdemObj:
    n: int
    p: Matrix

    def __post_init__(self):
        if self.p.shape != (self.n, self.n):
            raise ObjectMismatch("idempotent has wrong size")


@dataclass(frozen=True)
class IdemMor:
    src: IdemObj
    tgt: IdemObj
    m: Matrix


class IdemCat(Category):
    """Objects ``(n, p)`` with ``p^2 = p``; morphisms ``f`` with ``p_B f p_A = f``."""

    def __init__(self, inner: MatCat):
        self.inner = inner
        self.ring = inner.ring

    def __eq__(self, other):
        return isinstance(other, IdemCat) and other.inner == self.inner

    def __hash__(self):
        return hash(("IdemCat", self.inner))

    def __repr__(self):
        return f"IdemCat({self.inner!r})"

    def obj(self, p: Matrix) -> IdemObj:
        if p @ p != p:
            raise NotIdempotent("p @ p != p")
        return IdemObj(p.rows, p)

    def free(self, n: int) -> IdemObj:
        return IdemObj(n, Matrix.identity(self.ring, n))

    def mor(self, A: IdemObj, B: IdemObj, m: Matrix) -> IdemMor:
        if m.shape != (B.n, A.n):
            raise ObjectMismatch("matrix shape does not match objects")
        if B.p @ m @ A.p != m:
            raise ObjectMismatch("p_B f p_A != f")
        return IdemMor(A, B, m)

    def zero_object(self):
        return IdemObj(0, Matrix.zeros(self.ring, 0, 0))

    def direct_sum(self, objs):
        objs = tuple(objs)
        sizes = [o.n for o in objs]
        P = Matrix.diag(self.ring, [o.p for o in objs]) if objs else Matrix.zeros(self.ring, 0, 0)
        S = IdemObj(sum(sizes), P)
        injs, projs = [], []
        for i, o in enumerate(objs):
            inj = Matrix.block(self.ring, [[o.p if k == i else None] for k in range(len(objs))], sizes, [o.n])
            prj = Matrix.block(self.ring, [[o.p if k == i else None for k in range(len(objs))]], [o.n], sizes)
            injs.append(IdemMor(o, S, inj))
            projs.append(IdemMor(S, o, prj))
        return DirectSum(S, tuple(injs), tuple(projs), objs)

    def src(self, f):
        return f.src

    def tgt(self, f):
        return f.tgt

    def identity(self, A):
        return IdemMor(A, A, A.p)

    def zero(self, A, B):
        return IdemMor(A, B, Matrix.zeros(self.ring, B.n, A.n))

    def compose(self, g, f):
        self.check_composable(g, f)
        return IdemMor(f.src, g.tgt, g.m @ f.m)

    def add(self, f, g):
        if f.src != g.src or f.tgt != g.tgt:
            raise ObjectMismatch("cannot add morphisms with different ends")
        return IdemMor(f.src, f.tgt, f.m + g.m)

    def neg(self, f):
        return IdemMor(f.src, f.tgt, -f.m)

    def is_zero(self, f) -> bool:
        return f.m.is_zero()

    def phi(self, power, x):
        if isinstance(x, IdemObj):
            return IdemObj(x.n, x.p.aut(power))
        return IdemMor(self.phi(power, x.src), self.phi(power, x.tgt), x.m.aut(power))

    def block(self, grid, tgts, srcs):
        S = self.direct_sum(srcs).obj
        T = self.direct_sum(tgts).obj
        mats = [[None if g is None else g.m for g in row] for row in grid]
        return IdemMor(S, T, Matrix.block(self.ring, mats, [t.n for t in tgts], [s.n for s in srcs]))

    def entry(self, f, tgts, srcs, i, j):
        r0 = sum(t.n for t in tgts[:i])
        c0 = sum(s.n for s in srcs[:j])
        return IdemMor(srcs[j], tgts[i], f.m.sub(r0, r0 + tgts[i].n, c0, c0 + srcs[j].n))

    def rank(self, A: IdemObj) -> int:

        if self.ring.is_field:
            return rank(A.p)
        if self.ring.is_integers:
            r, _ = split_idempotent(A.p)
            return r.rows
        raise NotRankClassified(f"projectives over {self.ring.label()} are not classified by rank")


# ---------------------------------------------------------------- graded sums

@dataclass(frozen=True)
class GradedObject:
    """Formal sum ``(+)_k Phi^{-k}(A_k)``; ``pieces`` is a tuple of ``(k, A_k)``."""

    pieces: tuple

    def __post_init__(self):
        ws = [w for w, _ in self.pieces]
        if any(b <= a for a, b in zip(ws, ws[1:])):
            raise ObjectMismatch("graded weights must be strictly increasing")

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for w, _ in self.pieces)

    def piece(self, w: int):
        for k, A in self.pieces:
            if k == w:
                return A
        raise KeyError(w)


@dataclass(frozen=True)
class GradedMor:
    src: GradedObject
    tgt: GradedObject
    blocks: tuple  # sorted ((l, k), morphism Phi^{-k}(A_k) -> Phi^{-l}(B_l)), zero blocks dropped

    def block_map(self) -> dict:
        return dict(self.blocks)


class GradedCat(Category):
    """Finite graded sums over an inner category; weights are bookkeeping only."""

    def __init__(self, inner: Category):
        self.inner = inner
        self.ring = inner.ring

    def __eq__(self, other):
        return isinstance(other, GradedCat) and other.inner == self.inner

    def __hash__(self):
        return hash(("GradedCat", self.inner))

    def summand(self, X: GradedObject, w: int):
        return self.inner.phi(-w, X.piece(w))

    def make(self, src: GradedObject, tgt: GradedObject, blocks: dict) -> GradedMor:
        clean = []
        for (l, k), f in sorted(blocks.items()):
            if self.inner.is_zero(f):
                continue
            if not self.inner.obj_equal(self.inner.src(f), self.summand(src, k)) or not self.inner.obj_equal(
                self.inner.tgt(f), self.summand(tgt, l)
            ):
                raise ObjectMismatch(f"block {(l, k)} has wrong ends")
            clean.append(((l, k), f))
        return GradedMor(src, tgt, tuple(clean))

    def zero_object(self):
        return GradedObject(())

    def direct_sum(self, objs):
        objs = tuple(objs)
        weights = sorted({w for o in objs for w in o.weights})
        merged, parts_at = [], {}
        for w in weights:
            parts = [(i, o.piece(w)) for i, o in enumerate(objs) if w in o.weights]
            ds = self.inner.direct_sum([A for _, A in parts])
            merged.append((w, ds.obj))
            parts_at[w] = (parts, ds)
        S = GradedObject(tuple(merged))
        injs, projs = [], []
        for i, o in enumerate(objs):
            ib, pb = {}, {}
            for w in o.weights:
                parts, ds = parts_at[w]
                pos = [j for j, (idx, _) in enumerate(parts) if idx == i][0]
                ib[(w, w)] = self.inner.phi(-w, ds.injections[pos])
                pb[(w, w)] = self.inner.phi(-w, ds.projections[pos])
            injs.append(self.make(o, S, ib))
            projs.append(self.make(S, o, pb))
        return DirectSum(S, tuple(injs), tuple(projs), objs)

    def src(self, f):
        return f.src

    def tgt(self, f):
        return f.tgt

    def identity(self, A):
        return self.make(A, A, {(w, w): self.inner.identity(self.summand(A, w)) for w in A.weights})

    def zero(self, A, B):
        return GradedMor(A, B, ())

    def compose(self, g, f):
        self.check_composable(g, f)
        fb = f.block_map()
        out: dict = {}
        for (m, l), gb in g.blocks:
            for (l2, k), f_ in fb.items():
                if l2 == l:
                    term = self.inner.compose(gb, f_)
                    out[(m, k)] = self.inner.add(out[(m, k)], term) if (m, k) in out else term
        return self.make(f.src, g.tgt, out)

    def add(self, f, g):
        if f.src != g.src or f.tgt != g.tgt:
            raise ObjectMismatch("cannot add graded morphisms with different ends")
        out = dict(f.blocks)
        for key, b in g.blocks:
            out[key] = self.inner.add(out[key], b) if key in out else b
        return self.make(f.src, f.tgt, out)

    def neg(self, f):
        return GradedMor(f.src, f.tgt, tuple((k, self.inner.neg(b)) for k, b in f.blocks))

    def is_zero(self, f) -> bool:
        return not f.blocks

    def phi(self, power, x):
        if isinstance(x, GradedObject):
            return GradedObject(tuple((w, self.inner.phi(power, A)) for w, A in x.pieces))
        return GradedMor(self.phi(power, x.src), self.phi(power, x.tgt), tuple((k, self.inner.phi(power, b)) for k, b in x.blocks))

    # ---- flattening to the inner category (summands in increasing weight) ----
    def flatten_obj(self, X: GradedObject):
        return self.inner.direct_sum([self.summand(X, w) for w in X.weights]).obj

    def flatten(self, f: GradedMor):
        srcs = [self.summand(f.src, w) for w in f.src.weights]
        tgts = [self.summand(f.tgt, w) for w in f.tgt.weights]
        ri = {w: i for i, w in enumerate(f.tgt.weights)}
        ci = {w: j for j, w in enumerate(f.src.weights)}
        grid = [[None] * len(srcs) for _ in tgts]
        for (l, k), b in f.blocks:
            grid[ri[l]][ci[k]] = b
        return self.inner.block(grid, tgts, srcs)

    def unflatten(self, m, src: GradedObject, tgt: GradedObject) -> GradedMor:
        srcs = [self.summand(src, w) for w in src.weights]
        tgts = [self.summand(tgt, w) for w in tgt.weights]
        out = {}
        for i, l in enumerate(tgt.weights):
            for j, k in enumerate(src.weights):
                out[(l, k)] = self.inner.entry(m, tgts, srcs, i, j)
        return self.make(src, tgt, out)

    def rank(self, A: GradedObject) -> int:
        return sum(self.inner.rank(self.summand(A, w)) for w in A.weights)


# ---------------------------------------------------------------- K_0

@dataclass(frozen=True)
class K0Class:
    """Element of K_0 identified with the integers through rank."""

    rank: int

    def __add__(self, other: "K0Class") -> "K0Class":
        return K0Class(self.rank + other.rank)


RANK_PRESERVING = {"Phi", "i0", "i+", "i-", "j+", "j-", "ev0+", "ev0-", "id"}


def k0_class(cat: Category, A) -> K0Class:
    from .laurent import LaurentCat

    if isinstance(cat, LaurentCat) and not cat.ring.is_field:
        raise NotRankClassified("Laurent instances are rank classified only over a field base")
    if isinstance(cat, MatCat) and not (cat.ring.is_field or cat.ring.is_integers or cat.ring.kind == "zmod"):
        raise NotRankClassified(cat.ring.label())
    return K0Class(cat.rank(A))


def k0_map(functor: str) -> int:
    """Induced endomorphism of K_0 = Z, as an integer multiplier."""
    if functor in RANK_PRESERVING:
        return 1
    raise NotRankClassified(f"no rank formula for functor {functor!r}")
