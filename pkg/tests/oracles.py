"""Independent brute-force oracles over GF(2), written without the package's linear algebra.

Matrices are tuples of row tuples with entries in {0, 1}; an ``r x c`` matrix
maps a rank ``c`` space to a rank ``r`` space.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Optional

Mat = tuple


def all_matrices(rows: int, cols: int) -> Iterator[Mat]:
    for bits in product((0, 1), repeat=rows * cols):
        yield tuple(tuple(bits[i * cols:(i + 1) * cols]) for i in range(rows))


def mul(a: Mat, b: Mat, inner: int, cols: int) -> Mat:
    """``a @ b`` mod 2; dimensions are explicit since empty matrices lose their shape."""
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(inner)) % 2 for j in range(cols)) for i in range(len(a)))


def add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple((x + y) % 2 for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def zeros(rows: int, cols: int) -> Mat:
    return tuple(tuple(0 for _ in range(cols)) for _ in range(rows))


def is_zero(a: Mat) -> bool:
    return all(x == 0 for row in a for x in row)


def identity(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


class BruteComplex:
    """Complex ``C_2 -> C_1 -> C_0`` over GF(2) with ``d[n]: C_n -> C_{n-1}``."""

    def __init__(self, ranks: tuple[int, int, int], d1: Mat, d2: Mat):
        self.ranks = ranks
        self.d = {1: d1, 2: d2}

    def dmat(self, n: int) -> Mat:
        if n in self.d:
            return self.d[n]
        src = self.ranks[n] if 0 <= n <= 2 else 0
        tgt = self.ranks[n - 1] if 0 <= n - 1 <= 2 else 0
        return zeros(tgt, src)

    def rank(self, n: int) -> int:
        return self.ranks[n] if 0 <= n <= 2 else 0


def all_complexes(max_rank: int = 2) -> Iterator[BruteComplex]:
    """Every complex concentrated in degrees 0..2 with ranks at most ``max_rank``."""
    for ranks in product(range(max_rank + 1), repeat=3):
        r0, r1, r2 = ranks
        for d1 in all_matrices(r0, r1):
            for d2 in all_matrices(r1, r2):
                if is_zero(mul(d1, d2, r1, r2)):
                    yield BruteComplex(ranks, d1, d2)


def all_chain_endos(C: BruteComplex) -> Iterator[dict]:
    """Every chain endomorphism, as ``{n: C_n -> C_n}``."""
    r = C.ranks
    for f0 in all_matrices(r[0], r[0]):
        for f1 in all_matrices(r[1], r[1]):
            if mul(C.d[1], f1, r[1], r[1]) != mul(f0, C.d[1], r[0], r[1]):
                continue
            for f2 in all_matrices(r[2], r[2]):
                if mul(C.d[2], f2, r[2], r[2]) == mul(f1, C.d[2], r[1], r[2]):
                    yield {0: f0, 1: f1, 2: f2}


def null_homotopic_maps(C: BruteComplex) -> set:
    """All maps ``d h + h d`` with ``h_n: C_n -> C_{n+1}``, by enumerating every ``h``."""
    r = C.ranks
    out = set()
    for h0 in all_matrices(r[1], r[0]):
        for h1 in all_matrices(r[2], r[1]):
            h = {0: h0, 1: h1}
            comps = []
            for n in range(3):
                acc = zeros(r[n], r[n])
                if n in h:  # d_{n+1} h_n
                    acc = add(acc, mul(C.dmat(n + 1), h[n], C.rank(n + 1), r[n]))
                if n - 1 in h:  # h_{n-1} d_n
                    acc = add(acc, mul(h[n - 1], C.dmat(n), C.rank(n - 1), r[n]))
                comps.append(acc)
            out.add(tuple(comps))
    return out


def power(C: BruteComplex, phi: dict, n: int) -> tuple:
    comps = []
    for k in range(3):
        acc = identity(C.ranks[k])
        for _ in range(n):
            acc = mul(acc, phi[k], C.ranks[k], C.ranks[k])
        comps.append(acc)
    return tuple(comps)


def brute_nil_degree(C: BruteComplex, phi: dict, nulls: set, n_max: int) -> Optional[int]:
    """Smallest ``n <= n_max`` with ``phi^n`` null-homotopic, else ``None``."""
    for n in range(1, n_max + 1):
        if power(C, phi, n) in nulls:
            return n
    return None
