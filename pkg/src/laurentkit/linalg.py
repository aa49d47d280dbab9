"""Exact linear algebra: elimination over fields, Smith form over Z, idempotent splitting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotIdempotent, ObjectMismatch, WrongBase
from .matrix import Matrix
from .rings import RingSpec


def _require_field(ring: RingSpec, what: str) -> None:
    if not ring.is_field:
        raise WrongBase(f"{what} needs a field base, got {ring.label()}")


def rref(M: Matrix) -> tuple[Matrix, list[int], Matrix]:
    """Reduced row echelon form ``R = T @ M`` with ``T`` invertible."""
    _require_field(M.ring, "row reduction")
    ar = M.ring.arith()
    A = M.a.copy()
    m, n = A.shape
    T = Matrix.identity(M.ring, m).a.copy()
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
            T[[r, piv]] = T[[piv, r]]
        inv = ar.s_inv(int(A[r, c]))
        A[r] = ar.scale(inv, A[r])
        T[r] = ar.scale(inv, T[r])
        factors = ar.neg(A[:, c].copy())
        factors[r] = 0
        if factors.any():
            A = ar.add(A, ar.hadamard(factors[:, None], A[r][None, :]))
            T = ar.add(T, ar.hadamard(factors[:, None], T[r][None, :]))
        pivots.append(c)
        r += 1
    return Matrix(M.ring, A), pivots, Matrix(M.ring, T)


def rank(M: Matrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(rref(M)[1])


@dataclass(frozen=True)
class RankKernelImage:
    rank: int
    kernel: Matrix  # columns form a basis of ker M
    image: Matrix  # columns form a basis of im M (pivot columns of M)
    pivots: tuple[int, ...]
    right_inverse: Optional[Matrix]  # M @ S = id when M has full row rank
    left_inverse: Optional[Matrix]  # L @ M = id when M has full column rank


def rank_kernel_image(M: Matrix) -> RankKernelImage:
    _require_field(M.ring, "rank_kernel_image")
    ring = M.ring
    ar = ring.arith()
    m, n = M.shape
    R, piv, T = rref(M) if m and n else (M, [], Matrix.identity(ring, m))
    free = [c for c in range(n) if c not in piv]
    K = np.zeros((n, len(free)), dtype=ar.dtype)
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, pc in enumerate(piv):
            K[pc, j] = ar.s_neg(int(R.a[i, f]))
    image = M.cols_of(piv)
    right = left = None
    r = len(piv)
    if r == m:
        # R = T M has rows e_pivot; S picks pivot columns
        S = np.zeros((n, m), dtype=ar.dtype)
        for i, pc in enumerate(piv):
            S[pc, i] = 1
        right = Matrix(ring, S) @ T
    if r == n:
        left = T.rows_of(list(range(n)))
    return RankKernelImage(r, Matrix(ring, K), image, tuple(piv), right, left)


def solve(A: Matrix, B: Matrix) -> Optional[Matrix]:
    """Some X with ``A @ X = B``, or ``None`` when the system is inconsistent."""
    _require_field(A.ring, "solve")
    if A.rows != B.rows:
        raise ObjectMismatch("row counts differ")
    ring = A.ring
    n = A.cols
    if A.rows == 0:
        return Matrix.zeros(ring, n, B.cols)
    if n == 0:
        return Matrix.zeros(ring, 0, B.cols) if B.is_zero() else None
    R, piv, T = rref(A)
    TB = T @ B
    r = len(piv)
    if r < TB.rows and not TB.sub(r, TB.rows, 0, TB.cols).is_zero():
        return None
    X = np.zeros((n, B.cols), dtype=ring.arith().dtype)
    for i, pc in enumerate(piv):
        X[pc] = TB.a[i]
    return Matrix(ring, X)


def solve_z(A: Matrix, B: Matrix) -> Optional[Matrix]:
    """Integer solution of ``A @ X = B`` via Smith form, or ``None``."""
    if not A.ring.is_integers:
        raise WrongBase("solve_z needs the integers")
    if A.rows != B.rows:
        raise ObjectMismatch("row counts differ")
    m, n = A.shape
    if m == 0:
        return Matrix.zeros(A.ring, n, B.cols)
    if n == 0:
        return Matrix.zeros(A.ring, 0, B.cols) if B.is_zero() else None
    S, U, V = smith_normal_form(A)
    UB = (U @ B).a
    Y = np.zeros((n, B.cols), dtype=object)
    for i in range(m):
        s = int(S.a[i, i]) if i < n else 0
        row = UB[i]
        if s == 0:
            if any(int(x) != 0 for x in row):
                return None
            continue
        if any(int(x) % s for x in row):
            return None
        Y[i] = [int(x) // s for x in row]
    return V @ Matrix(A.ring, Y)


def solve_any(A: Matrix, B: Matrix) -> Optional[Matrix]:
    if A.ring.is_field:
        return solve(A, B)
    if A.ring.is_integers:
        return solve_z(A, B)
    raise WrongBase(f"linear solving unsupported over {A.ring.label()}")


def inverse(A: Matrix) -> Optional[Matrix]:
    if A.rows != A.cols:
        return None
    if A.rows == 0:
        return A
    if A.ring.is_integers:
        S, U, V = smith_normal_form(A)
        if any(S.a[i, i] != 1 for i in range(S.rows)):
            return None
        return V @ U
    X = solve(A, Matrix.identity(A.ring, A.rows))
    return X


def complement_columns(A: Matrix) -> Matrix:
    """Standard basis columns completing the columns of A to a basis (A full column rank)."""
    ring = A.ring
    n = A.rows
    if A.cols == 0:
        return Matrix.identity(ring, n)
    _, piv, _ = rref(A.T)
    idx = [i for i in range(n) if i not in piv]
    return Matrix.identity(ring, n).cols_of(idx)


def nullspace_rows(A: Matrix) -> Matrix:
    """Rows spanning the left kernel of A (vectors y with y @ A = 0)."""
    return rank_kernel_image(A.T).kernel.T


# ---------------------------------------------------------------- integers

def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """``(S, U, V)`` with ``U @ M @ V = S`` diagonal, ``d_1 | d_2 | ...``, ``d_i >= 0``."""
    if not M.ring.is_integers:
        raise WrongBase("smith_normal_form needs the integers")
    m, n = M.shape
    A = [[int(x) for x in row] for row in M.a]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(X, i, j):
        X[i], X[j] = X[j], X[i]

    def swap_cols(X, i, j):
        for row in X:
            row[i], row[j] = row[j], row[i]

    def add_row(X, src, dst, c):  # row_dst += c * row_src
        X[dst] = [a + c * b for a, b in zip(X[dst], X[src])]

    def add_col(X, src, dst, c):
        for row in X:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # repeatedly move the smallest entry of the trailing block to (t, t)
        # and reduce its row and column; remainders are strictly smaller
        while True:
            nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(A, t, pi)
            swap_rows(U, t, pi)
            swap_cols(A, t, pj)
            swap_cols(V, t, pj)
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(A, t, i, -q)
                    add_row(U, t, i, -q)
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(A, t, j, -q)
                    add_col(V, t, j, -q)
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(A, bad, t, 1)
            add_row(U, bad, t, 1)
        if not nonzero:
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    ring = M.ring
    mk = lambda X, r, c: Matrix(ring, np.array(X, dtype=object).reshape(r, c)) if r and c else Matrix.zeros(ring, r, c)
    return mk(A, m, n), mk(U, m, m), mk(V, n, n)


# ---------------------------------------------------------------- idempotents

def split_idempotent(p: Matrix) -> tuple[Matrix, Matrix]:
    """``(r, i)`` with ``i @ r = p`` and ``r @ i = id``."""
    ring = p.ring
    if p.rows != p.cols:
        raise NotIdempotent("idempotent must be square")
    if p @ p != p:
        raise NotIdempotent("p @ p != p")
    n = p.rows
    if ring.is_field:
        info = rank_kernel_image(p)
        i = info.image
        r = solve(i, p)
        assert r is not None
        return r, i
    if ring.is_integers:
        if n == 0:
            return p, p
        S, U, V = smith_normal_form(p)
        rk = sum(1 for j in range(min(S.shape)) if S.a[j, j] != 0)
        Uinv = inverse(U)
        i = Uinv.cols_of(list(range(rk)))
        left = U.rows_of(list(range(rk)))
        r = left @ p
        return r, i
    raise WrongBase(f"idempotent splitting unsupported over {ring.label()}")
