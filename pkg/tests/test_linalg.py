from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentkit.errors import WrongBase
from laurentkit.linalg import inverse, rank, rank_kernel_image, smith_normal_form, solve, solve_z
from laurentkit.matrix import Matrix
from laurentkit.rings import PRESETS

Z = PRESETS["z"]()
GF2 = PRESETS["gf2"]()


def int_matrices(max_rows=5, max_cols=5, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def det(rows: list[list[int]]) -> int:
    """Laplace expansion, fine for the tiny sizes used here."""
    n = len(rows)
    if n == 0:
        return 1
    return sum((-1) ** j * rows[0][j] * det([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(n) if rows[0][j])


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_smith_normal_form(rows):
    M = Matrix.from_rows(Z, rows)
    S, U, V = smith_normal_form(M)
    assert U @ M @ V == S
    assert abs(det(U.tolist())) == 1 and abs(det(V.tolist())) == 1
    m, n = S.shape
    diag = [S.entry(i, i) for i in range(min(m, n))]
    assert all(S.entry(i, j) == 0 for i in range(m) for j in range(n) if i != j)
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert diag[: len(nonzero)] == nonzero
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


def test_smith_normal_form_known_example():
    M = Matrix.from_rows(Z, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    S, _, _ = smith_normal_form(M)
    assert [S.entry(i, i) for i in range(3)] == [2, 6, 12]


def gf2_rank_oracle(rows: list[list[int]]) -> int:
    """Rank over GF(2) by elimination on bitmasks."""
    basis = []
    for r in rows:
        v = int("".join(map(str, r)) or "0", 2)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


@settings(max_examples=150, deadline=None)
@given(int_matrices(bound=1))
def test_gf2_rank_and_kernel(rows):
    rows = [[x % 2 for x in r] for r in rows]
    M = Matrix.from_rows(GF2, rows)
    rk = rank_kernel_image(M)
    assert rk.rank == rank(M) == gf2_rank_oracle(rows)
    assert (M @ rk.kernel).is_zero()
    assert rk.kernel.cols == M.cols - rk.rank


@settings(max_examples=100, deadline=None)
@given(int_matrices(4, 4))
def test_solve_z_recovers_solutions(rows):
    A = Matrix.from_rows(Z, rows)
    X = Matrix.from_rows(Z, [[1] for _ in range(A.cols)])
    B = A @ X
    Y = solve_z(A, B)
    assert Y is not None and A @ Y == B


def test_solve_z_detects_divisibility_obstruction():
    assert solve_z(Matrix.from_rows(Z, [[2]]), Matrix.from_rows(Z, [[1]])) is None


def test_inverse_over_gf4():
    ring = PRESETS["gf4"]()
    A = Matrix.from_rows(ring, [["w", 1], [0, "w+1"]])
    Ai = inverse(A)
    assert A @ Ai == Matrix.identity(ring, 2)
    assert inverse(Matrix.from_rows(ring, [[1, 1], [1, 1]])) is None


def test_field_only_routines_reject_integers():
    with pytest.raises(WrongBase):
        rank_kernel_image(Matrix.from_rows(Z, [[1]]))


def test_solve_inconsistent_system():
    A = Matrix.from_rows(GF2, [[1, 0], [0, 0]])
    B = Matrix.from_rows(GF2, [[0], [1]])
    assert solve(A, B) is None
