"""Immutable matrices over a :class:`RingSpec`.

A morphism ``m -> n`` in the matrix category is an ``n x m`` matrix, so
composition ``g o f`` is the product ``g @ f``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import ObjectMismatch
from .rings import RingSpec, element_name, element_to_json, parse_element


class Matrix:
    __slots__ = ("ring", "a", "_hash")

    def __init__(self, ring: RingSpec, a: np.ndarray):
        if a.ndim != 2:
            raise ValueError("matrix data must be two dimensional")
        a.setflags(write=False)
        self.ring = ring
        self.a = a
        self._hash = None

    # ---- construction ----
    @classmethod
    def from_rows(cls, ring: RingSpec, rows: Sequence[Sequence], shape: tuple[int, int] | None = None) -> "Matrix":
        ar = ring.arith()
        if shape is not None and (shape[0] == 0 or shape[1] == 0):
            return cls.zeros(ring, shape[0], shape[1])
        data = [[parse_element(ring, x) if not isinstance(x, (int, np.integer)) or isinstance(x, bool) else int(x) for x in row] for row in rows]
        if not data:
            return cls.zeros(ring, 0, shape[1] if shape else 0)
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged matrix rows")
        m = cls(ring, ar.canon(data).reshape(len(data), width))
        if shape is not None and m.shape != tuple(shape):
            raise ObjectMismatch(f"expected shape {shape}, got {m.shape}")
        return m

    @classmethod
    def zeros(cls, ring: RingSpec, r: int, c: int) -> "Matrix":
        return cls(ring, np.zeros((r, c), dtype=ring.arith().dtype))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> "Matrix":
        a = np.zeros((n, n), dtype=ring.arith().dtype)
        for i in range(n):
            a[i, i] = 1
        return cls(ring, a)

    @classmethod
    def scalar(cls, ring: RingSpec, value) -> "Matrix":
        return cls.from_rows(ring, [[value]])

    @classmethod
    def block(cls, ring: RingSpec, grid: Sequence[Sequence["Matrix | None"]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "Matrix":
        """Assemble a block matrix; ``None`` entries are zero blocks."""
        r, c = sum(row_sizes), sum(col_sizes)
        a = np.zeros((r, c), dtype=ring.arith().dtype)
        r0 = 0
        for i, rs in enumerate(row_sizes):
            c0 = 0
            for j, cs in enumerate(col_sizes):
                blk = grid[i][j] if grid else None
                if blk is not None:
                    if blk.shape != (rs, cs):
                        raise ObjectMismatch(f"block ({i},{j}) has shape {blk.shape}, expected {(rs, cs)}")
                    a[r0:r0 + rs, c0:c0 + cs] = blk.a
                c0 += cs
            r0 += rs
        return cls(ring, a)

    @classmethod
    def diag(cls, ring: RingSpec, blocks: Sequence["Matrix"]) -> "Matrix":
        rs = [b.rows for b in blocks]
        cs = [b.cols for b in blocks]
        grid = [[blocks[i] if i == j else None for j in range(len(blocks))] for i in range(len(blocks))]
        return cls.block(ring, grid, rs, cs)

    # ---- shape ----
    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    # ---- algebra ----
    def _check_ring(self, other: "Matrix"):
        if self.ring != other.ring:
            raise ObjectMismatch("matrices over different rings")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_ring(other)
        if self.cols != other.rows:
            raise ObjectMismatch(f"cannot compose {self.shape} after {other.shape}")
        return Matrix(self.ring, self.ring.arith().matmul(self.a, other.a))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_ring(other)
        if self.shape != other.shape:
            raise ObjectMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.ring, self.ring.arith().add(self.a, other.a))

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, self.ring.arith().neg(self.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_ring(other)
        if self.shape != other.shape:
            raise ObjectMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix(self.ring, self.ring.arith().sub(self.a, other.a))

    def scale(self, c) -> "Matrix":
        return Matrix(self.ring, self.ring.arith().scale(c, self.a))

    def aut(self, power: int) -> "Matrix":
        if power == 0 or self.ring.aut_is_identity:
            return self
        return Matrix(self.ring, self.ring.arith().aut(self.a, power))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ring, self.a.T.copy())

    def sub(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix(self.ring, self.a[r0:r1, c0:c1].copy())

    def rows_of(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.ring, self.a[list(idx), :].reshape(len(idx), self.cols).copy())

    def cols_of(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.ring, self.a[:, list(idx)].reshape(self.rows, len(idx)).copy())

    def hstack(self, *others: "Matrix") -> "Matrix":
        return Matrix(self.ring, np.hstack([self.a] + [o.a for o in others]))

    def vstack(self, *others: "Matrix") -> "Matrix":
        return Matrix(self.ring, np.vstack([self.a] + [o.a for o in others]))

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        b = self.a.copy()
        b[i, j] = value
        return Matrix(self.ring, b)

    def entry(self, i: int, j: int):
        v = self.a[i, j]
        return int(v)

    def is_zero(self) -> bool:
        return not self.a.any() if self.a.size else True

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.ring, self.rows)

    def nonzero_entries(self) -> Iterable[tuple[int, int]]:
        rr, cc = np.nonzero(self.a != 0)
        return list(zip(rr.tolist(), cc.tolist()))

    # ---- comparison ----
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, self.shape, tuple(int(x) for x in self.a.ravel())))
        return self._hash

    # ---- io ----
    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.a]

    def to_json(self):
        return [[element_to_json(self.ring, x) for x in row] for row in self.a]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(element_name(self.ring, x) for x in row) for row in self.a)
        return f"Matrix<{self.ring.label()}>{self.rows}x{self.cols}[{body}]"
