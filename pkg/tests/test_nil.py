from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentkit.categories import MatCat
from laurentkit.chains import ChainComplex, ChainMap, el, identity_map
from laurentkit.errors import BadCertificate, WindowTooSmall
from laurentkit.generators import random_nilpotent
from laurentkit.laurent import LaurentCat
from laurentkit.matrix import Matrix
from laurentkit.nil import (
    HomotopyNilCertificate,
    NilObject,
    Nilpotent,
    NotHomotopyNilpotent,
    NotNilpotent,
    characteristic_sequence,
    chi,
    chi_complex,
    homotopy_nilpotent_certify,
    nilpotency_degree,
    read_nil,
    twisted_iterate,
)
from laurentkit.rings import PRESETS

from test_rings import poly_mulmod

seeds = st.integers(0, 2**32 - 1)


def iterate_oracle(ring, phi: list[list[int]], k: int) -> list[list[int]]:
    """``phi . Phi(phi) ... Phi^{k-1}(phi)`` with Phi the p-th power map, in plain integers."""
    p, deg, mod = ring.p, ring.k, ring.modulus
    mul = lambda a, b: poly_mulmod(a, b, p, deg, mod)

    def add(a, b):
        return sum((((a // p**i) + (b // p**i)) % p) * p**i for i in range(deg))

    def frob(a, times):
        for _ in range(times if ring.aut[0] == "frobenius" else 0):
            a = mul(a, a) if p == 2 else mul(mul(a, a), a)
        return a

    n = len(phi)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for j in range(k):
        tw = [[frob(x, j) for x in row] for row in phi]
        new = [[0] * n for _ in range(n)]
        for r in range(n):
            for c in range(n):
                acc = 0
                for m in range(n):
                    acc = add(acc, mul(out[r][m], tw[m][c]))
                new[r][c] = acc
        out = new
    return out


@pytest.mark.parametrize("name", ["gf4-frob", "gf4"])
def test_nilpotency_degree_exhaustive_2x2(name):
    ring = PRESETS[name]()
    cat = MatCat(ring)
    for entries in itertools.product(range(4), repeat=4):
        rows = [list(entries[:2]), list(entries[2:])]
        expected = next((k for k in range(1, 5) if not any(any(r) for r in iterate_oracle(ring, rows, k))), None)
        res = nilpotency_degree(cat, 2, Matrix.from_rows(ring, rows))
        if expected is None:
            assert isinstance(res, NotNilpotent)
        else:
            assert res == Nilpotent(expected)


def test_frobenius_changes_nilpotence():
    """Some 2x2 matrices are nilpotent for one automorphism and not the other."""
    twisted, plain = PRESETS["gf4-frob"](), PRESETS["gf4"]()
    differ = 0
    for entries in itertools.product(range(4), repeat=4):
        rows = [list(entries[:2]), list(entries[2:])]
        a = nilpotency_degree(MatCat(twisted), 2, Matrix.from_rows(twisted, rows))
        b = nilpotency_degree(MatCat(plain), 2, Matrix.from_rows(plain, rows))
        differ += isinstance(a, Nilpotent) != isinstance(b, Nilpotent)
    assert differ > 0


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_jordan_block_degree(r):
    ring = PRESETS["gf2"]()
    J = Matrix.from_rows(ring, [[int(j == i + 1) for j in range(r)] for i in range(r)])
    assert nilpotency_degree(MatCat(ring), r, J) == Nilpotent(r)


def test_integers_nilpotence():
    ring = PRESETS["z"]()
    assert nilpotency_degree(MatCat(ring), 2, Matrix.from_rows(ring, [[0, 5], [0, 0]])) == Nilpotent(2)
    assert isinstance(nilpotency_degree(MatCat(ring), 1, Matrix.from_rows(ring, [[2]])), NotNilpotent)


def test_wrong_exponent_is_rejected():
    ring = PRESETS["gf2"]()
    with pytest.raises(BadCertificate):
        NilObject(MatCat(ring), 2, Matrix.from_rows(ring, [[0, 1], [0, 0]]), 1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["gf2", "gf4", "gf4-frob", "gf9-frob", "z"]), seeds)
def test_chi_inverse_is_geometric_series(name, seed):
    rng = random.Random(seed)
    ring = PRESETS[name]()
    cat = MatCat(ring)
    A = rng.randint(1, 3)
    nil = NilObject.certify(cat, A, random_nilpotent(rng, ring, A))
    res = chi(nil)
    res.contraction.verify()
    expected = {}
    for i in range(nil.n):
        c = twisted_iterate(cat, nil.phi, i, A).aut(1)
        if not c.is_zero():
            expected[i + 1] = c
    assert res.inverse.coeff_map() == expected
    assert read_nil(res.D) == (A, nil.phi)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["gf2", "gf4-frob", "z"]), seeds, st.integers(1, 6))
def test_characteristic_sequence_over_base(name, seed, w0):
    rng = random.Random(seed)
    ring = PRESETS[name]()
    cat = MatCat(ring)
    A = rng.randint(1, 3)
    nil = NilObject.certify(cat, A, random_nilpotent(rng, ring, A))
    cs = characteristic_sequence("over-base", nil, w0)
    cs.contraction.verify()
    cs.split_ses().verify()
    assert len(cs.sub) == w0 and len(cs.middle) == w0 + 1
    for k in range(w0 + 1):
        assert cs.block("e", 0, k) == twisted_iterate(cat, nil.phi, k, A)


@pytest.mark.parametrize("w0", [1, 2, 3, 8])
def test_characteristic_sequence_over_laurent(w0):
    ring = PRESETS["gf4-frob"]()
    L = LaurentCat(MatCat(ring), "nonpos")
    cs = characteristic_sequence("over-laurent", (L, 2), w0)
    cs.contraction.verify()
    assert cs.block("e", 0, w0) == L.t(2, -w0)


def test_window_must_be_positive():
    ring = PRESETS["gf2"]()
    nil = NilObject.certify(MatCat(ring), 1, Matrix.from_rows(ring, [[0]]))
    with pytest.raises(WindowTooSmall):
        characteristic_sequence("over-base", nil, 0)


def test_identity_of_contractible_is_homotopy_nilpotent():
    ring = PRESETS["gf4-frob"]()
    E = el(MatCat(ring), 2, 0)
    phi = ChainMap(E.phi(1), E, identity_map(E).comps)
    cert = homotopy_nilpotent_certify(E, phi)
    assert isinstance(cert, HomotopyNilCertificate) and cert.n == 1
    cert.verify()


def test_identity_with_homology_is_not_homotopy_nilpotent():
    ring = PRESETS["gf2"]()
    C = ChainComplex.concentrated(MatCat(ring), 1, 0)
    phi = identity_map(C)
    assert homotopy_nilpotent_certify(C, phi, n_max=8) == NotHomotopyNilpotent(8)


def test_chi_complex_shape():
    ring = PRESETS["gf2"]()
    C = ChainComplex.concentrated(MatCat(ring), 2, 0)
    phi = ChainMap(C.phi(1), C, {0: Matrix.from_rows(ring, [[0, 1], [0, 0]])})
    D = chi_complex(C, phi)
    assert D.ranks() == {0: 2, 1: 2}
