from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentkit.categories import MatCat
from laurentkit.chains import ChainComplex, identity_map
from laurentkit.errors import WrongBase
from laurentkit.generators import random_complex, random_contractible
from laurentkit.homology import (
    HomologyWitness,
    contraction_search,
    homology_ranks,
    homology_z,
    is_contractible,
    is_quasi_isomorphism,
)
from laurentkit.matrix import Matrix
from laurentkit.rings import PRESETS

import oracles

seeds = st.integers(0, 2**32 - 1)


def gf2_rank(rows) -> int:
    basis = []
    for r in rows:
        v = int("".join(str(int(x)) for x in r) or "0", 2)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_gf2_homology_matches_bitmask_oracle(seed):
    C = random_complex(random.Random(seed), PRESETS["gf2"](), 4, 3)
    H = homology_ranks(C)
    for n in C.degrees():
        expected = C.obj(n) - gf2_rank(C.d(n).tolist()) - gf2_rank(C.d(n + 1).tolist())
        assert H[n] == expected


def test_exhaustive_small_complexes_over_gf2():
    """Contractibility agrees with vanishing homology on every complex of the brute-force corpus."""
    ring = PRESETS["gf2"]()
    cat = MatCat(ring)
    for B in oracles.all_complexes(max_rank=2):
        r = B.ranks
        C = ChainComplex.make(cat, 0, list(r), {1: Matrix.from_rows(ring, B.d[1], (r[0], r[1])), 2: Matrix.from_rows(ring, B.d[2], (r[1], r[2]))})
        acyclic = not any(homology_ranks(C).values())
        res = contraction_search(C)
        assert isinstance(res, HomologyWitness) != acyclic
        if acyclic:
            res.verify()


@pytest.mark.parametrize(
    "d, expected",
    [([[2]], (0, (2,))), ([[2, 0], [0, 3]], (0, (6,))), ([[0]], (1, ())), ([[1]], (0, ())), ([[4, 0], [0, 6]], (0, (2, 12)))],
)
def test_integer_homology_torsion(d, expected):
    ring = PRESETS["z"]()
    n = len(d)
    C = ChainComplex.make(MatCat(ring), 0, [n, n], {1: Matrix.from_rows(ring, d)})
    assert homology_z(C, 0) == expected


def test_torsion_blocks_contraction_over_z():
    ring = PRESETS["z"]()
    C = ChainComplex.make(MatCat(ring), 0, [1, 1], {1: Matrix.from_rows(ring, [[2]])})
    assert not is_contractible(C)
    res = contraction_search(C)
    assert isinstance(res, HomologyWitness)
    assert res.describe()
    # the same differential is invertible over GF(3)
    gf3 = PRESETS["gf3"]()
    assert is_contractible(ChainComplex.make(MatCat(gf3), 0, [1, 1], {1: Matrix.from_rows(gf3, [[2]])}))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["gf2", "gf4-frob", "gf3", "z"]), seeds)
def test_contractible_complexes_yield_verified_contractions(name, seed):
    C = random_contractible(random.Random(seed), PRESETS[name](), 4, 3)
    gamma = contraction_search(C)
    assert not isinstance(gamma, HomologyWitness)
    gamma.verify()


def test_homology_ranks_needs_field():
    ring = PRESETS["z"]()
    with pytest.raises(WrongBase):
        homology_ranks(ChainComplex.concentrated(MatCat(ring), 1, 0))


def test_quasi_isomorphism_of_identity():
    C = random_complex(random.Random(3), PRESETS["gf4"](), 3, 2)
    assert is_quasi_isomorphism(identity_map(C))
