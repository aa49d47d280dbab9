from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentkit.categories import MatCat
from laurentkit.chains import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    Contraction,
    add_maps,
    compose_maps,
    cone,
    cyl,
    cylinder_sequences,
    el,
    el_contraction,
    elementary_decomposition,
    identity_map,
    null_homotopy_boundary,
    zero_map,
)
from laurentkit.errors import NotAContraction, NotAHomotopy
from laurentkit.generators import random_chain_map, random_complex, random_contractible, random_graded
from laurentkit.homology import cartesian_conditions, contraction_search, is_homotopy_cartesian, HomologyWitness
from laurentkit.matrix import Matrix
from laurentkit.rings import PRESETS

RINGS = ["gf2", "gf4-frob", "gf3", "z"]
FIELDS = ["gf2", "gf4-frob", "gf3"]
seeds = st.integers(0, 2**32 - 1)


def _scalar_complex(ring, d: int):
    """``F --d--> F`` in degrees 1 -> 0."""
    cat = MatCat(ring)
    return ChainComplex.make(cat, 0, [1, 1], {1: Matrix.from_rows(ring, [[d]])})


def test_elementary_complex_contracts():
    cat = MatCat(PRESETS["gf2"]())
    E = el(cat, 3, -1)
    gamma = el_contraction(E)
    gamma.verify()
    assert E.ranks() == {-1: 3, 0: 3}


def test_wrong_contraction_is_rejected():
    ring = PRESETS["gf2"]()
    C = _scalar_complex(ring, 0)
    with pytest.raises(NotAContraction):
        Contraction(C, {0: Matrix.from_rows(ring, [[1]])}).verify()


def test_square_zero_is_enforced():
    ring = PRESETS["gf2"]()
    cat = MatCat(ring)
    one = Matrix.from_rows(ring, [[1]])
    with pytest.raises(Exception):
        ChainComplex.make(cat, 0, [1, 1, 1], {1: one, 2: one})


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(RINGS), seeds)
def test_cone_of_identity_contracts(name, seed):
    C = random_complex(random.Random(seed), PRESETS[name](), 3, 2)
    K = cone(identity_map(C)).complex
    res = contraction_search(K)
    assert not isinstance(res, HomologyWitness)
    res.verify()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(RINGS), seeds)
def test_cylinder_identities(name, seed):
    rng = random.Random(seed)
    ring = PRESETS[name]()
    C, D = random_complex(rng, ring, 3, 2), random_complex(rng, ring, 3, 2)
    f = random_chain_map(rng, C, D)
    Y = cyl(f)
    assert compose_maps(Y.pr, Y.i_C).equals(f)
    assert compose_maps(Y.pr, Y.i_D).equals(identity_map(D))
    Y.h.verify()
    for ses in cylinder_sequences(f):
        ses.verify()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(RINGS), seeds)
def test_null_homotopic_maps_have_boundary_homotopies(name, seed):
    rng = random.Random(seed)
    ring = PRESETS[name]()
    C, D = random_complex(rng, ring, 3, 2), random_complex(rng, ring, 3, 2)
    h = random_graded(rng, C, D, 1)
    g = null_homotopy_boundary(C, D, h)
    g.verify()
    ChainHomotopy(zero_map(C, D), g, h).verify()
    with pytest.raises(NotAHomotopy) if not g.is_zero() else _nothing():
        ChainHomotopy(zero_map(C, D), zero_map(C, D), h).verify()


class _nothing:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(RINGS), seeds)
def test_elementary_decomposition_of_contractible(name, seed):
    ring = PRESETS[name]()
    E = random_contractible(random.Random(seed), ring, 4, 3)
    gamma = contraction_search(E)
    dec = elementary_decomposition(E, gamma)
    assert compose_maps(dec.inv, dec.iso).equals(identity_map(dec.iso.src))
    assert compose_maps(dec.iso, dec.inv).equals(identity_map(dec.iso.tgt))
    rank = lambda pieces: sum(2 * E.cat.rank(X) for X, _ in pieces)
    assert rank(dec.X) == sum(E.ranks().values()) + rank(dec.Xprime)


# ---- homotopy cartesian squares


def _square_from(rng, ring, twist: bool):
    """``f = k``, ``g = l + (d h' + h' d)``: commutes up to ``-h' f``."""
    A, B, D = (random_complex(rng, ring, 3, 2) for _ in range(3))
    f = random_chain_map(rng, A, B)
    l = random_chain_map(rng, B, D)
    if twist:
        hp = random_graded(rng, B, D, 1)
        g = add_maps(l, null_homotopy_boundary(B, D, hp))
        cat = A.cat
        h = {n: cat.neg(cat.compose(hp[n], f.at(n))) for n in hp if n in A.degrees()}
    else:
        g, h = l, {}
    return f, f, g, l, h


@pytest.mark.parametrize("name", FIELDS + ["z"])
def test_square_of_identities_is_cartesian(name):
    ring = PRESETS[name]()
    rng = random.Random(0)
    A, C = random_complex(rng, ring, 3, 2), random_complex(rng, ring, 3, 2)
    k = random_chain_map(rng, A, C)
    verdict = is_homotopy_cartesian(identity_map(A), k, identity_map(C), k, {})
    assert verdict.cartesian
    verdict.certificate.verify()
    assert cartesian_conditions(identity_map(A), k, identity_map(C), k, {}) == (True, True, True)


def test_zero_map_square_is_not_cartesian():
    """``0 -> F`` over ``F -0-> F`` with ``l = id``: the cones differ in total rank."""
    ring = PRESETS["gf2"]()
    cat = MatCat(ring)
    Z = ChainComplex.zero(cat)
    F = ChainComplex.concentrated(cat, 1, 0)
    f = ChainMap(Z, F, {})
    k = ChainMap(Z, F, {})
    g = zero_map(F, F)
    l = identity_map(F)
    verdict = is_homotopy_cartesian(f, k, g, l, {})
    assert not verdict.cartesian
    assert verdict.witness is not None
    assert cartesian_conditions(f, k, g, l, {}) == (False, False, False)


def test_cartesian_certificate_is_checked():
    ring = PRESETS["gf2"]()
    rng = random.Random(5)
    A = random_complex(rng, ring, 3, 2)
    idA = identity_map(A)
    good = is_homotopy_cartesian(idA, idA, idA, idA, {})
    assert is_homotopy_cartesian(idA, idA, idA, idA, {}, certificate=good.certificate).cartesian
    K = good.certificate.C
    bad = Contraction(K, {})
    if not K.is_zero():
        with pytest.raises(NotAContraction):
            is_homotopy_cartesian(idA, idA, idA, idA, {}, certificate=bad)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS + ["z"]), seeds, st.booleans())
def test_three_cartesian_conditions_agree(name, seed, twist):
    f, k, g, l, h = _square_from(random.Random(seed), PRESETS[name](), twist)
    c = cartesian_conditions(f, k, g, l, h)
    assert len(set(c)) == 1
    assert is_homotopy_cartesian(f, k, g, l, h).cartesian == c[0]
