from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentkit.categories import MatCat
from laurentkit.chains import ChainComplex
from laurentkit.errors import BadCertificate
from laurentkit.generators import random_complex, random_invertible_laurent, random_unimodular
from laurentkit.homology import HomologyWitness, contraction_search, homology_ranks
from laurentkit.laurent import LaurentCat
from laurentkit.matrix import Matrix
from laurentkit.projline import (
    ProjLineMorphism,
    ProjLineObject,
    XCat,
    apply_objectwise,
    gamma_finite,
    gamma_sum_iso,
    l0,
    l1,
    shift,
    t_sequence,
    x_complex,
    x_sequence_exact,
)
from laurentkit.rings import PRESETS

seeds = st.integers(0, 2**32 - 1)


def _line(ring, k: int) -> ChainComplex:
    cat = MatCat(ring)
    return x_complex(cat, 0, [shift(l0(cat, 1), k)])


@pytest.mark.parametrize("name", ["gf2", "gf4-frob", "gf3"])
@pytest.mark.parametrize("k", range(-3, 4))
def test_line_bundle_cohomology(name, k):
    """Sections of the k-th shift of the structure object: ``H_0 = max(0, 1-k)``, ``H_-1 = max(0, k-1)``."""
    m = gamma_finite(_line(PRESETS[name](), k))
    m.verify()
    H = {n: h for n, h in homology_ranks(m.G).items() if h}
    expected = {n: h for n, h in ((0, max(0, 1 - k)), (-1, max(0, k - 1))) if h}
    assert H == expected


def test_gluing_by_a_constant_unit_recovers_the_object():
    """``(A, u . t^0, A)`` for an invertible matrix ``u``: global sections are ``A`` in degree 0."""
    ring = PRESETS["gf4"]()
    cat = MatCat(ring)
    L = LaurentCat(cat, "all")
    rng = random.Random(7)
    for _ in range(30):
        A = rng.randint(1, 3)
        u, uinv = random_unimodular(rng, ring, A)
        C = x_complex(cat, 0, [ProjLineObject.make(cat, A, A, L.mono(u, 0), L.mono(uinv, 0))])
        m = gamma_finite(C)
        m.verify()
        assert {n: h for n, h in homology_ranks(m.G).items() if h} == {0: A}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["gf2", "gf4-frob", "gf3", "z"]), seeds)
def test_l0_preserves_and_shifted_l1_kills(name, seed):
    ring = PRESETS[name]()
    C = random_complex(random.Random(seed), ring, 3, 2)
    G0 = gamma_finite(apply_objectwise("l0", C))
    G0.verify()
    if ring.is_field:
        assert {n: h for n, h in homology_ranks(G0.G).items() if h} == {n: h for n, h in homology_ranks(C).items() if h}
    G1 = gamma_finite(apply_objectwise("l1", C))
    G1.verify()
    gamma = contraction_search(G1.G)
    assert not isinstance(gamma, HomologyWitness)
    gamma.verify()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["gf2", "gf4-frob"]), seeds)
def test_random_gluing_gives_a_verified_model(name, seed):
    rng = random.Random(seed)
    ring = PRESETS[name]()
    cat = MatCat(ring)
    L = LaurentCat(cat, "all")
    A = rng.randint(1, 2)
    f, finv = random_invertible_laurent(rng, L, A)
    C = x_complex(cat, 0, [ProjLineObject.make(cat, A, A, f, finv)])
    gamma_finite(C).verify()


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["gf2", "gf4-frob"]), seeds, st.integers(-2, 2), st.integers(-2, 2))
def test_gamma_is_additive(name, seed, j, k):
    ring = PRESETS[name]()
    iso = gamma_sum_iso(_line(ring, j), _line(ring, k))
    iso.forward.verify()
    iso.backward.verify()


@pytest.mark.parametrize("M", [1, 2, 3])
def test_truncated_sequence(M):
    ring = PRESETS["gf4-frob"]()
    C = random_complex(random.Random(M), ring, 3, 2)
    T = t_sequence(C, M)
    T.ses.verify()
    T.comparison.verify()


def test_l1_gluing_is_t():
    ring = PRESETS["gf2"]()
    cat = MatCat(ring)
    x = l1(cat, 2)
    assert x.f == LaurentCat(cat, "all").t(2, 1)
    assert shift(l0(cat, 2), 1) == x


def test_non_invertible_gluing_is_rejected():
    ring = PRESETS["gf2"]()
    cat = MatCat(ring)
    L = LaurentCat(cat, "all")
    bad = L.add(L.identity(1), L.t(1, 1))
    with pytest.raises(BadCertificate):
        ProjLineObject.make(cat, 1, 1, bad)


def _split_sequence(ring, A: int, B: int, wrong_projection: bool = False):
    """``0 -> x -> x + y -> y -> 0`` in ``X`` for two shifted line objects."""
    cat = MatCat(ring)
    X = XCat(cat)
    x, y = shift(l0(cat, A), 1), shift(l0(cat, B), -1)
    ds = X.direct_sum([x, y])
    return ds.injections[0], ds.projections[0 if wrong_projection else 1]


@pytest.mark.parametrize("name", ["gf2", "gf4-frob"])
def test_split_sequences_are_exact(name):
    i, p = _split_sequence(PRESETS[name](), 1, 2)
    assert x_sequence_exact(i, p).exact


def _zero_like(ring, u):
    plus, minus = LaurentCat(MatCat(ring), "nonneg"), LaurentCat(MatCat(ring), "nonpos")
    return ProjLineMorphism.make(u.src, u.tgt, plus.zero(u.src.Aplus, u.tgt.Aplus), minus.zero(u.src.Aminus, u.tgt.Aminus))


@pytest.mark.parametrize("name", ["gf2", "gf4-frob"])
def test_mutated_sequences_are_not_exact(name):
    ring = PRESETS[name]()
    i, p = _split_sequence(ring, 1, 2)
    assert not x_sequence_exact(i, _zero_like(ring, p)).exact
    assert not x_sequence_exact(_zero_like(ring, i), p).exact
    assert not x_sequence_exact(*_split_sequence(ring, 1, 2, wrong_projection=True)).exact
