"""Random generators produce what they promise."""

from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from laurentkit.categories import MatCat
from laurentkit.generators import (
    random_chain_map,
    random_complex,
    random_contractible,
    random_invertible_laurent,
    random_nilpotent,
    random_unimodular,
)
from laurentkit.homology import HomologyWitness, contraction_search
from laurentkit.laurent import LaurentCat
from laurentkit.nil import Nilpotent, nilpotency_degree
from laurentkit.rings import PRESETS

RINGS = st.sampled_from(["gf2", "gf3", "gf4-frob", "gf8-frob", "z"])
SEEDS = st.integers(0, 10**6)


@settings(max_examples=40, deadline=None)
@given(RINGS, SEEDS)
def test_random_complexes_satisfy_d_squared_zero(name, seed):
    ring = PRESETS[name]()
    C = random_complex(random.Random(seed), ring, 4, 3)
    C.verify()
    assert len(C.degrees()) <= 4
    assert all(0 <= r <= 3 for r in C.ranks().values())


@settings(max_examples=40, deadline=None)
@given(RINGS, SEEDS)
def test_contractible_generator_is_contractible(name, seed):
    ring = PRESETS[name]()
    C = random_contractible(random.Random(seed), ring, 4, 3)
    gamma = contraction_search(C)
    assert not isinstance(gamma, HomologyWitness)
    gamma.verify()


@settings(max_examples=40, deadline=None)
@given(RINGS, SEEDS)
def test_random_chain_maps_commute_with_d(name, seed):
    ring = PRESETS[name]()
    rng = random.Random(seed)
    C = random_complex(rng, ring, 3, 2)
    D = random_complex(rng, ring, 3, 2)
    f = random_chain_map(rng, C, D)
    f.verify()


@settings(max_examples=40, deadline=None)
@given(RINGS, SEEDS, st.integers(1, 4))
def test_unimodular_pairs_are_inverse(name, seed, n):
    ring = PRESETS[name]()
    P, Q = random_unimodular(random.Random(seed), ring, n)
    assert (P @ Q).is_identity() and (Q @ P).is_identity()


@settings(max_examples=40, deadline=None)
@given(RINGS, SEEDS, st.integers(1, 4))
def test_random_nilpotent_degree_at_most_size(name, seed, A):
    ring = PRESETS[name]()
    phi = random_nilpotent(random.Random(seed), ring, A)
    res = nilpotency_degree(MatCat(ring), A, phi)
    assert isinstance(res, Nilpotent) and 1 <= res.n <= A


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["gf2", "gf4-frob", "gf9-frob"]), SEEDS, st.integers(1, 3))
def test_random_invertible_laurent_pairs(name, seed, A):
    L = LaurentCat(MatCat(PRESETS[name]()), "all")
    f, finv = random_invertible_laurent(random.Random(seed), L, A)
    assert L.compose(f, finv) == L.identity(A)
    assert L.compose(finv, f) == L.identity(A)


def test_generators_are_seed_deterministic():
    ring = PRESETS["gf4-frob"]()
    a = random_complex(random.Random("s"), ring, 4, 3)
    b = random_complex(random.Random("s"), ring, 4, 3)
    assert a.same_as(b)


def test_prime_complexes_are_fixed_by_the_automorphism():
    ring = PRESETS["gf4-frob"]()
    for seed in range(20):
        C = random_complex(random.Random(seed), ring, 3, 3, prime=True)
        assert C.phi(1).same_as(C)
