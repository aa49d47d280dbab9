"""Matrix, idempotent-completion and graded categories; rank classes in K_0."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from laurentkit.categories import GradedCat, GradedObject, IdemCat, MatCat, k0_class, k0_map
from laurentkit.errors import NotIdempotent, NotRankClassified, ObjectMismatch
from laurentkit.generators import random_matrix, random_unimodular
from laurentkit.laurent import LaurentCat
from laurentkit.matrix import Matrix
from laurentkit.rings import PRESETS, RingSpec

SEEDS = st.integers(0, 10**6)


def _idempotent(rng, ring, n, r):
    """``P diag(1^r, 0) P^-1``: an idempotent of known rank ``r``."""
    D = Matrix.diag(ring, [Matrix.identity(ring, r), Matrix.zeros(ring, n - r, n - r)])
    P, Q = random_unimodular(rng, ring, n)
    return P @ D @ Q


def test_matcat_direct_sum_structure(gf4f):
    cat = MatCat(gf4f)
    ds = cat.direct_sum([2, 1, 3])
    assert ds.obj == 6
    for i, (inj, prj) in enumerate(zip(ds.injections, ds.projections)):
        for j, inj2 in enumerate(ds.injections):
            expected = cat.identity(ds.parts[i]) if i == j else cat.zero(ds.parts[j], ds.parts[i])
            assert cat.compose(prj, inj2) == expected
    total = cat.sum([cat.compose(i, p) for i, p in zip(ds.injections, ds.projections)], 6, 6)
    assert total == cat.identity(6)


def test_matcat_phi_acts_entrywise(gf4f):
    cat = MatCat(gf4f)
    w = Matrix.from_rows(gf4f, [["w"]])
    assert cat.phi(1, w) == Matrix.from_rows(gf4f, [["w+1"]])
    assert cat.phi(2, w) == w
    assert cat.phi(1, 3) == 3


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["gf2", "gf3", "gf4-frob", "z"]), SEEDS, st.integers(1, 4), st.data())
def test_idempotent_rank(name, seed, n, data):
    ring = PRESETS[name]()
    r = data.draw(st.integers(0, n))
    cat = IdemCat(MatCat(ring))
    A = cat.obj(_idempotent(random.Random(seed), ring, n, r))
    assert cat.rank(A) == r
    assert k0_class(cat, A).rank == r


def test_idempotent_category_identities(gf2):
    cat = IdemCat(MatCat(gf2))
    p = Matrix.from_rows(gf2, [[1, 1], [0, 0]])
    A = cat.obj(p)
    B = cat.free(1)
    f = cat.mor(A, B, Matrix.from_rows(gf2, [[1, 1]]))
    assert cat.compose(f, cat.identity(A)) == f
    assert cat.compose(cat.identity(B), f) == f
    ds = cat.direct_sum([A, B])
    assert cat.rank(ds.obj) == 2
    assert cat.compose(ds.projections[0], ds.injections[0]) == cat.identity(A)
    assert cat.is_zero(cat.compose(ds.projections[1], ds.injections[0]))


def test_idempotent_category_rejects_bad_data(gf2):
    cat = IdemCat(MatCat(gf2))
    with pytest.raises(NotIdempotent):
        cat.obj(Matrix.from_rows(gf2, [[0, 1], [1, 0]]))
    A = cat.obj(Matrix.from_rows(gf2, [[1, 0], [0, 0]]))
    with pytest.raises(ObjectMismatch):
        cat.mor(A, A, Matrix.from_rows(gf2, [[0, 1], [0, 0]]))


def test_idempotent_rank_unclassified_over_zmod_composite():
    ring = RingSpec.zmod(6)
    cat = IdemCat(MatCat(ring))
    with pytest.raises(NotRankClassified):
        cat.rank(cat.free(1))


def test_graded_composition_matches_flattening(gf4f):
    rng = random.Random(4)
    inner = MatCat(gf4f)
    G = GradedCat(inner)
    X = GradedObject(((-1, 1), (0, 2), (2, 1)))
    Y = GradedObject(((0, 2), (1, 2)))
    Z = GradedObject(((-1, 2), (3, 1)))

    def rand(S, T):
        blocks = {(l, k): random_matrix(rng, gf4f, T.piece(l), S.piece(k)) for l in T.weights for k in S.weights}
        return G.make(S, T, blocks)

    f, g = rand(X, Y), rand(Y, Z)
    assert G.flatten(G.compose(g, f)) == G.flatten(g) @ G.flatten(f)
    assert G.unflatten(G.flatten(f), X, Y) == f
    assert G.compose(f, G.identity(X)) == f
    assert G.rank(X) == 4


def test_graded_direct_sum_merges_weights(gf2):
    G = GradedCat(MatCat(gf2))
    A = GradedObject(((0, 1), (1, 2)))
    B = GradedObject(((1, 1), (4, 1)))
    ds = G.direct_sum([A, B])
    assert ds.obj.weights == (0, 1, 4)
    assert ds.obj.piece(1) == 3
    for inj, prj, S in zip(ds.injections, ds.projections, (A, B)):
        assert G.compose(prj, inj) == G.identity(S)


def test_graded_weights_must_increase():
    with pytest.raises(ObjectMismatch):
        GradedObject(((1, 1), (0, 1)))


def test_k0_rank_classes(gf4f):
    assert k0_class(MatCat(gf4f), 3).rank == 3
    assert (k0_class(MatCat(gf4f), 2) + k0_class(MatCat(gf4f), 1)).rank == 3
    assert k0_class(LaurentCat(MatCat(gf4f), "all"), 2).rank == 2
    with pytest.raises(NotRankClassified):
        k0_class(LaurentCat(MatCat(PRESETS["z"]()), "all"), 2)
    assert k0_map("Phi") == 1 and k0_map("i0") == 1
    with pytest.raises(NotRankClassified):
        k0_map("mystery")
