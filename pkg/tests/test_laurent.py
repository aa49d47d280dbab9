from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentkit.categories import MatCat
from laurentkit.errors import NotInvertible, ObjectMismatch, SupportViolation, WrongBase
from laurentkit.generators import random_invertible_laurent, random_laurent, random_matrix
from laurentkit.laurent import LaurentCat, compose_laurent, functor_apply, t_conjugate, try_invert_laurent
from laurentkit.matrix import Matrix
from laurentkit.rings import PRESETS

RINGS = ["gf2", "gf4-frob", "gf8-frob", "z"]
seeds = st.integers(0, 2**32 - 1)


def composition_oracle(g, f) -> dict:
    """Coefficients of ``g o f`` straight from the twisted convolution formula."""
    out: dict = {}
    for j, gj in g.coeffs:
        for i, fi in f.coeffs:
            term = gj @ fi.aut(j)
            out[i + j] = out[i + j] + term if i + j in out else term
    return {k: v for k, v in out.items() if not v.is_zero()}


def _cat(name, mode="all"):
    return LaurentCat(MatCat(PRESETS[name]()), mode)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS), seeds)
def test_composition_matches_convolution_formula(name, seed):
    rng = random.Random(seed)
    L = _cat(name)
    a, b, c = (rng.randint(0, 3) for _ in range(3))
    f, g = random_laurent(rng, L, a, b), random_laurent(rng, L, b, c)
    assert compose_laurent(L, g, f).coeff_map() == composition_oracle(g, f)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS), seeds)
def test_associative_and_bilinear(name, seed):
    rng = random.Random(seed)
    L = _cat(name)
    a, b, c, d = (rng.randint(0, 3) for _ in range(4))
    f, f2 = random_laurent(rng, L, a, b), random_laurent(rng, L, a, b)
    g, g2 = random_laurent(rng, L, b, c), random_laurent(rng, L, b, c)
    h = random_laurent(rng, L, c, d)
    assert L.compose(h, L.compose(g, f)) == L.compose(L.compose(h, g), f)
    assert L.compose(g, L.add(f, f2)) == L.add(L.compose(g, f), L.compose(g, f2))
    assert L.compose(L.add(g, g2), f) == L.add(L.compose(g, f), L.compose(g2, f))
    assert L.compose(L.identity(b), f) == f == L.compose(f, L.identity(a))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS), seeds)
def test_t_commutes_past_coefficients_by_twisting(name, seed):
    rng = random.Random(seed)
    L = _cat(name)
    ring = L.ring
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    f = random_matrix(rng, ring, b, a)
    lhs = L.compose(L.t(b, 1), L.mono(f, 0))
    assert lhs == L.mono(f.aut(1), 1, src=a)


def test_frobenius_twist_is_visible_over_gf4():
    ring = PRESETS["gf4-frob"]()
    L = LaurentCat(MatCat(ring), "all")
    w = Matrix.from_rows(ring, [["w"]])
    lhs = L.compose(L.t(1, 1), L.mono(w, 0))
    assert lhs.coeff(1) == Matrix.from_rows(ring, [["w+1"]])  # w^2 = w + 1
    rhs = L.compose(L.mono(w, 0), L.t(1, 1))
    assert rhs.coeff(1) == w and lhs != rhs


@pytest.mark.parametrize("name", RINGS)
def test_evaluation_after_inclusion_is_identity(name):
    rng = random.Random(name)
    base = MatCat(PRESETS[name]())
    for side in "+-":
        for _ in range(20):
            f = random_matrix(rng, base.ring, rng.randint(0, 3), rng.randint(0, 3))
            assert functor_apply("ev0" + side, base, functor_apply("i" + side, base, f)) == f


def test_halves_reject_wrong_exponents():
    L = _cat("gf2", "nonneg")
    with pytest.raises(SupportViolation):
        L.t(1, -1)
    base = MatCat(PRESETS["gf2"]())
    full = LaurentCat(base, "all")
    with pytest.raises(SupportViolation):
        functor_apply("ev0+", base, full.t(1, -1))


def test_coefficient_shape_is_checked():
    L = _cat("gf2")
    with pytest.raises(ObjectMismatch):
        L.make(2, 1, {0: Matrix.from_rows(L.ring, [[1]])})


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(RINGS), seeds)
def test_generated_invertibles_invert(name, seed):
    rng = random.Random(seed)
    L = _cat(name)
    A = rng.randint(1, 3)
    f, finv = random_invertible_laurent(rng, L, A)
    assert L.compose(f, finv) == L.identity(A) == L.compose(finv, f)
    if not L.ring.is_field:
        with pytest.raises(WrongBase):
            try_invert_laurent(L, f)
        return
    g = try_invert_laurent(L, f)
    assert L.compose(f, g) == L.identity(A)


def test_non_units_do_not_invert():
    L = _cat("gf2")
    one_plus_t = L.add(L.identity(1), L.t(1, 1))
    with pytest.raises(NotInvertible):
        try_invert_laurent(L, one_plus_t)
    assert L.compose(L.t(1, 1), try_invert_laurent(L, L.t(1, 1))) == L.identity(1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(RINGS), seeds, st.integers(-3, 3))
def test_t_conjugation_is_a_functor(name, seed, k):
    rng = random.Random(seed)
    L = _cat(name)
    f, g = random_laurent(rng, L, 2, 2), random_laurent(rng, L, 2, 2)
    assert t_conjugate(L, L.compose(g, f), k) == L.compose(t_conjugate(L, g, k), t_conjugate(L, f, k))
    assert t_conjugate(L, t_conjugate(L, f, k), -k) == f
