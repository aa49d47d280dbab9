from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentkit.errors import ConfigError
from laurentkit.rings import PRESETS, RingSpec, element_name, parse_element, ring_from_json, ring_to_json

FINITE = ["gf2", "gf3", "gf4", "gf4-frob", "gf8-frob", "gf9-frob"]


def poly_mulmod(a: int, b: int, p: int, k: int, modulus: tuple) -> int:
    """Schoolbook product of base-p encoded polynomials reduced by a monic modulus."""
    da = [(a // p**i) % p for i in range(k)]
    db = [(b // p**i) % p for i in range(k)]
    prod = [0] * (2 * k)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(2 * k - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for i, m in enumerate(modulus):
                prod[deg - k + i] = (prod[deg - k + i] - c * m) % p
    return sum(prod[i] * p**i for i in range(k))


@pytest.mark.parametrize("name", FINITE)
def test_multiplication_matches_polynomial_oracle(name):
    ring = PRESETS[name]()
    ar = ring.arith()
    for a in ring.elements():
        for b in ring.elements():
            assert ar.s_mul(a, b) == poly_mulmod(a, b, ring.p, ring.k, ring.modulus)


@pytest.mark.parametrize("name", FINITE)
def test_field_axioms(name):
    ring = PRESETS[name]()
    ar = ring.arith()
    for a in ring.elements():
        assert ar.s_add(a, ar.s_neg(a)) == 0
        if a:
            assert ar.s_mul(a, ar.s_inv(a)) == 1


@pytest.mark.parametrize("name", ["gf4-frob", "gf8-frob", "gf9-frob"])
def test_frobenius_is_pth_power_automorphism(name):
    ring = PRESETS[name]()
    ar = ring.arith()
    for a in ring.elements():
        pth = 1
        for _ in range(ring.p):
            pth = ar.s_mul(pth, a)
        assert ar.s_aut(a, 1) == pth
        for b in ring.elements():
            assert ar.s_aut(ar.s_mul(a, b), 1) == ar.s_mul(ar.s_aut(a, 1), ar.s_aut(b, 1))
            assert ar.s_aut(ar.s_add(a, b), 1) == ar.s_add(ar.s_aut(a, 1), ar.s_aut(b, 1))
    assert all(ar.s_aut(a, ring.order) == a for a in ring.elements())
    assert ring.order == ring.k


def test_identity_automorphism_has_order_one():
    assert PRESETS["gf4"]().order == 1
    assert PRESETS["z"]().order == 1
    assert RingSpec.integers(infinite_order=True).order is None


@pytest.mark.parametrize("name", FINITE)
def test_names_round_trip(name):
    ring = PRESETS[name]()
    for a in ring.elements():
        assert parse_element(ring, element_name(ring, a)) == a


def test_named_elements_of_gf4():
    ring = PRESETS["gf4"]()
    w = parse_element(ring, "w")
    assert parse_element(ring, "w^2") == parse_element(ring, "w+1")
    assert ring.arith().s_mul(w, w) == parse_element(ring, "w+1")


@given(st.integers(-10**6, 10**6))
def test_integer_parsing_accepts_ints_and_numeric_strings(v):
    z = PRESETS["z"]()
    assert parse_element(z, v) == v
    assert parse_element(z, str(v)) == v


@pytest.mark.parametrize("name", FINITE + ["z"])
def test_ring_json_round_trip(name):
    ring = PRESETS[name]()
    assert ring_from_json(ring_to_json(ring)) == ring


@pytest.mark.parametrize(
    "spec, where",
    [
        ({"kind": "gf", "p": 4}, "p"),
        ({"kind": "gf", "p": 2, "k": 2, "modulus": [1, 0, 1]}, "modulus"),
        ({"kind": "int", "aut": {"frobenius": 1}}, "ring.aut"),
        ({"kind": "quaternion"}, "ring.kind"),
        ({"kind": "gf", "p": 2, "k": 2, "aut": {"frobenius": 1}, "order": 3}, "ring.order"),
    ],
)
def test_bad_ring_specs_report_location(spec, where):
    with pytest.raises(ConfigError) as exc:
        ring_from_json(spec)
    assert exc.value.location == where


def test_bool_is_not_an_integer():
    with pytest.raises(ConfigError):
        parse_element(PRESETS["z"](), True)


@settings(max_examples=50)
@given(st.sampled_from(FINITE), st.data())
def test_distributivity(name, data):
    ring = PRESETS[name]()
    ar = ring.arith()
    el = st.integers(0, ring.n - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert ar.s_mul(a, ar.s_add(b, c)) == ar.s_add(ar.s_mul(a, b), ar.s_mul(a, c))
