from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentkit.categories import MatCat
from laurentkit.chains import ChainComplex, ChainMap, cone, el, identity_map
from laurentkit.errors import BadCertificate, WrongBase
from laurentkit.homology import HomologyWitness, contraction_search
from laurentkit.nil import chain_iterate
from laurentkit.rings import PRESETS
from laurentkit.strictify import chain_nilpotency, strictify_object
from laurentkit.nil import Nilpotent
from laurentkit.suites import Size, homotopy_nilpotent_input

seeds = st.integers(0, 2**32 - 1)


def _check(s) -> None:
    s.verify()
    assert chain_iterate(s.mu, s.n_mu).is_zero()
    assert not isinstance(contraction_search(cone(s.v_prime).complex), HomologyWitness)
    assert s.checks


def test_identity_of_elementary_complex():
    ring = PRESETS["gf2"]()
    E = el(MatCat(ring), 2, 0)
    psi = ChainMap(E.phi(1), E, identity_map(E).comps)
    assert not isinstance(chain_nilpotency(E, psi), Nilpotent)
    s = strictify_object(E, psi)
    _check(s)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["gf2", "gf4-frob", "gf3"]), seeds)
def test_random_homotopy_nilpotent_inputs(name, seed):
    D, psi = homotopy_nilpotent_input(random.Random(seed), PRESETS[name](), Size(3, 2))
    _check(strictify_object(D, psi))


def test_integers_are_rejected():
    ring = PRESETS["z"]()
    E = el(MatCat(ring), 1, 0)
    psi = ChainMap(E.phi(1), E, identity_map(E).comps)
    with pytest.raises(WrongBase):
        strictify_object(E, psi)


def test_not_homotopy_nilpotent_is_rejected():
    ring = PRESETS["gf2"]()
    C = ChainComplex.concentrated(MatCat(ring), 1, 0)
    with pytest.raises(BadCertificate):
        strictify_object(C, identity_map(C), n_max=4)
