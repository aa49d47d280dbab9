"""Certificates: every kind round-trips through JSON and re-verifies; tampering is caught."""

from __future__ import annotations

import json
import random

import pytest

from laurentkit.certificates import (
    KINDS,
    Certificate,
    content_digest,
    contraction_certificate,
    single_entry_mutations,
    verify_certificate,
)
from laurentkit.chains import el
from laurentkit.categories import MatCat
from laurentkit.corpus import certificate_corpus
from laurentkit.errors import ConfigError, LaurentKitError
from laurentkit.homology import contraction_search
from laurentkit.rings import PRESETS


@pytest.fixture(scope="module")
def corpus():
    out = {}
    for name in ("gf2", "gf4-frob", "z", "gf3"):
        out[name] = list(certificate_corpus(PRESETS[name](), seed=11, rounds=1))
    return out


def test_field_corpus_covers_every_kind(corpus):
    for name in ("gf2", "gf4-frob", "gf3"):
        assert {c.kind for c in corpus[name]} == set(KINDS)


def test_integer_corpus_skips_field_only_kinds(corpus):
    kinds = {c.kind for c in corpus["z"]}
    assert "strictification" not in kinds
    assert {"contraction", "homotopy", "iso", "ses-splitting", "nilpotence", "gamma-model"} <= kinds


def test_every_certificate_verifies(corpus):
    for name, certs in corpus.items():
        for c in certs:
            res = verify_certificate(c)
            assert res.ok, (name, c.kind, res.message)
            assert res.identities_ok and res.digest_ok


def test_json_text_round_trip(corpus):
    for certs in corpus.values():
        for c in certs:
            text = json.dumps(c.to_json())
            back = Certificate.from_json(json.loads(text))
            assert back.to_json() == c.to_json()
            assert verify_certificate(json.loads(text)).ok


def test_digest_covers_kind_ring_subject_payload(corpus):
    c = corpus["gf2"][0]
    assert c.digest == content_digest(c.kind, c.ring, c.subject, c.payload)
    assert c.digest != content_digest(c.kind, PRESETS["gf3"](), c.subject, c.payload)


def test_verified_flag_is_not_trusted(corpus):
    c = corpus["gf2"][0].to_json()
    c["payload"] = {"gamma": {}}
    c["verified"] = True
    assert not verify_certificate(c).ok


@pytest.mark.parametrize("name", ["gf2", "z"])
def test_single_entry_mutations_are_rejected(corpus, name):
    for c in corpus[name]:
        for path, mutated in single_entry_mutations(c, ("subject", "payload")):
            assert not verify_certificate(mutated).ok, (c.kind, path)


def test_tampered_contraction_reports_degree(gf2):
    C = el(MatCat(gf2), 2, 0)
    cert = contraction_certificate(contraction_search(C)).to_json()
    cert["payload"]["gamma"]["0"] = [[0, 0], [0, 0]]
    res = verify_certificate(cert)
    assert not res.ok and not res.identities_ok
    assert res.location == "degree 0"


def test_missing_field_is_rejected():
    res = verify_certificate({"kind": "contraction", "ring": "gf2", "subject": {}})
    assert not res.ok


def test_unknown_kind_and_bad_ring_are_config_errors():
    with pytest.raises(LaurentKitError):
        Certificate.from_json({"kind": "magic", "ring": "gf2", "subject": {}, "payload": {}})
    with pytest.raises(ConfigError):
        Certificate.from_json({"kind": "iso", "ring": "gf6", "subject": {}, "payload": {}})


def test_corpus_is_deterministic():
    a = [c.digest for c in certificate_corpus(PRESETS["gf2"](), seed=5, rounds=1)]
    b = [c.digest for c in certificate_corpus(PRESETS["gf2"](), seed=5, rounds=1)]
    assert a == b
