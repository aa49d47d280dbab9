"""Suite runner: ordering, determinism, skipping and counterexample shrinking."""

from __future__ import annotations

import json

import pytest

from laurentkit import suites
from laurentkit.config import Config
from laurentkit.generators import random_complex
from laurentkit.rings import PRESETS
from laurentkit.suites import SUITES, Size, Suite, run_suite

ORDER: list[str] = []


def _zero(ring, cfg, ctx):
    ORDER.append("degenerate")


def _total_rank_case(rng, ring, size, cfg, ctx):
    """Fails whenever the drawn complex has rank at least 2 in some degree."""
    ORDER.append("random")
    C = random_complex(rng, ring, size.max_length, size.max_rank, min_length=size.max_length)
    ctx.complex("C", C)
    suites._check(all(r < 2 for r in C.ranks().values()), "all ranks below 2")


@pytest.fixture
def fake_suite(monkeypatch):
    ORDER.clear()
    monkeypatch.setitem(SUITES, "fake", Suite("fake", suites._any, (("zero", _zero),), _total_rank_case, 5))
    return "fake"


def test_degenerate_case_runs_first(fake_suite):
    run_suite(fake_suite, PRESETS["gf2"](), Config(), 3, Size(1, 1))
    assert ORDER == ["degenerate", "random", "random", "random"]


def test_failures_are_shrunk(fake_suite):
    rep = run_suite(fake_suite, PRESETS["gf2"](), Config(seed=1), 6, Size(4, 3))
    assert rep.failures
    for f in rep.failures:
        cx = f.counterexample
        assert cx is not None and "inputs" in cx
        # the smallest size that can fail needs rank 2 in one degree
        assert tuple(cx["size"]) in {(2, 2), (3, 2)}
        assert tuple(cx["size"]) < (4, 3)
        assert "shrink" in cx["seed"]


def test_passing_small_size_reports_nothing(fake_suite):
    rep = run_suite(fake_suite, PRESETS["gf2"](), Config(), 10, Size(3, 1))
    assert rep.ok and rep.cases_run == 11


def test_report_json_is_deterministic_without_timing():
    ring = PRESETS["gf4-frob"]()
    a = run_suite("laurent", ring, Config(seed=2), 15).to_json()
    b = run_suite("laurent", ring, Config(seed=2), 15).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "wall_time" not in a


def test_timing_is_opt_in():
    rep = run_suite("chi", PRESETS["gf2"](), Config(), 2)
    assert "wall_time" in rep.to_json(include_time=True)


@pytest.mark.parametrize("name", ["strictify"])
def test_field_only_suite_skips_over_z(name):
    rep = run_suite(name, PRESETS["z"](), Config(), 5)
    assert rep.skipped and rep.ok and rep.cases_run == 0


def test_non_prime_modulus_skips_homotopy_suites():
    ring = PRESETS["z"]().__class__.zmod(4)
    rep = run_suite("gamma", ring, Config(), 3)
    assert rep.skipped


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes_briefly_on_gf2(name):
    rep = run_suite(name, PRESETS["gf2"](), Config(), 3)
    assert rep.ok, [f.message for f in rep.failures]
    assert rep.cases_run == 4


def test_case_ids_are_stable():
    rep = run_suite("chi", PRESETS["gf2"](), Config(), 2)
    assert rep.failures == []
    assert suites.case_seed(7, "chi", 3) == "7:chi:3"
