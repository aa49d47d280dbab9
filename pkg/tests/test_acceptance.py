"""Acceptance criteria 1-9, exact arithmetic, one summary line per criterion.

Run directly (``python tests/test_acceptance.py``) or under pytest; either way
each criterion prints ``criterion N: PASS`` or ``criterion N: FAIL`` with details.
"""

from __future__ import annotations

import io
import json
import sys
import time
from pathlib import Path

import pytest

from laurentkit.certificates import single_entry_mutations
from laurentkit.categories import MatCat
from laurentkit.chains import ChainComplex, ChainMap
from laurentkit.cli import main as cli_main
from laurentkit.config import Config
from laurentkit.corpus import certificate_corpus
from laurentkit.matrix import Matrix
from laurentkit.nil import HomotopyNilCertificate, homotopy_nilpotent_certify
from laurentkit.rings import PRESETS
from laurentkit.suites import run_suite
from laurentkit.wang import cmd_wang_k0

try:
    from conftest import record
except ImportError:  # direct execution without pytest on the path
    def record(line: str) -> None:
        print(line)

import oracles

BRUTE_NMAX = 4


def _suite_criterion(number: int, suite: str, rings: list[str], cases: int, budget: float, cfg: Config = Config()) -> None:
    start = time.perf_counter()
    problems = []
    runs = []
    for name in rings:
        rep = run_suite(suite, PRESETS[name](), cfg, cases)
        runs.append(f"{name}:{rep.cases_run}")
        if rep.skipped:
            problems.append(f"{name} skipped ({rep.skipped})")
        for f in rep.failures:
            problems.append(f"{name} {f.case_id}: {f.message}")
    elapsed = time.perf_counter() - start
    if elapsed >= budget:
        problems.append(f"runtime {elapsed:.1f} s over budget {budget:.0f} s")
    status = "PASS" if not problems else "FAIL"
    record(f"criterion {number}: {status}  {suite} [{', '.join(runs)}] in {elapsed:.1f} s" + (f"  first problem: {problems[0]}" if problems else ""))
    assert not problems, problems[:5]


def test_criterion_1_laurent_algebra():
    _suite_criterion(1, "laurent", ["gf2", "gf4-frob", "z"], 200, 5.0)


def test_criterion_2_cone_cylinder_facts():
    _suite_criterion(2, "lemma31", ["gf2", "gf4-frob", "z"], 100, 30.0)


def test_criterion_3_characteristic_sequences():
    cfg = Config(windows=(1, 2, 3, 8))
    _suite_criterion(3, "charseq", ["gf2", "gf4-frob", "z"], 100, 10.0, cfg)


def test_criterion_4_chi_contraction():
    _suite_criterion(4, "chi", ["gf2", "gf4", "gf4-frob"], 100, 10.0)


def test_criterion_5_strictification():
    _suite_criterion(5, "strictify", ["gf2", "gf4-frob"], 50, 60.0)


def test_criterion_6_gamma_model():
    _suite_criterion(6, "gamma", ["gf4"], 30, 30.0)


def _to_package(ring, C: oracles.BruteComplex, phi: dict):
    cat = MatCat(ring)
    mat = lambda m, r, c: Matrix.from_rows(ring, m, (r, c))
    r = C.ranks
    D = ChainComplex.make(cat, 0, list(r), {1: mat(C.d[1], r[0], r[1]), 2: mat(C.d[2], r[1], r[2])})
    f = ChainMap(D.phi(1), D, {n: mat(phi[n], r[n], r[n]) for n in range(3)})
    return D, f


def test_criterion_7_homotopy_nilpotence_oracle():
    ring = PRESETS["gf2"]()
    start = time.perf_counter()
    pairs = 0
    mismatches = []
    for C in oracles.all_complexes(max_rank=2):
        nulls = oracles.null_homotopic_maps(C)
        for phi in oracles.all_chain_endos(C):
            pairs += 1
            expected = oracles.brute_nil_degree(C, phi, nulls, BRUTE_NMAX)
            D, f = _to_package(ring, C, phi)
            res = homotopy_nilpotent_certify(D, f, n_max=BRUTE_NMAX)
            got = res.n if isinstance(res, HomotopyNilCertificate) else None
            if got != expected:
                mismatches.append((C.ranks, C.d, phi, expected, got))
    elapsed = time.perf_counter() - start
    problems = [f"{len(mismatches)} disagreements, first {mismatches[0]}"] if mismatches else []
    if elapsed >= 60.0:
        problems.append(f"runtime {elapsed:.1f} s over budget 60 s")
    status = "PASS" if not problems else "FAIL"
    record(f"criterion 7: {status}  {pairs} (C, phi) pairs over GF(2), degrees 0..2, ranks <= 2, n <= {BRUTE_NMAX} in {elapsed:.1f} s"
           + (f"  {problems[0]}" if problems else ""))
    assert pairs == 27407
    assert not problems, problems


def test_criterion_8_wang_tail():
    start = time.perf_counter()
    problems = []
    for name in ("gf2", "gf4-frob"):
        rep, tail = cmd_wang_k0(PRESETS[name](), 0)
        if not rep.ok or rep.skipped:
            problems.append(f"{name}: {[f.message for f in rep.failures]} {rep.skipped or ''}")
            continue
        if (tail.first, tail.second) != (0, 1) or not tail.exact_middle or not tail.surjective or tail.injectivity != "verified":
            problems.append(f"{name}: unexpected tail {tail.to_json()}")
    elapsed = time.perf_counter() - start
    if elapsed >= 5.0:
        problems.append(f"runtime {elapsed:.1f} s over budget 5 s")
    status = "PASS" if not problems else "FAIL"
    record(f"criterion 8: {status}  wang-k0 on gf2, gf4-frob: 0-map then rank isomorphism in {elapsed:.1f} s"
           + (f"  {problems[0]}" if problems else ""))
    assert not problems, problems


def _certify_file(path: Path) -> list[dict]:
    out = io.StringIO()
    cli_main(["certify", str(path)], stdout=out)
    return [json.loads(line) for line in out.getvalue().splitlines()]


def test_criterion_9_certificate_integrity(tmp_path):
    start = time.perf_counter()
    problems = []
    n_certs = n_mut = 0
    for name in ("gf2", "gf4-frob", "z", "gf3"):
        certs = list(certificate_corpus(PRESETS[name](), seed=0, rounds=2))
        n_certs += len(certs)
        good = tmp_path / f"{name}.json"
        good.write_text(json.dumps([c.to_json() for c in certs]))
        events = [e for e in _certify_file(good) if e["event"] == "certificate"]
        if len(events) != len(certs) or not all(e["ok"] for e in events):
            problems.append(f"{name}: emitted certificates failed re-verification")
        muts = [m for c in certs for _, m in single_entry_mutations(c, ("subject", "payload"))]
        n_mut += len(muts)
        bad = tmp_path / f"{name}-mutated.ndjson"
        bad.write_text("\n".join(json.dumps(m) for m in muts) + "\n")
        events = [e for e in _certify_file(bad) if e["event"] == "certificate"]
        accepted = sum(1 for e in events if e["ok"])
        if len(events) != len(muts) or accepted:
            problems.append(f"{name}: {accepted} of {len(muts)} mutations accepted")
    elapsed = time.perf_counter() - start
    status = "PASS" if not problems else "FAIL"
    record(f"criterion 9: {status}  {n_certs} certificates re-verified, {n_mut} single-entry mutations rejected in {elapsed:.1f} s"
           + (f"  {problems[0]}" if problems else ""))
    assert not problems, problems


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
