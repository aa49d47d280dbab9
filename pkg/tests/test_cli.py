"""Command line: output format, determinism and error reporting."""

from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from laurentkit.certificates import contraction_certificate
from laurentkit.categories import MatCat
from laurentkit.chains import el
from laurentkit.cli import main
from laurentkit.homology import contraction_search
from laurentkit.rings import PRESETS

EXAMPLES = Path(__file__).resolve().parents[1] / "docs" / "examples"


def run(argv) -> tuple[int, list]:
    out = io.StringIO()
    rc = main(argv, stdout=out)
    return rc, [json.loads(line) for line in out.getvalue().splitlines()]


def raw(argv) -> tuple[int, str]:
    out = io.StringIO()
    rc = main(argv, stdout=out)
    return rc, out.getvalue()


def test_verify_is_byte_identical_for_a_seed():
    argv = ["verify", "chi", "--ring", "gf4-frob", "--seed", "9", "--cases", "10"]
    rc1, a = raw(argv)
    rc2, b = raw(argv)
    assert rc1 == rc2 == 0
    assert a == b
    assert "wall_time" not in a


def test_verify_seed_changes_nothing_structural():
    rc, events = run(["verify", "laurent", "--ring", "gf2", "--seed", "3", "--cases", "7"])
    assert rc == 0
    assert [e["event"] for e in events] == ["start", "report", "done"]
    report = events[1]
    assert report["cases_run"] == 8  # degenerate case plus seven random ones
    assert report["failures"] == []


def test_verify_all_skips_field_only_suites_over_z():
    rc, events = run(["verify", "all", "--ring", "z", "--cases", "2"])
    assert rc == 0
    reports = {e["suite"]: e for e in events if e["event"] == "report"}
    assert reports["strictify"]["skipped"]
    assert not reports["laurent"].get("skipped")


def test_verify_writes_out_file(tmp_path):
    out = tmp_path / "reports.json"
    rc, _ = run(["verify", "charseq", "--ring", "gf2", "--cases", "3", "--window", "2", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data[0]["suite"] == "charseq" and data[0]["failures"] == []


def test_verify_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 4, "windows": [1, 3], "nmax": 16}))
    rc, events = run(["verify", "charseq", "--ring", "gf2", "--cases", "3", "--config", str(cfg)])
    assert rc == 0 and events[0]["seed"] == 4
    cfg.write_text(json.dumps({"windows": [1, 0]}))
    rc, events = run(["verify", "charseq", "--ring", "gf2", "--config", str(cfg)])
    assert rc == 1
    assert events[-1]["event"] == "error" and events[-1]["location"] == f"{cfg}.windows[1]"
    assert f"{cfg}.windows[1]" in capsys.readouterr().err


def test_bad_ring_reports_location(capsys):
    rc, events = run(["verify", "laurent", "--ring", "gf6"])
    assert rc == 1
    assert events[-1]["kind"] == "config" and events[-1]["location"] == "--ring"
    assert "config error at --ring" in capsys.readouterr().err


def test_ring_from_inline_json():
    rc, events = run(["verify", "laurent", "--ring", '{"kind": "gf", "p": 2, "k": 3, "aut": {"frobenius": 1}}', "--cases", "3"])
    assert rc == 0
    assert events[0]["ring"] == PRESETS["gf8-frob"]().label()


def test_malformed_input_reports_line_and_column(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ring": "gf2",\n  "A": 2,, }')
    rc, _ = run(["nil-degree", str(bad)])
    assert rc == 1
    assert f"{bad}:2:" in capsys.readouterr().err


def test_wang_k0_emits_the_sequence():
    rc, events = run(["wang-k0", "--ring", "gf4-frob"])
    assert rc == 0
    seq = next(e for e in events if e["event"] == "sequence")
    assert [m["matrix"] for m in seq["maps"]] == [[[0]], [[1]]]
    assert seq["injectivity"] == "verified"


def test_wang_k0_over_z_notes_unsupported_injectivity():
    rc, events = run(["wang-k0", "--ring", "z"])
    assert rc == 0
    seq = next(e for e in events if e["event"] == "sequence")
    assert seq["injectivity"] == "unsupported"


def _contraction_file(tmp_path, tamper: bool) -> Path:
    cert = contraction_certificate(contraction_search(el(MatCat(PRESETS["gf2"]()), 1, 2))).to_json()
    if tamper:
        cert["payload"]["gamma"]["2"] = [[0]]
    path = tmp_path / "certs.json"
    path.write_text(json.dumps([cert]))
    return path


def test_certify_accepts_valid_file(tmp_path):
    rc, events = run(["certify", str(_contraction_file(tmp_path, False))])
    assert rc == 0
    assert events[1]["event"] == "certificate" and events[1]["ok"]


def test_certify_rejects_tampered_file_with_degree(tmp_path, capsys):
    rc, events = run(["certify", str(_contraction_file(tmp_path, True))])
    assert rc == 1
    assert not events[1]["ok"]
    assert "at degree 2" in capsys.readouterr().err


def test_certify_reads_ndjson(tmp_path):
    src = _contraction_file(tmp_path, False)
    cert = json.loads(src.read_text())[0]
    nd = tmp_path / "certs.ndjson"
    nd.write_text(json.dumps(cert) + "\n\n" + json.dumps(cert) + "\n")
    rc, events = run(["certify", str(nd)])
    assert rc == 0 and events[0]["count"] == 2


def test_certify_empty_file_warns(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    rc, events = run(["certify", str(empty)])
    assert rc == 0
    assert any(e["event"] == "warning" for e in events)
    assert "warning" in capsys.readouterr().err


def test_certify_missing_file(tmp_path):
    rc, events = run(["certify", str(tmp_path / "absent.json")])
    assert rc == 1 and events[-1]["kind"] == "config"


def test_gamma_example(tmp_path):
    out = tmp_path / "gamma.json"
    rc, events = run(["gamma", str(EXAMPLES / "gamma_line.json"), "--out", str(out)])
    assert rc == 0
    g = next(e for e in events if e["event"] == "gamma")
    assert g["homology"] == {"-1": 2}
    rc, _ = run(["certify", str(out)])
    assert rc == 0


def test_nil_degree_examples():
    rc, events = run(["nil-degree", str(EXAMPLES / "nil_object.json")])
    assert rc == 0
    assert events[0] == {"event": "nil-degree", "mode": "strict", "result": "nilpotent", "n": 2}
    rc, events = run(["nil-degree", str(EXAMPLES / "nil_chain.json")])
    assert rc == 0 and events[0]["mode"] == "homotopy" and events[0]["result"] == "nilpotent"


def test_nil_degree_not_nilpotent(tmp_path):
    path = tmp_path / "id.json"
    path.write_text(json.dumps({"ring": "gf2", "A": 1, "phi": [[1]]}))
    rc, events = run(["nil-degree", str(path), "--nmax", "5"])
    assert rc == 0
    assert events[0]["result"] == "not-nilpotent"


def test_strictify_example(tmp_path):
    out = tmp_path / "s.json"
    rc, events = run(["strictify", str(EXAMPLES / "strictify_identity.json"), "--out", str(out)])
    assert rc == 0
    assert events[0]["event"] == "strictify"
    rc, _ = run(["certify", str(out)])
    assert rc == 0


def test_unknown_suite_is_an_argparse_error():
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])
