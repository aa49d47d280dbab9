"""Emitted documents conform to the JSON schemas under docs/schemas."""

from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

jsonschema = pytest.importorskip("jsonschema")
referencing = pytest.importorskip("referencing")

from laurentkit import PRESETS
from laurentkit.cli import main
from laurentkit.corpus import certificate_corpus

ROOT = Path(__file__).resolve().parents[1]
SCHEMAS = ROOT / "docs" / "schemas"
EXAMPLES = ROOT / "docs" / "examples"


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.json"):
        doc = json.loads(path.read_text())
        resources.append((path.name, referencing.Resource.from_contents(doc)))
    return referencing.Registry().with_resources(resources)


REGISTRY = _registry()


def validate(instance, name: str, ref: str = "") -> None:
    schema = {"$ref": f"{name}{ref}"}
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(instance)


def _events(argv) -> list:
    out = io.StringIO()
    main(argv, stdout=out)
    return [json.loads(line) for line in out.getvalue().splitlines()]


def test_schemas_are_valid():
    for path in SCHEMAS.glob("*.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_preset_rings_serialize_to_schema(name):
    from laurentkit.rings import ring_to_json

    validate(name, "ring.schema.json")
    validate(ring_to_json(PRESETS[name]()), "ring.schema.json")


@pytest.mark.parametrize("ring", ["gf2", "gf4-frob", "z"])
def test_corpus_certificates_match_schema(ring):
    for cert in certificate_corpus(PRESETS[ring](), seed=3, rounds=1):
        validate(cert.to_json(), "certificate.schema.json")


@pytest.mark.parametrize(
    "file,definition",
    [
        ("gamma_line.json", "gamma"),
        ("strictify_identity.json", "strictify"),
        ("nil_object.json", "nil_object"),
        ("nil_chain.json", "nil_chain"),
    ],
)
def test_examples_match_input_schema(file, definition):
    validate(json.loads((EXAMPLES / file).read_text()), "cli_inputs.schema.json", f"#/$defs/{definition}")


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "laurent", "--ring", "gf2", "--cases", "5"],
        ["wang-k0", "--ring", "gf4-frob"],
        ["gamma", str(EXAMPLES / "gamma_line.json")],
        ["nil-degree", str(EXAMPLES / "nil_object.json")],
        ["nil-degree", str(EXAMPLES / "nil_chain.json")],
        ["strictify", str(EXAMPLES / "strictify_identity.json")],
        ["verify", "laurent", "--ring", "no-such-ring"],
    ],
)
def test_cli_events_match_schema(argv):
    events = _events(argv)
    assert events
    for ev in events:
        validate(ev, "events.schema.json")


def test_config_schema_accepts_defaults():
    validate({"seed": 7, "windows": [1, 2, 3, 8], "nmax": 64}, "config.schema.json")
    with pytest.raises(jsonschema.ValidationError):
        validate({"seed": 7, "windows": [0]}, "config.schema.json")
