"""Command-line entry point.

Every command writes newline-delimited JSON events to stdout and a short
human summary to stderr.  Events carry no timings, so identical inputs give
byte-identical stdout.  Exit status is 0 on success and 1 on any failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, TextIO

from .certificates import (
    Certificate,
    contraction_certificate,
    gamma_certificate,
    homotopy_nilpotence_certificate,
    nilpotence_certificate,
    strictification_certificate,
    verify_certificate,
)
from .config import DEFAULT_WINDOWS, Config
from .errors import ConfigError, LaurentKitError
from .homology import homology_ranks
from .nil import (
    DEFAULT_NMAX,
    HomotopyNilCertificate,
    NilObject,
    Nilpotent,
    NotNilpotent,
    chi,
    homotopy_nilpotent_certify,
    nilpotency_degree,
)
from .projline import gamma_finite
from .rings import RingSpec, ring_from_json
from .serialize import Codec, dumps
from .strictify import strictify_object
from .suites import SUITES, Report, run_suite
from .wang import cmd_wang_k0

SUITE_CHOICES = tuple(SUITES) + ("all",)


class Emitter:
    """Writes NDJSON events to a stream."""

    def __init__(self, stream: TextIO):
        self.stream = stream

    def __call__(self, event: str, **fields: Any) -> None:
        self.stream.write(dumps({"event": event, **fields}) + "\n")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def parse_ring(text: str) -> RingSpec:
    """A preset name, an inline JSON ring spec, or a path to one."""
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc.msg}", f"--ring:{exc.lineno}:{exc.colno}") from exc
        return ring_from_json(data, "--ring")
    path = Path(text)
    if path.suffix == ".json" and path.exists():
        return ring_from_json(_load_json(path), str(path))
    return ring_from_json(text, "--ring")


def _load_json(path: Path) -> Any:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read file: {exc.strerror}", str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from exc


def _write_out(path: Optional[str], payload: Any) -> None:
    if path:
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _input(path: str) -> tuple[dict, RingSpec, Codec]:
    data = _load_json(Path(path))
    if not isinstance(data, dict):
        raise ConfigError("input must be a JSON object", path)
    if "ring" not in data:
        raise ConfigError("missing ring", path)
    ring = ring_from_json(data["ring"], f"{path}:ring")
    return data, ring, Codec(ring)


# ---------------------------------------------------------------- commands

def cmd_verify(args, emit: Emitter) -> int:
    ring = parse_ring(args.ring)
    if args.config:
        cfg = Config.from_json(_load_json(Path(args.config)), args.config)
    else:
        cfg = Config(args.seed, tuple(args.window) if args.window else DEFAULT_WINDOWS, args.nmax)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    emit("start", command="verify", suites=names, ring=ring.label(), seed=cfg.seed, cases=args.cases)
    reports: list[Report] = []
    for name in names:
        rep = run_suite(name, ring, cfg, args.cases)
        reports.append(rep)
        for f in rep.failures:
            emit("failure", suite=name, **f.to_json())
        emit("report", **rep.to_json())
        status = "skipped: " + rep.skipped if rep.skipped else f"{len(rep.failures)} failures"
        _say(f"{name:10s} {ring.label():14s} {rep.cases_run:5d} cases  {status}  ({rep.wall_time:.2f} s)")
    ok = all(r.ok for r in reports)
    emit("done", ok=ok)
    _write_out(args.out, [r.to_json() for r in reports])
    return 0 if ok else 1


def cmd_wang(args, emit: Emitter) -> int:
    ring = parse_ring(args.ring)
    report, tail = cmd_wang_k0(ring, args.seed)
    emit("start", command="wang-k0", ring=ring.label())
    if tail is not None:
        emit(
            "sequence",
            maps=[{"name": "K0(Phi) - id", "matrix": [[tail.first]]}, {"name": "K0(i0)", "matrix": [[tail.second]]}],
            **tail.to_json(),
        )
    emit("report", **report.to_json())
    emit("done", ok=report.ok)
    _write_out(args.out, report.to_json())
    verdict = "exact" if report.ok else "NOT exact"
    extra = f" ({report.skipped})" if report.skipped else ""
    _say(f"wang-k0 on {ring.label()}: {verdict}{extra}")
    return 0 if report.ok else 1


def load_certificates(path: str) -> list:
    """Certificates from a JSON list, an object with a ``certificates`` list, or NDJSON."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read file: {exc.strerror}", path) from exc
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                data.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON: {exc.msg}", f"{path}:{lineno}:{exc.colno}") from exc
    if isinstance(data, dict):
        data = data.get("certificates", [data])
    if not isinstance(data, list):
        raise ConfigError("expected a list of certificates", path)
    return data


def cmd_certify(args, emit: Emitter) -> int:
    certs = load_certificates(args.file)
    emit("start", command="certify", file=args.file, count=len(certs))
    if not certs:
        emit("warning", message="no certificates in file; nothing to verify")
        _say(f"warning: {args.file} contains no certificates (trivially verified)")
        emit("done", ok=True)
        return 0
    first_failure = None
    for idx, data in enumerate(certs):
        res = verify_certificate(data)
        emit("certificate", index=idx, **res.to_json())
        if not res.ok and first_failure is None:
            first_failure = (idx, res)
    ok = first_failure is None
    emit("done", ok=ok)
    if ok:
        _say(f"{len(certs)} certificates verified")
        return 0
    idx, res = first_failure
    where = f" at {res.location}" if res.location is not None else ""
    _say(f"certificate {idx} ({res.kind}) rejected{where}: {res.message}")
    return 1


def cmd_gamma(args, emit: Emitter) -> int:
    data, ring, codec = _input(args.file)
    C = codec.parse_complex(data.get("complex"), f"{args.file}:complex")
    model = gamma_finite(C, args.window)
    model.verify()
    G = model.G
    out = {"N": model.N, "ranks": {str(n): r for n, r in G.ranks().items()}}
    if ring.is_field:
        out["homology"] = {str(n): r for n, r in homology_ranks(G).items() if r}
    emit("gamma", **out)
    cert = gamma_certificate(C, model)
    emit("certificate", kind=cert.kind, digest=cert.digest)
    _write_out(args.out, [cert.to_json()])
    _say(f"gamma model with window N = {model.N}: ranks {dict(G.ranks())}")
    return 0


def cmd_strictify(args, emit: Emitter) -> int:
    data, ring, codec = _input(args.file)
    D = codec.parse_complex(data.get("complex"), f"{args.file}:complex")
    psi = codec.parse_chain_map(data.get("psi"), D.phi(1), D, f"{args.file}:psi")
    s = strictify_object(D, psi, n_max=args.nmax)
    s.verify()
    emit("strictify", n_mu=s.n_mu, m=s.m, n=s.n, ranks_E={str(k): r for k, r in s.E.ranks().items()}, checks=len(s.checks))
    cert = strictification_certificate(s)
    emit("certificate", kind=cert.kind, digest=cert.digest)
    _write_out(args.out, [cert.to_json()])
    _say(f"strictified: mu^({s.n_mu}) = 0, {len(s.checks)} identities checked")
    return 0


def cmd_nil_degree(args, emit: Emitter) -> int:
    data, ring, codec = _input(args.file)
    certs: list[Certificate] = []
    if "complex" in data:
        C = codec.parse_complex(data["complex"], f"{args.file}:complex")
        phi = codec.parse_chain_map(data.get("phi"), C.phi(1), C, f"{args.file}:phi")
        res = homotopy_nilpotent_certify(C, phi, args.nmax)
        if isinstance(res, HomotopyNilCertificate):
            emit("nil-degree", mode="homotopy", result="nilpotent", n=res.n)
            certs.append(homotopy_nilpotence_certificate(C, phi, res))
            _say(f"homotopy nilpotent: phi^({res.n}) is null-homotopic")
        else:
            emit("nil-degree", mode="homotopy", result="not-nilpotent", n_max=res.n_max)
            _say(f"no iterate up to {res.n_max} is null-homotopic")
    else:
        A, phi, _ = codec.parse_nil_object(data, args.file)
        res = nilpotency_degree(codec.base, A, phi, args.nmax)
        if isinstance(res, Nilpotent):
            emit("nil-degree", mode="strict", result="nilpotent", n=res.n)
            certs.append(nilpotence_certificate(ring, A, phi, res.n))
            certs.append(contraction_certificate(chi(NilObject(codec.base, A, phi, res.n)).contraction))
            _say(f"nilpotent of degree {res.n}")
        elif isinstance(res, NotNilpotent):
            emit("nil-degree", mode="strict", result="not-nilpotent", bound=res.bound)
            _say(f"not nilpotent: phi^({res.bound}) is nonzero")
        else:
            emit("nil-degree", mode="strict", result="undecided", n_max=res.n_max)
            _say(f"undecided up to {res.n_max}")
    for c in certs:
        emit("certificate", kind=c.kind, digest=c.digest)
    _write_out(args.out, [c.to_json() for c in certs])
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="laurentkit", description="Exact constructions over twisted Laurent categories.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ring=True):
        if ring:
            sp.add_argument("--ring", default="gf2", help="preset (gf2, gf4-frob, z, ...), inline JSON or a .json file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write the result document to this file")

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("suite", choices=SUITE_CHOICES)
    common(v)
    v.add_argument("--cases", type=int, default=None, help="random cases per suite (default: suite-specific)")
    v.add_argument("--window", type=int, action="append", help="window width for charseq (repeatable)")
    v.add_argument("--nmax", type=int, default=DEFAULT_NMAX)
    v.add_argument("--config", help="JSON run configuration {seed, windows, nmax}; replaces --seed/--window/--nmax")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("wang-k0", help="check the degree-0 Wang tail")
    common(w)
    w.set_defaults(func=cmd_wang)

    c = sub.add_parser("certify", help="re-verify certificates from a file")
    c.add_argument("file")
    c.set_defaults(func=cmd_certify)

    g = sub.add_parser("gamma", help="finite global-section model of a complex over X")
    g.add_argument("file")
    g.add_argument("--window", type=int, default=None, help="window size N (default: from exponents)")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gamma)

    s = sub.add_parser("strictify", help="strictly nilpotent replacement of (D, psi)")
    s.add_argument("file")
    s.add_argument("--nmax", type=int, default=DEFAULT_NMAX)
    s.add_argument("--out")
    s.set_defaults(func=cmd_strictify)

    n = sub.add_parser("nil-degree", help="nilpotency degree of (A, phi) or homotopy nilpotence of (C, phi)")
    n.add_argument("file")
    n.add_argument("--nmax", type=int, default=DEFAULT_NMAX)
    n.add_argument("--out")
    n.set_defaults(func=cmd_nil_degree)
    return p


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    emit = Emitter(stdout or sys.stdout)
    try:
        return args.func(args, emit)
    except ConfigError as exc:
        emit("error", kind="config", message=exc.message, location=exc.location)
        _say(f"config error at {exc.location}: {exc.message}" if exc.location else f"config error: {exc.message}")
        return 1
    except LaurentKitError as exc:
        emit("error", kind=type(exc).__name__, message=str(exc), location=getattr(exc, "location", None))
        _say(f"{type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
