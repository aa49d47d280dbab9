"""Self-contained, independently re-checkable certificates.

A certificate is ``(kind, subject, payload)`` in JSON together with a
content digest.  Verification decodes both parts, re-checks every identity
the payload claims (reporting the first failing degree) and finally compares
the digest.  The digest matters because some identities admit many
witnesses: a contraction of ``el(X, n+1) + el(X, n-1)`` may carry any map in
degree ``n``, so an altered entry can still be a valid contraction.
"""

from __future__ import annotations

import copy
import hashlib
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional

from .categories import MatCat
from .chains import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    Contraction,
    SplitSES,
    _span,
    compose_maps,
    cone,
    identity_map,
    zero_map,
)
from .errors import BadCertificate, ConfigError, IdentityViolated, LaurentKitError
from .homology import contraction_search
from .laurent import Window
from .nil import HomotopyNilCertificate, chain_iterate, twisted_iterate
from .projline import GammaModel, XCat, _total, gamma_from_splitting
from .rings import RingSpec, ring_from_json, ring_to_json
from .serialize import Codec, dumps

KINDS = ("contraction", "homotopy", "iso", "ses-splitting", "nilpotence", "strictification", "gamma-model")


@dataclass
class Certificate:
    kind: str
    ring: RingSpec
    subject: dict
    payload: dict
    verified: bool = False
    digest: str = ""

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "ring": ring_to_json(self.ring),
            "subject": self.subject,
            "payload": self.payload,
            "verified": self.verified,
            "digest": self.digest,
        }

    @staticmethod
    def from_json(data: Any, where: str = "certificate") -> "Certificate":
        if not isinstance(data, dict):
            raise ConfigError("certificate must be an object", where)
        for key in ("kind", "ring", "subject", "payload"):
            if key not in data:
                raise ConfigError(f"missing {key}", where)
        if data["kind"] not in KINDS:
            raise ConfigError(f"unknown kind {data['kind']!r}", f"{where}.kind")
        ring = ring_from_json(data["ring"], f"{where}.ring")
        return Certificate(data["kind"], ring, data["subject"], data["payload"], bool(data.get("verified", False)), str(data.get("digest", "")))


def content_digest(kind: str, ring: RingSpec, subject: dict, payload: dict) -> str:
    text = dumps({"kind": kind, "ring": ring_to_json(ring), "subject": subject, "payload": payload})
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    kind: str
    identities_ok: bool
    digest_ok: bool
    message: str = ""
    location: Optional[str] = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "kind": self.kind, "identities_ok": self.identities_ok, "digest_ok": self.digest_ok, "message": self.message, "location": self.location}


# ---------------------------------------------------------------- emission

def _seal(kind: str, ring: RingSpec, subject: dict, payload: dict) -> Certificate:
    cert = Certificate(kind, ring, subject, payload, False, content_digest(kind, ring, subject, payload))
    res = verify_certificate(cert)
    if not res.ok:
        raise BadCertificate(f"emitted {kind} certificate failed re-verification: {res.message}")
    cert.verified = True
    return cert


def _ring_of(C: ChainComplex) -> RingSpec:
    return C.cat.ring


def contraction_certificate(gamma: Contraction) -> Certificate:
    C = gamma.C
    k = Codec(_ring_of(C))
    return _seal("contraction", _ring_of(C), {"complex": k.complex(C)}, {"gamma": k.contraction(gamma)["comps"]})


def homotopy_certificate(h: ChainHomotopy) -> Certificate:
    k = Codec(_ring_of(h.src))
    subject = {"src": k.complex(h.src), "tgt": k.complex(h.tgt), "f": k.chain_map(h.f)["comps"], "g": k.chain_map(h.g)["comps"]}
    return _seal("homotopy", _ring_of(h.src), subject, {"h": k.homotopy(h)["comps"]})


def iso_certificate(f: ChainMap, inverse: ChainMap) -> Certificate:
    k = Codec(_ring_of(f.src))
    subject = {"src": k.complex(f.src), "tgt": k.complex(f.tgt), "f": k.chain_map(f)["comps"]}
    return _seal("iso", _ring_of(f.src), subject, {"inverse": k.chain_map(inverse)["comps"]})


def ses_certificate(ses: SplitSES) -> Certificate:
    k = Codec(_ring_of(ses.C))
    cat = ses.cat
    subject = {
        "C": k.complex(ses.C),
        "D": k.complex(ses.D),
        "E": k.complex(ses.E),
        "i": k.chain_map(ses.i)["comps"],
        "p": k.chain_map(ses.p)["comps"],
    }
    payload = {"r": k.graded_maps(ses.r, cat), "t": k.graded_maps(ses.t, cat)}
    return _seal("ses-splitting", _ring_of(ses.C), subject, payload)


def nilpotence_certificate(ring: RingSpec, A: int, phi, n: int) -> Certificate:
    """Strict nilpotence of ``phi: Phi(A) -> A`` with exact degree ``n``."""
    k = Codec(ring)
    return _seal("nilpotence", ring, {"mode": "strict", "A": A, "phi": k.matrix(phi)}, {"n": n})


def homotopy_nilpotence_certificate(C: ChainComplex, phi: ChainMap, cert: HomotopyNilCertificate) -> Certificate:
    k = Codec(_ring_of(C))
    subject = {"mode": "homotopy", "complex": k.complex(C), "phi": k.chain_map(phi)["comps"]}
    return _seal("nilpotence", _ring_of(C), subject, {"n": cert.n, "K": k.homotopy(cert.K)["comps"]})


def strictification_certificate(s) -> Certificate:
    """Output ``(E, mu)`` with the zigzag ``D -> F <- E`` and contractions of both cones."""

    ring = _ring_of(s.D)
    k = Codec(ring)
    gd = contraction_search(cone(s.d_leg).complex)
    ge = contraction_search(cone(s.e_leg).complex)
    if not isinstance(gd, Contraction) or not isinstance(ge, Contraction):
        raise BadCertificate("strictification legs are not equivalences")
    subject = {
        "C": k.complex(s.C),
        "phi": k.chain_map(s.phi)["comps"],
        "D": k.complex(s.D),
        "psi": k.chain_map(s.psi)["comps"],
        "u": k.chain_map(s.u)["comps"],
    }
    payload = {
        "E": k.complex(s.E),
        "mu": k.chain_map(s.mu)["comps"],
        "n": s.n_mu,
        "j": k.chain_map(s.j)["comps"],
        "F": k.complex(s.F),
        "sigma": k.chain_map(s.sigma)["comps"],
        "d_leg": k.chain_map(s.d_leg)["comps"],
        "e_leg": k.chain_map(s.e_leg)["comps"],
        "cone_d": k.contraction(gd)["comps"],
        "cone_e": k.contraction(ge)["comps"],
    }
    return _seal("strictification", ring, subject, payload)


def gamma_certificate(C: ChainComplex, model: GammaModel) -> Certificate:
    ring = C.cat.ring
    k = Codec(ring)
    inner = C.cat.inner
    payload = {
        "N": model.N,
        "rho": k.graded_maps(model.rho, inner),
        "sigma": k.graded_maps(model.sigma, inner),
        "G": k.complex(model.G),
    }
    return _seal("gamma-model", ring, {"complex": k.complex(C)}, payload)


# ---------------------------------------------------------------- verification

def _maps(k: Codec, data, src: ChainComplex, tgt: ChainComplex, where: str) -> ChainMap:
    f = k.parse_chain_map({"comps": data}, src, tgt, where)
    f.verify()
    return f


def _check_equal(f: ChainMap, g: ChainMap, name: str) -> None:

    for n in _span(f.src, f.tgt, g.src, g.tgt):
        if f.at(n) != g.at(n):
            raise IdentityViolated(name, n)


def _v_contraction(k: Codec, s: dict, p: dict) -> None:
    C = k.parse_complex(s["complex"], "subject.complex")
    gamma = k.parse_contraction({"comps": p["gamma"]}, C, "payload.gamma")
    gamma.verify()


def _v_homotopy(k: Codec, s: dict, p: dict) -> None:
    C = k.parse_complex(s["src"], "subject.src")
    D = k.parse_complex(s["tgt"], "subject.tgt")
    f = _maps(k, s["f"], C, D, "subject.f")
    g = _maps(k, s["g"], C, D, "subject.g")
    k.parse_homotopy({"comps": p["h"]}, f, g, "payload.h").verify()


def _v_iso(k: Codec, s: dict, p: dict) -> None:
    C = k.parse_complex(s["src"], "subject.src")
    D = k.parse_complex(s["tgt"], "subject.tgt")
    f = _maps(k, s["f"], C, D, "subject.f")
    g = _maps(k, p["inverse"], D, C, "payload.inverse")
    _check_equal(compose_maps(f, g), identity_map(D), "f o g = id")
    _check_equal(compose_maps(g, f), identity_map(C), "g o f = id")


def _v_ses(k: Codec, s: dict, p: dict) -> None:
    C = k.parse_complex(s["C"], "subject.C")
    D = k.parse_complex(s["D"], "subject.D")
    E = k.parse_complex(s["E"], "subject.E")
    i = _maps(k, s["i"], C, D, "subject.i")
    q = _maps(k, s["p"], D, E, "subject.p")
    r = k.parse_graded_maps(p["r"], C.cat, D.obj, C.obj, "payload.r")
    t = k.parse_graded_maps(p["t"], C.cat, E.obj, D.obj, "payload.t")
    SplitSES(i, q, r, t).verify()


def _v_nilpotence(k: Codec, s: dict, p: dict) -> None:
    n = p.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise BadCertificate("n must be a positive integer")
    if s.get("mode") == "strict":
        A = s["A"]
        phi = k.parse_matrix(s["phi"], A, A, "subject.phi")
        cat = k.base
        if not cat.is_zero(twisted_iterate(cat, phi, n, A)):
            raise BadCertificate(f"phi^({n}) is not zero")
        if n > 1 and cat.is_zero(twisted_iterate(cat, phi, n - 1, A)):
            raise BadCertificate(f"phi^({n - 1}) already vanishes; n is not the exact degree")
        return
    if s.get("mode") == "homotopy":
        C = k.parse_complex(s["complex"], "subject.complex")
        phi = _maps(k, s["phi"], C.phi(1), C, "subject.phi")
        it = chain_iterate(phi, n)
        f = ChainMap(C.phi(n), C, it.comps)
        K = k.parse_homotopy({"comps": p["K"]}, zero_map(C.phi(n), C), f, "payload.K")
        K.verify()
        return
    raise ConfigError("mode must be strict or homotopy", "subject.mode")


def _v_strictification(k: Codec, s: dict, p: dict) -> None:
    C = k.parse_complex(s["C"], "subject.C")
    D = k.parse_complex(s["D"], "subject.D")
    phi = _maps(k, s["phi"], C.phi(1), C, "subject.phi")
    psi = _maps(k, s["psi"], D.phi(1), D, "subject.psi")
    u = _maps(k, s["u"], C, D, "subject.u")
    _check_equal(compose_maps(u, phi), compose_maps(psi, u.phi(1)), "u commutes with the endomorphisms")
    E = k.parse_complex(p["E"], "payload.E")
    F = k.parse_complex(p["F"], "payload.F")
    mu = _maps(k, p["mu"], E.phi(1), E, "payload.mu")
    j = _maps(k, p["j"], C, E, "payload.j")
    sigma = _maps(k, p["sigma"], F.phi(1), F, "payload.sigma")
    dl = _maps(k, p["d_leg"], D, F, "payload.d_leg")
    el_ = _maps(k, p["e_leg"], E, F, "payload.e_leg")
    n = p.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise BadCertificate("n must be a positive integer")
    if not chain_iterate(mu, n).is_zero():
        raise BadCertificate(f"mu^({n}) is not zero")
    _check_equal(compose_maps(mu, j.phi(1)), compose_maps(j, phi), "j commutes with the endomorphisms")
    _check_equal(compose_maps(sigma, dl.phi(1)), compose_maps(dl, psi), "D -> F commutes with the endomorphisms")
    _check_equal(compose_maps(sigma, el_.phi(1)), compose_maps(el_, mu), "E -> F commutes with the endomorphisms")
    _check_equal(compose_maps(dl, u), compose_maps(el_, j), "square commutes")
    for leg, key in ((dl, "cone_d"), (el_, "cone_e")):
        K = cone(leg).complex
        k.parse_contraction({"comps": p[key]}, K, f"payload.{key}").verify()


def _v_gamma(k: Codec, s: dict, p: dict) -> None:
    C = k.parse_complex(s["complex"], "subject.complex")
    if not isinstance(C.cat, XCat):
        raise ConfigError("subject must be a complex over X", "subject.complex")
    N = p.get("N")
    if isinstance(N, bool) or not isinstance(N, int):
        raise BadCertificate("N must be an integer")

    inner = k.base
    win = lambda n: _total(C.obj(n).Aminus, Window(1, 2 * N - 1))
    rho_raw, sigma_raw = p["rho"], p["sigma"]
    rho, sigma = {}, {}
    for n in C.degrees():
        key = str(n)
        if key not in rho_raw or key not in sigma_raw:
            raise BadCertificate(f"missing splitting in degree {n}")
        r_rows = len(rho_raw[key])
        rho[n] = k.parse_matrix(rho_raw[key], r_rows, win(n), f"payload.rho.{key}")
        sigma[n] = k.parse_matrix(sigma_raw[key], win(n), r_rows, f"payload.sigma.{key}")
    model = gamma_from_splitting(C, N, rho, sigma)
    G = k.parse_complex(p["G"], "payload.G")
    if not model.G.same_as(G):
        raise BadCertificate("payload G differs from the model rebuilt from the splitting")


_VERIFIERS: dict[str, Callable[[Codec, dict, dict], None]] = {
    "contraction": _v_contraction,
    "homotopy": _v_homotopy,
    "iso": _v_iso,
    "ses-splitting": _v_ses,
    "nilpotence": _v_nilpotence,
    "strictification": _v_strictification,
    "gamma-model": _v_gamma,
}

_DEGREE = re.compile(r"degree (-?\d+)")


def _location(exc: Exception) -> Optional[str]:
    loc = getattr(exc, "location", None)
    if loc not in (None, ""):
        return f"degree {loc}" if isinstance(loc, int) else str(loc)
    m = _DEGREE.search(str(exc))
    return f"degree {m.group(1)}" if m else None


def verify_certificate(cert: Certificate | dict) -> VerifyResult:
    """Re-check a certificate from its JSON content alone."""
    if isinstance(cert, dict):
        try:
            cert = Certificate.from_json(cert)
        except LaurentKitError as exc:
            return VerifyResult(False, str(cert.get("kind", "?")), False, False, str(exc), _location(exc))
    k = Codec(cert.ring)
    try:
        _VERIFIERS[cert.kind](k, cert.subject, cert.payload)
        ident_ok, msg, loc = True, "", None
    except (LaurentKitError, KeyError, TypeError, ValueError, IndexError) as exc:
        ident_ok, msg, loc = False, f"{type(exc).__name__}: {exc}", _location(exc)
    digest_ok = cert.digest == content_digest(cert.kind, cert.ring, cert.subject, cert.payload)
    if ident_ok and not digest_ok:
        msg = "content digest does not match the certified data"
    return VerifyResult(ident_ok and digest_ok, cert.kind, ident_ok, digest_ok, msg, loc)


# ---------------------------------------------------------------- mutations

def _mutate_leaf(v, p: Optional[int]):
    if isinstance(v, bool):
        return not v
    if isinstance(v, int):
        return v + 1 if p is None else (v + 1) % p if v < p else v + 1
    if isinstance(v, str):
        return v + "+1"
    raise TypeError(type(v))


def _leaves(obj, path=()) -> Iterator[tuple]:
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _leaves(obj[key], path + (key,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _leaves(v, path + (i,))
    elif isinstance(obj, (int, str)) and not isinstance(obj, bool):
        yield path, obj


def _set(obj, path, value):
    out = copy.deepcopy(obj)
    cur = out
    for key in path[:-1]:
        cur = cur[key]
    cur[path[-1]] = value
    return out


def single_entry_mutations(cert: Certificate, parts: tuple = ("payload",)) -> Iterator[tuple[str, dict]]:
    """Every certificate differing from ``cert`` in exactly one scalar entry of the given parts."""
    base = cert.to_json()
    ring = cert.ring
    p = ring.p if ring.kind == "gf" else (ring.n if ring.kind == "zmod" else None)
    for part in parts:
        for path, v in _leaves(base[part], (part,)):
            yield "/".join(str(x) for x in path), _set(base, path, _mutate_leaf(v, p))
