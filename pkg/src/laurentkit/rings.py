"""Base rings, their automorphisms, and vectorized arithmetic backends.

Elements are canonical Python/numpy integers:

* integers: the integer itself (numpy ``object`` arrays keep exactness),
* Z/n: the residue in ``[0, n)``,
* GF(p^k): ``sum(c_i * p**i)`` where ``c_i`` are the coefficients of the
  residue polynomial in the generator ``w`` (lowest degree first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, LaurentKitError

MAX_FIELD_SIZE = 64


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(math.isqrt(n)) + 1))


# -- polynomial helpers over GF(p), coefficient tuples lowest degree first --

def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim([x % p for x in a])
    m = _poly_trim([x % p for x in m])
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mc) % p
        _poly_trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _poly_trim([x % p for x in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k in lexicographic order of coefficients."""
    if k == 1:
        return (0, 1)
    for tail in product(range(p), repeat=k):
        cand = list(tail) + [1]
        if cand[0] and is_irreducible(cand, p):
            return tuple(cand)
    raise LaurentKitError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class RingSpec:
    """Immutable description of a base ring with an automorphism.

    ``aut`` is ``("identity",)``, ``("frobenius", e)`` or ``("image", code)``
    where ``code`` encodes the image of the generator.  ``order`` is the
    order of the automorphism, ``None`` meaning infinite.
    """

    kind: str
    n: int = 0
    p: int = 0
    k: int = 1
    modulus: tuple[int, ...] = ()
    aut: tuple = ("identity",)
    order: Optional[int] = 1

    # ---- constructors ----
    @staticmethod
    def integers(infinite_order: bool = False) -> "RingSpec":
        return RingSpec(kind="int", order=None if infinite_order else 1)

    @staticmethod
    def zmod(n: int) -> "RingSpec":
        if n < 2:
            raise ConfigError("modulus must be >= 2", "n")
        return RingSpec(kind="zmod", n=n)

    @staticmethod
    def gf(
        p: int,
        k: int = 1,
        modulus: Optional[Sequence[int]] = None,
        frobenius: Optional[int] = None,
        image: Optional[int] = None,
    ) -> "RingSpec":
        if not _is_prime(p):
            raise ConfigError(f"{p} is not prime", "p")
        if k < 1 or p**k > MAX_FIELD_SIZE:
            raise ConfigError(f"GF({p}^{k}) outside supported range", "k")
        mod = tuple(modulus) if modulus is not None else default_modulus(p, k)
        mod = tuple(x % p for x in mod)
        if len(_poly_trim(list(mod))) != k + 1 or mod[-1] != 1:
            raise ConfigError("modulus must be monic of degree k (lowest coefficient first)", "modulus")
        if not is_irreducible(mod, p):
            raise ConfigError("modulus is not irreducible", "modulus")
        if frobenius is not None and image is not None:
            raise ConfigError("give either frobenius or image", "aut")
        if frobenius is not None and frobenius % k != 0:
            aut: tuple = ("frobenius", frobenius % k)
        elif image is not None:
            aut = ("image", int(image))
        else:
            aut = ("identity",)
        spec = RingSpec(kind="gf", n=p**k, p=p, k=k, modulus=mod, aut=aut, order=1)
        order = _gf_aut_order(spec)
        return RingSpec(kind="gf", n=p**k, p=p, k=k, modulus=mod, aut=aut, order=order)

    # ---- properties ----
    @property
    def is_field(self) -> bool:
        if self.kind == "gf":
            return True
        if self.kind == "zmod":
            return _is_prime(self.n)
        return False

    @property
    def is_integers(self) -> bool:
        return self.kind == "int"

    @property
    def size(self) -> Optional[int]:
        return None if self.kind == "int" else self.n

    @property
    def aut_is_identity(self) -> bool:
        return self.aut[0] == "identity"

    def reduce_power(self, power: int) -> int:
        if self.aut_is_identity or self.order is None:
            return 0 if self.aut_is_identity else power
        return power % self.order

    def label(self) -> str:
        if self.kind == "int":
            return "Z"
        if self.kind == "zmod":
            return f"Z/{self.n}"
        base = f"GF({self.n})"
        if self.aut[0] == "frobenius":
            return f"{base}-frob{self.aut[1]}"
        if self.aut[0] == "image":
            return f"{base}-aut{self.aut[1]}"
        return base

    # ---- element helpers ----
    def elements(self) -> range:
        if self.kind == "int":
            raise LaurentKitError("the integers are infinite")
        return range(self.n)

    def arith(self) -> "Arith":
        return _arith(self)


def _gf_aut_order(spec: RingSpec) -> int:
    table = _aut_table(spec)
    cur = list(range(spec.n))
    for m in range(1, spec.k + 1):
        cur = [table[x] for x in cur]
        if cur == list(range(spec.n)):
            return m
    raise ConfigError("descriptor does not define an automorphism", "aut")


def _encode(coeffs: Sequence[int], p: int) -> int:
    return sum((c % p) * p**i for i, c in enumerate(coeffs))


def _decode(code: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return out


@lru_cache(maxsize=None)
def _gf_tables(p: int, k: int, modulus: tuple[int, ...]):
    q = p**k
    polys = [_decode(a, p, k) for a in range(q)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add[a, b] = _encode([(x + y) % p for x, y in zip(polys[a], polys[b])], p)
            mul[a, b] = _encode(_poly_mod(_poly_mul(polys[a], polys[b], p), modulus, p), p)
    neg = np.array([_encode([(-x) % p for x in polys[a]], p) for a in range(q)], dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
    for t in (add, mul, neg, inv):
        t.setflags(write=False)
    return add, mul, neg, inv


@lru_cache(maxsize=None)
def _aut_table(spec: RingSpec) -> tuple[int, ...]:
    p, k, q = spec.p, spec.k, spec.n
    add, mul, _, _ = _gf_tables(p, k, spec.modulus)
    if spec.aut[0] == "identity":
        return tuple(range(q))
    if spec.aut[0] == "frobenius":
        e = spec.aut[1]
        out = []
        for a in range(q):
            x = a
            for _ in range(e):
                r = 1
                for _ in range(p):
                    r = int(mul[r, x])
                x = r
            out.append(x)
        return tuple(out)
    g = spec.aut[1]
    if not 0 <= g < q:
        raise ConfigError("generator image out of range", "aut.image")
    powers = [1]
    for _ in range(k - 1):
        powers.append(int(mul[powers[-1], g]))
    # modulus(g) must vanish for x -> g to be a ring map
    val = 0
    gp = 1
    for c in spec.modulus:
        val = int(add[val, mul[c, gp]]) if c else val
        gp = int(mul[gp, g])
    if val != 0:
        raise ConfigError("generator image is not a root of the modulus", "aut.image")
    out = []
    for a in range(q):
        acc = 0
        for i, c in enumerate(_decode(a, p, k)):
            if c:
                acc = int(add[acc, mul[c, powers[i]]])
        out.append(acc)
    if len(set(out)) != q:
        raise ConfigError("descriptor is not bijective", "aut.image")
    return tuple(out)


class Arith:
    """Vectorized arithmetic on numpy arrays of canonical representatives."""

    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.dtype = object if spec.kind == "int" else np.int64
        self._aut_cache: dict[int, np.ndarray] = {}
        if spec.kind == "gf" and spec.k > 1:
            self.add_t, self.mul_t, self.neg_t, self.inv_t = _gf_tables(spec.p, spec.k, spec.modulus)
            self.mode = "table"
        elif spec.kind == "gf":
            self.mode = "mod"
            self.m = spec.p
        elif spec.kind == "zmod":
            self.mode = "mod"
            self.m = spec.n
        else:
            self.mode = "int"

    # scalars
    def s_add(self, a, b):
        if self.mode == "table":
            return int(self.add_t[a, b])
        if self.mode == "mod":
            return (a + b) % self.m
        return a + b

    def s_mul(self, a, b):
        if self.mode == "table":
            return int(self.mul_t[a, b])
        if self.mode == "mod":
            return (a * b) % self.m
        return a * b

    def s_neg(self, a):
        if self.mode == "table":
            return int(self.neg_t[a])
        if self.mode == "mod":
            return (-a) % self.m
        return -a

    def s_inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.mode == "table":
            return int(self.inv_t[a])
        if self.mode == "mod":
            if math.gcd(a, self.m) != 1:
                raise ZeroDivisionError(f"{a} is not a unit mod {self.m}")
            return pow(int(a), -1, self.m)
        if a in (1, -1):
            return a
        raise ZeroDivisionError(f"{a} is not a unit in Z")

    def is_unit(self, a) -> bool:
        if self.mode == "int":
            return a in (1, -1)
        if self.mode == "mod":
            return math.gcd(int(a), self.m) == 1
        return a != 0

    # arrays
    def canon(self, arr) -> np.ndarray:
        a = np.array(arr, dtype=self.dtype)
        if self.mode == "mod":
            a = a % self.m
        elif self.mode == "table":
            if a.size and (a.min() < 0 or a.max() >= self.spec.n):
                raise ConfigError("field element code out of range")
        elif a.size:
            a = np.vectorize(int, otypes=[object])(a)
        return a

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.mode == "table":
            return self.add_t[a, b]
        if self.mode == "mod":
            return (a + b) % self.m
        return a + b

    def neg(self, a: np.ndarray) -> np.ndarray:
        if self.mode == "table":
            return self.neg_t[a]
        if self.mode == "mod":
            return (-a) % self.m
        return -a

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add(a, self.neg(b))

    def scale(self, c, a: np.ndarray) -> np.ndarray:
        if self.mode == "table":
            return self.mul_t[c, a]
        if self.mode == "mod":
            return (c * a) % self.m
        return c * a

    def hadamard(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.mode == "table":
            return self.mul_t[a, b]
        if self.mode == "mod":
            return (a * b) % self.m
        return a * b

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        r, t = a.shape
        t2, c = b.shape
        assert t == t2
        if t == 0 or r == 0 or c == 0:
            return np.zeros((r, c), dtype=self.dtype)
        if self.mode == "mod":
            return (a @ b) % self.m
        if self.mode == "int":
            return a.dot(b)
        prods = self.mul_t[a[:, :, None], b[None, :, :]]
        if self.spec.p == 2:
            return np.bitwise_xor.reduce(prods, axis=1)
        acc = prods[:, 0, :]
        for i in range(1, t):
            acc = self.add_t[acc, prods[:, i, :]]
        return acc

    def aut(self, a: np.ndarray, power: int) -> np.ndarray:
        spec = self.spec
        if spec.aut_is_identity:
            return a
        power = spec.reduce_power(power)
        if power == 0:
            return a
        table = self._aut_cache.get(power)
        if table is None:
            base = _aut_table(spec)
            cur = list(range(spec.n))
            for _ in range(power):
                cur = [base[x] for x in cur]
            table = np.array(cur, dtype=np.int64)
            table.setflags(write=False)
            self._aut_cache[power] = table
        return table[a]

    def s_aut(self, a, power: int):
        return int(self.aut(np.array([a], dtype=np.int64), power)[0]) if self.spec.kind == "gf" else a


@lru_cache(maxsize=None)
def _arith(spec: RingSpec) -> Arith:
    return Arith(spec)


# ---- named element parsing / printing ----

def parse_element(spec: RingSpec, value, where: str = ""):
    """Parse an int, coefficient list, or named string like ``"w+1"``."""
    if spec.kind == "int":
        if isinstance(value, str):
            try:
                return int(value.strip())
            except ValueError as exc:
                raise ConfigError("integer expected", where) from exc
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError("integer expected", where)
        return value
    if spec.kind == "zmod" or (spec.kind == "gf" and spec.k == 1):
        m = spec.n
        if isinstance(value, list) and len(value) == 1:
            value = value[0]
        if isinstance(value, str):
            value = _parse_named(spec, value, where)
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError("residue expected", where)
        return value % m
    if isinstance(value, list):
        if len(value) > spec.k or not all(isinstance(c, int) for c in value):
            raise ConfigError("coefficient list too long or not integral", where)
        return _encode(value, spec.p)
    if isinstance(value, str):
        return _parse_named(spec, value, where)
    if isinstance(value, int) and not isinstance(value, bool):
        return _encode([value], spec.p)
    raise ConfigError("field element expected", where)


def _parse_named(spec: RingSpec, text: str, where: str):
    p = spec.p if spec.kind == "gf" else spec.n
    coeffs: dict[int, int] = {}
    s = text.replace(" ", "").replace("ω", "w")
    if not s:
        raise ConfigError("empty element", where)
    for term in s.replace("-", "+-").split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        if "w" in term:
            if spec.kind != "gf":
                raise ConfigError("generator w only exists in GF(p^k)", where)
            c, _, e = term.partition("w")
            c = int(c.rstrip("*")) if c.rstrip("*") else 1
            e = int(e.lstrip("^")) if e else 1
        else:
            try:
                c, e = int(term), 0
            except ValueError as exc:
                raise ConfigError(f"cannot parse {text!r}", where) from exc
        coeffs[e] = coeffs.get(e, 0) + sign * c
    if spec.kind != "gf":
        return coeffs.get(0, 0) % p
    poly = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        poly[e] = c % spec.p
    return _encode(_poly_mod(poly, spec.modulus, spec.p), spec.p)


def element_to_json(spec: RingSpec, a):
    if spec.kind == "gf" and spec.k > 1:
        return _decode(int(a), spec.p, spec.k)
    return int(a)


def element_name(spec: RingSpec, a) -> str:
    if spec.kind != "gf" or spec.k == 1:
        return str(int(a))
    terms = []
    for e, c in enumerate(_decode(int(a), spec.p, spec.k)):
        if not c:
            continue
        mono = "1" if e == 0 else ("w" if e == 1 else f"w^{e}")
        terms.append(mono if c == 1 and e else (str(c) if e == 0 else f"{c}{mono}"))
    return "+".join(reversed(terms)) or "0"


# ---- ring spec JSON ----

PRESETS = {
    "z": lambda: RingSpec.integers(),
    "int": lambda: RingSpec.integers(),
    "gf2": lambda: RingSpec.gf(2),
    "gf3": lambda: RingSpec.gf(3),
    "gf4": lambda: RingSpec.gf(2, 2),
    "gf4-frob": lambda: RingSpec.gf(2, 2, frobenius=1),
    "gf8-frob": lambda: RingSpec.gf(2, 3, frobenius=1),
    "gf9-frob": lambda: RingSpec.gf(3, 2, frobenius=1),
}


def ring_from_json(obj, where: str = "ring") -> RingSpec:
    if isinstance(obj, str):
        key = obj.lower()
        if key in PRESETS:
            return PRESETS[key]()
        if key.startswith("z/") and key[2:].isdigit():
            return RingSpec.zmod(int(key[2:]))
        raise ConfigError(f"unknown ring preset {obj!r}", where)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("ring spec must be an object with 'kind'", where)
    kind = obj["kind"]
    aut = obj.get("aut", "identity")
    if kind in ("int", "integers", "z"):
        if aut not in ("identity", {"identity": True}, None):
            raise ConfigError("only the identity automorphism exists on Z", f"{where}.aut")
        return RingSpec.integers(infinite_order=obj.get("order") == "infinite")
    if kind in ("zmod", "mod"):
        if aut not in ("identity", {"identity": True}, None):
            raise ConfigError("only the identity automorphism exists on Z/n", f"{where}.aut")
        if "n" not in obj:
            raise ConfigError("missing n", where)
        return RingSpec.zmod(int(obj["n"]))
    if kind == "gf":
        try:
            p, k = int(obj["p"]), int(obj.get("k", 1))
        except KeyError as exc:
            raise ConfigError(f"missing {exc.args[0]}", where) from exc
        frob = image = None
        if isinstance(aut, dict):
            if "frobenius" in aut:
                frob = int(aut["frobenius"])
            elif "image" in aut:
                image = None
                tmp = RingSpec.gf(p, k, obj.get("modulus"))
                image = parse_element(tmp, aut["image"], f"{where}.aut.image")
            elif not aut.get("identity", False):
                raise ConfigError("unknown automorphism descriptor", f"{where}.aut")
        elif aut != "identity":
            raise ConfigError("unknown automorphism descriptor", f"{where}.aut")
        spec = RingSpec.gf(p, k, obj.get("modulus"), frobenius=frob, image=image)
        if "order" in obj and obj["order"] != spec.order:
            raise ConfigError(f"stated order {obj['order']} but computed {spec.order}", f"{where}.order")
        return spec
    raise ConfigError(f"unknown ring kind {kind!r}", f"{where}.kind")


def ring_to_json(spec: RingSpec) -> dict:
    if spec.kind == "int":
        return {"kind": "int", "aut": "identity", "order": "infinite" if spec.order is None else 1}
    if spec.kind == "zmod":
        return {"kind": "zmod", "n": spec.n, "aut": "identity", "order": 1}
    if spec.aut[0] == "frobenius":
        aut: object = {"frobenius": spec.aut[1]}
    elif spec.aut[0] == "image":
        aut = {"image": element_to_json(spec, spec.aut[1])}
    else:
        aut = "identity"
    return {"kind": "gf", "p": spec.p, "k": spec.k, "modulus": list(spec.modulus), "aut": aut, "order": spec.order}
