"""JSON encodings of rings, matrices, Laurent morphisms, complexes and ``X``-objects.

Matrices are row-major nested arrays.  Matrix entries use canonical
representatives (integers, or coefficient lists over ``GF(p^k)``); Laurent
coefficients over extension fields use names such as ``"w+1"``.  Shapes are never
stored twice: a matrix is always decoded against the objects it connects.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .categories import Category, MatCat
from .chains import ChainComplex, ChainHomotopy, ChainMap, Contraction
from .errors import ConfigError
from .laurent import LaurentCat, LaurentMor
from .matrix import Matrix
from .projline import ProjLineMorphism, ProjLineObject, XCat
from .rings import RingSpec, element_name, parse_element, ring_from_json, ring_to_json

__all__ = [
    "Codec",
    "dumps",
    "ring_from_json",
    "ring_to_json",
]


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, no whitespace variation."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Codec:
    """Encoder and decoder bound to one base ring."""

    def __init__(self, ring: RingSpec):
        self.ring = ring
        self.base = MatCat(ring)

    # ---- matrices ----
    def matrix(self, M: Matrix, named: bool = False) -> list:
        """Entries as canonical representatives; ``named`` spells extension-field elements as ``"w+1"``."""
        if named and self.ring.kind == "gf" and self.ring.k > 1:
            return [[element_name(self.ring, x) for x in row] for row in M.a]
        return M.to_json()

    def parse_matrix(self, data, rows: int, cols: int, where: str = "matrix") -> Matrix:
        if not isinstance(data, list) or len(data) != rows:
            raise ConfigError(f"expected {rows} rows", where)
        out = np.zeros((rows, cols), dtype=self.ring.arith().dtype)
        for i, row in enumerate(data):
            if not isinstance(row, list) or len(row) != cols:
                raise ConfigError(f"expected {cols} columns", f"{where}[{i}]")
            for j, v in enumerate(row):
                out[i, j] = parse_element(self.ring, v, f"{where}[{i}][{j}]")
        return Matrix(self.ring, out)

    # ---- categories ----
    def category(self, cat: Category) -> dict:
        if isinstance(cat, MatCat):
            return {"kind": "base"}
        if isinstance(cat, LaurentCat):
            return {"kind": "laurent", "mode": cat.mode}
        if isinstance(cat, XCat):
            return {"kind": "x"}
        raise ConfigError(f"no JSON encoding for {cat!r}")

    def parse_category(self, data, where: str = "category") -> Category:
        kind = data.get("kind") if isinstance(data, dict) else None
        if kind == "base":
            return self.base
        if kind == "laurent":
            mode = data.get("mode", "all")
            if mode not in ("all", "nonneg", "nonpos"):
                raise ConfigError(f"unknown mode {mode!r}", f"{where}.mode")
            return LaurentCat(self.base, mode)
        if kind == "x":
            return XCat(self.base)
        raise ConfigError("category kind must be base, laurent or x", where)

    # ---- Laurent morphisms ----
    def laurent(self, f: LaurentMor) -> dict:
        return {"src": f.src, "tgt": f.tgt, "coeffs": {str(i): self.matrix(c, named=True) for i, c in f.coeffs}}

    def parse_laurent(self, data, mode: str = "all", where: str = "laurent") -> LaurentMor:
        if not isinstance(data, dict):
            raise ConfigError("Laurent morphism must be an object", where)
        try:
            src, tgt = int(data["src"]), int(data["tgt"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("src and tgt must be ranks", where) from exc
        coeffs = {}
        for key, m in (data.get("coeffs") or {}).items():
            try:
                i = int(key)
            except ValueError as exc:
                raise ConfigError(f"exponent {key!r} is not an integer", f"{where}.coeffs") from exc
            coeffs[i] = self.parse_matrix(m, tgt, src, f"{where}.coeffs.{key}")
        return LaurentCat(self.base, mode).make(src, tgt, coeffs)

    # ---- X ----
    def x_object(self, x: ProjLineObject) -> dict:
        return {"Aplus": x.Aplus, "Aminus": x.Aminus, "f": self.laurent(x.f), "finv": self.laurent(x.f_inv)}

    def parse_x_object(self, data, where: str = "x") -> ProjLineObject:
        if not isinstance(data, dict):
            raise ConfigError("X-object must be an object", where)
        for key in ("Aplus", "Aminus", "f"):
            if key not in data:
                raise ConfigError(f"missing {key}", where)
        f = self.parse_laurent(data["f"], "all", f"{where}.f")
        finv = self.parse_laurent(data["finv"], "all", f"{where}.finv") if "finv" in data else None
        return ProjLineObject.make(self.base, int(data["Aplus"]), int(data["Aminus"]), f, finv)

    # ---- generic objects and morphisms ----
    def obj(self, cat: Category, A):
        return self.x_object(A) if isinstance(cat, XCat) else int(A)

    def parse_obj(self, cat: Category, data, where: str):
        if isinstance(cat, XCat):
            return self.parse_x_object(data, where)
        if isinstance(data, bool) or not isinstance(data, int) or data < 0:
            raise ConfigError("object must be a nonnegative rank", where)
        return data

    def mor(self, cat: Category, f):
        if isinstance(cat, MatCat):
            return self.matrix(f)
        if isinstance(cat, LaurentCat):
            return self.laurent(f)
        if isinstance(cat, XCat):
            return {"uplus": self.laurent(f.uplus), "uminus": self.laurent(f.uminus)}
        raise ConfigError(f"no JSON encoding for morphisms of {cat!r}")

    def parse_mor(self, cat: Category, data, src, tgt, where: str):
        if isinstance(cat, MatCat):
            return self.parse_matrix(data, tgt, src, where)
        if isinstance(cat, LaurentCat):
            f = self.parse_laurent(data, cat.mode, where)
            if f.src != src or f.tgt != tgt:
                raise ConfigError("Laurent morphism has wrong ends", where)
            return f
        if isinstance(cat, XCat):
            if not isinstance(data, dict):
                raise ConfigError("X-morphism must be an object", where)
            up = self.parse_laurent(data.get("uplus"), "nonneg", f"{where}.uplus")
            um = self.parse_laurent(data.get("uminus"), "nonpos", f"{where}.uminus")
            return ProjLineMorphism.make(src, tgt, up, um)
        raise ConfigError(f"cannot decode morphisms of {cat!r}", where)

    # ---- complexes ----
    def complex(self, C: ChainComplex) -> dict:
        cat = C.cat
        return {
            "category": self.category(cat),
            "lo": C.lo,
            "hi": C.hi,
            "objs": [self.obj(cat, A) for A in C.objs],
            "diffs": [self.mor(cat, C.d(n)) for n in C.degrees() if n > C.lo],
        }

    def parse_complex(self, data, where: str = "complex") -> ChainComplex:
        if not isinstance(data, dict):
            raise ConfigError("complex must be an object", where)
        cat = self.parse_category(data.get("category", {"kind": "base"}), f"{where}.category")
        objs_raw = data.get("objs", [])
        lo = int(data.get("lo", 0))
        if "hi" in data and int(data["hi"]) != lo + len(objs_raw) - 1:
            raise ConfigError("hi does not match the number of objects", f"{where}.hi")
        objs = [self.parse_obj(cat, o, f"{where}.objs[{i}]") for i, o in enumerate(objs_raw)]
        diffs_raw = data.get("diffs", [])
        if len(diffs_raw) != max(len(objs) - 1, 0):
            raise ConfigError(f"expected {max(len(objs) - 1, 0)} differentials", f"{where}.diffs")
        diffs = {lo + 1 + i: self.parse_mor(cat, m, objs[i + 1], objs[i], f"{where}.diffs[{i}]") for i, m in enumerate(diffs_raw)}
        if not objs:
            return ChainComplex.zero(cat)
        return ChainComplex.make(cat, lo, objs, diffs)

    def graded_maps(self, comps: dict, cat: Category) -> dict:
        return {str(n): self.mor(cat, f) for n, f in sorted(comps.items())}

    def parse_graded_maps(self, data, cat: Category, src_at, tgt_at, where: str) -> dict:
        if not isinstance(data, dict):
            raise ConfigError("expected a degree-indexed object", where)
        out = {}
        for key, m in data.items():
            try:
                n = int(key)
            except ValueError as exc:
                raise ConfigError(f"degree {key!r} is not an integer", where) from exc
            out[n] = self.parse_mor(cat, m, src_at(n), tgt_at(n), f"{where}.{key}")
        return out

    def chain_map(self, f: ChainMap) -> dict:
        return {"comps": self.graded_maps(f.comps, f.cat)}

    def parse_chain_map(self, data, src: ChainComplex, tgt: ChainComplex, where: str = "map") -> ChainMap:
        comps = self.parse_graded_maps((data or {}).get("comps", {}), src.cat, src.obj, tgt.obj, f"{where}.comps")
        return ChainMap(src, tgt, comps)

    def homotopy(self, h: ChainHomotopy) -> dict:
        return {"comps": self.graded_maps(h.comps, h.cat)}

    def parse_homotopy(self, data, f: ChainMap, g: ChainMap, where: str = "homotopy") -> ChainHomotopy:
        comps = self.parse_graded_maps((data or {}).get("comps", {}), f.cat, f.src.obj, lambda n: f.tgt.obj(n + 1), f"{where}.comps")
        return ChainHomotopy(f, g, comps)

    def contraction(self, gamma: Contraction) -> dict:
        return {"comps": self.graded_maps(gamma.comps, gamma.C.cat)}

    def parse_contraction(self, data, C: ChainComplex, where: str = "contraction") -> Contraction:
        comps = self.parse_graded_maps((data or {}).get("comps", {}), C.cat, C.obj, lambda n: C.obj(n + 1), f"{where}.comps")
        return Contraction(C, comps)

    # ---- nil objects ----
    def nil_object(self, A: int, phi: Matrix, n: int) -> dict:
        return {"A": A, "phi": self.matrix(phi), "n": n}

    def parse_nil_object(self, data, where: str = "nil") -> tuple[int, Matrix, Any]:
        if not isinstance(data, dict) or "A" not in data or "phi" not in data:
            raise ConfigError("nil object needs A and phi", where)
        A = int(data["A"])
        return A, self.parse_matrix(data["phi"], A, A, f"{where}.phi"), data.get("n")
