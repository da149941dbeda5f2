"""Canonical JSON documents for complexes, categories, functors and intervals.

A document is a dict with a top-level ``field`` and named sections::

    complexes   name -> {ranks, boundaries}
    maps        name -> {source, target, components}
    smodules    name -> {ranks, faces, degens}
    smaps       name -> {source, target, levels}
    categories  name -> {ambient, level?, objects, homs, comp, units}
    functors    name -> {source, target, object-map, components}
    intervals   name -> {ambient, objects, maps} or {ambient: hopf, hopf, action}
    hopf        name -> {field, dim, name, mult, unit, comult, counit, antipode}

References are section names; every referencing slot also accepts an inline
definition.  Scalars are strings (``"n/d"`` over ``Q``), matrices row-major
lists, and JSON lists standing for object names are read back as tuples.
"""

from __future__ import annotations

import json
from itertools import product
from typing import Any, Optional

import numpy as np

from . import enriched as en
from . import simplicial as sm
from .chains import ChainComplex, ChainMap
from .hopf import HopfAlgebra, hopf_from_dict, hopf_to_dict
from .intervals import CocategoryInterval, cat_interval, hopf_interval
from .intervals import ChainOps, SmodOps
from .linalg import Field, Matrix


class FormatError(ValueError):
    """Malformed or unresolvable input document."""


def dumps(obj: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path} must hold a JSON object")
    return data


# ----------------------------------------------------------------- objects


def to_name(x) -> Any:
    if isinstance(x, tuple):
        return [to_name(y) for y in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def from_name(x) -> Any:
    if isinstance(x, list):
        return tuple(from_name(y) for y in x)
    return x


def matrix_to_json(m: Matrix) -> list:
    return m.tolist()


def matrix_from_json(k: Field, data, shape: tuple[int, int]) -> Matrix:
    rows, cols = shape
    if not isinstance(data, list) or len(data) != rows:
        raise FormatError(f"expected a {rows} x {cols} matrix")
    if rows == 0 or cols == 0:
        if any(row for row in data):
            raise FormatError(f"expected a {rows} x {cols} matrix")
        return Matrix.zeros(k, rows, cols)
    try:
        if any(not isinstance(row, list) or len(row) != cols for row in data):
            raise FormatError(f"expected a {rows} x {cols} matrix")
        return Matrix(k, k.array([[k.parse_scalar(x) for x in row] for row in data]))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad scalar in matrix: {exc}") from exc


def vector_to_json(k: Field, v) -> list:
    return [k.format(x) for x in v]


def vector_from_json(k: Field, data) -> np.ndarray:
    if not isinstance(data, list):
        raise FormatError("vectors are lists of scalars")
    try:
        return k.array([k.parse_scalar(x) for x in data]) if data else k.zeros((0,))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FormatError(f"bad scalar in vector: {exc}") from exc


def complex_to_json(C: ChainComplex) -> dict:
    return {"ranks": list(C.ranks), "boundaries": [matrix_to_json(C.d(n)) for n in range(1, C.top + 1)]}


def complex_from_json(k: Field, data: dict) -> ChainComplex:
    try:
        ranks = [int(r) for r in data["ranks"]]
        bds = data.get("boundaries", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad complex: {exc}") from exc
    if len(bds) != max(0, len(ranks) - 1):
        raise FormatError(f"a complex with {len(ranks)} ranks needs {max(0, len(ranks) - 1)} boundaries")
    mats = [matrix_from_json(k, b, (ranks[n], ranks[n + 1])) for n, b in enumerate(bds)]
    try:
        C = ChainComplex(k, ranks, mats)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    return C


def smodule_to_json(M: sm.SimplicialModule) -> dict:
    L = M.level
    return {
        "ranks": list(M.ranks),
        "faces": [[matrix_to_json(M.face(n, i)) for i in range(n + 1)] for n in range(1, L + 1)],
        "degens": [[matrix_to_json(M.degeneracy(n, i)) for i in range(n + 1)] for n in range(L)],
    }


def smodule_from_json(k: Field, data: dict) -> sm.SimplicialModule:
    try:
        ranks = [int(r) for r in data["ranks"]]
        faces = [[matrix_from_json(k, m, (ranks[n - 1], ranks[n])) for m in data["faces"][n - 1]] for n in range(1, len(ranks))]
        degens = [[matrix_from_json(k, m, (ranks[n + 1], ranks[n])) for m in data["degens"][n]] for n in range(len(ranks) - 1)]
        return sm.SimplicialModule(k, ranks, faces, degens)
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad simplicial module: {exc}") from exc


class Reader:
    """Resolves references inside one document."""

    def __init__(self, doc: dict, field: Optional[Field] = None):
        self.doc = doc
        if field is None:
            if "field" not in doc:
                raise FormatError("the document has no field")
            try:
                field = Field.parse(str(doc["field"]))
            except ValueError as exc:
                raise FormatError(str(exc)) from exc
        elif "field" in doc and str(doc["field"]) != str(field):
            raise FormatError(f"document is over {doc['field']}, not {field}")
        self.k = field
        self._cache: dict = {}

    def _section(self, section: str, ref, parse):
        if isinstance(ref, dict):
            return parse(ref)
        key = (section, ref)
        if key in self._cache:
            return self._cache[key]
        try:
            data = self.doc[section][ref]
        except (KeyError, TypeError):
            raise FormatError(f"unresolved reference {ref!r} in {section}") from None
        out = parse(data)
        self._cache[key] = out
        return out

    def complex(self, ref) -> ChainComplex:
        return self._section("complexes", ref, lambda d: complex_from_json(self.k, d))

    def smodule(self, ref) -> sm.SimplicialModule:
        return self._section("smodules", ref, lambda d: smodule_from_json(self.k, d))

    def map(self, ref) -> ChainMap:
        def parse(d):
            try:
                S, T = self.complex(d["source"]), self.complex(d["target"])
                comps = d.get("components", [])
            except KeyError as exc:
                raise FormatError(f"map is missing {exc}") from exc
            mats = [matrix_from_json(self.k, m, (T.rank(n), S.rank(n))) for n, m in enumerate(comps)]
            try:
                return ChainMap(S, T, mats)
            except ValueError as exc:
                raise FormatError(str(exc)) from exc

        return self._section("maps", ref, parse)

    def smap(self, ref) -> sm.SimplicialMap:
        def parse(d):
            try:
                S, T = self.smodule(d["source"]), self.smodule(d["target"])
                mats = [matrix_from_json(self.k, m, (T.rank(n), S.rank(n))) for n, m in enumerate(d["levels"])]
                return sm.SimplicialMap(S, T, mats)
            except (KeyError, ValueError) as exc:
                if isinstance(exc, FormatError):
                    raise
                raise FormatError(f"bad simplicial map: {exc}") from exc

        return self._section("smaps", ref, parse)

    def category(self, ref) -> en.EnrichedCategory:
        return self._section("categories", ref, self._category)

    def _category(self, d: dict) -> en.EnrichedCategory:
        k = self.k
        try:
            amb_name = d.get("ambient", "chain")
            objects = [from_name(x) for x in d["objects"]]
            if amb_name == "chain":
                amb, obj_ref, map_ref = en.CHAIN, self.complex, self.map
            elif amb_name == "simplicial":
                amb, obj_ref, map_ref = en.SimplicialAmbient(int(d["level"])), self.smodule, self.smap
            else:
                raise FormatError(f"unknown ambient {amb_name!r}")
            homs = {(from_name(x), from_name(y)): obj_ref(r) for x, y, r in d["homs"]}
            comp = {(from_name(x), from_name(y), from_name(z)): map_ref(r) for x, y, z, r in d["comp"]}
            units = {from_name(x): vector_from_json(k, v) for x, v in d["units"]}
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"bad category: {exc}") from exc
        if len(set(objects)) != len(objects):
            raise FormatError("object names repeat")
        try:
            return en.EnrichedCategory(amb, k, objects, homs, comp, units)
        except ValueError as exc:
            raise FormatError(str(exc)) from exc

    def functor(self, ref) -> en.EnrichedFunctor:
        def parse(d):
            try:
                S, T = self.category(d["source"]), self.category(d["target"])
                map_ref = self.map if S.ambient == en.CHAIN else self.smap
                obj = {from_name(x): from_name(y) for x, y in d["object-map"]}
                comps = {(from_name(x), from_name(y)): map_ref(r) for x, y, r in d["components"]}
            except (KeyError, TypeError, ValueError) as exc:
                if isinstance(exc, FormatError):
                    raise
                raise FormatError(f"bad functor: {exc}") from exc
            if S.ambient != T.ambient:
                raise FormatError("source and target live in different ambients")
            missing = [x for x in S.objects if obj.get(x) not in T.objects]
            if missing:
                raise FormatError(f"object map undefined or outside the target at {missing[0]!r}")
            for x, y in product(S.objects, repeat=2):
                f = comps.get((x, y))
                if f is None:
                    raise FormatError(f"missing component for {(x, y)}")
                if f.source != S.homs[(x, y)] or f.target != T.homs[(obj[x], obj[y])]:
                    raise FormatError(f"component for {(x, y)} has the wrong domain or codomain")
            return en.EnrichedFunctor(S, T, obj, comps)

        return self._section("functors", ref, parse)

    def hopf(self, ref) -> HopfAlgebra:
        def parse(d):
            try:
                return hopf_from_dict(d, self.k)
            except (KeyError, ValueError, TypeError) as exc:
                raise FormatError(f"bad Hopf algebra: {exc}") from exc

        return self._section("hopf", ref, parse)

    def interval(self, ref) -> CocategoryInterval:
        return self._section("intervals", ref, self._interval)

    def _interval(self, d: dict) -> CocategoryInterval:
        amb = d.get("ambient")
        if amb == "cat":
            return cat_interval()
        if amb == "hopf":
            return hopf_interval(self.hopf(d["hopf"]), d.get("action", "standard"))
        if amb not in ("chain", "simplicial"):
            raise FormatError(f"unknown interval ambient {amb!r}")
        obj_ref, map_ref = (self.complex, self.map) if amb == "chain" else (self.smodule, self.smap)
        try:
            objs = {name: obj_ref(d["objects"][name]) for name in ("I", "I1", "I2")}
            maps = {name: map_ref(d["maps"][name]) for name in ("d0", "d1", "p", "i0", "i1", "c")}
        except (KeyError, TypeError) as exc:
            raise FormatError(f"interval is missing {exc}") from exc
        ops = ChainOps() if amb == "chain" else SmodOps()
        return CocategoryInterval(amb, ops, objs["I"], objs["I1"], objs["I2"], field=self.k, **maps)

    def only(self, section: str) -> str:
        names = sorted(self.doc.get(section, {}))
        if len(names) != 1:
            raise FormatError(f"expected exactly one entry in {section}, found {len(names)}; pick one by name")
        return names[0]


# ------------------------------------------------------------------ writer


class Writer:
    """Accumulates a document, naming each distinct complex and map once."""

    def __init__(self, field: Field):
        self.k = field
        self.doc: dict = {"field": str(field)}
        self._names: dict = {}

    def _put(self, section: str, prefix: str, obj, encode) -> str:
        key = (section, obj)
        name = self._names.get(key)
        if name is None:
            sec = self.doc.setdefault(section, {})
            name = f"{prefix}{len(sec)}"
            sec[name] = encode(obj)
            self._names[key] = name
        return name

    def complex(self, C: ChainComplex) -> str:
        return self._put("complexes", "C", C, complex_to_json)

    def smodule(self, M: sm.SimplicialModule) -> str:
        return self._put("smodules", "M", M, smodule_to_json)

    def map(self, f: ChainMap) -> str:
        def enc(f):
            return {
                "source": self.complex(f.source),
                "target": self.complex(f.target),
                "components": [matrix_to_json(m) for m in f.components],
            }

        return self._put("maps", "f", f, enc)

    def smap(self, f: sm.SimplicialMap) -> str:
        def enc(f):
            return {
                "source": self.smodule(f.source),
                "target": self.smodule(f.target),
                "levels": [matrix_to_json(f[n]) for n in range(f.source.level + 1)],
            }

        return self._put("smaps", "g", f, enc)

    def category(self, A: en.EnrichedCategory, name: str) -> str:
        chain = A.ambient == en.CHAIN
        obj_ref, map_ref = (self.complex, self.map) if chain else (self.smodule, self.smap)
        data = {
            "ambient": A.ambient.name,
            "objects": [to_name(x) for x in A.objects],
            "homs": [[to_name(x), to_name(y), obj_ref(A.homs[(x, y)])] for x, y in product(A.objects, repeat=2)],
            "comp": [[to_name(x), to_name(y), to_name(z), map_ref(A.comp[(x, y, z)])] for x, y, z in product(A.objects, repeat=3)],
            "units": [[to_name(x), vector_to_json(self.k, A.units[x])] for x in A.objects],
        }
        if not chain:
            data["level"] = A.ambient.level
        self.doc.setdefault("categories", {})[name] = data
        return name

    def functor(self, F: en.EnrichedFunctor, name: str, source: str, target: str) -> str:
        map_ref = self.map if F.source.ambient == en.CHAIN else self.smap
        self.doc.setdefault("functors", {})[name] = {
            "source": source,
            "target": target,
            "object-map": [[to_name(x), to_name(F.on_objects[x])] for x in F.source.objects],
            "components": [[to_name(x), to_name(y), map_ref(F.components[(x, y)])] for x, y in product(F.source.objects, repeat=2)],
        }
        return name

    def hopf(self, H: HopfAlgebra, name: str) -> str:
        self.doc.setdefault("hopf", {})[name] = hopf_to_dict(H)
        return name

    def interval(self, iv: CocategoryInterval, name: str) -> str:
        if iv.ambient == "cat":
            data = {"ambient": "cat"}
        elif iv.ambient == "hopf":
            action = iv.extra.get("action-name", "standard")
            if action == "custom":
                raise ValueError("custom Hopf actions are not serialized")
            data = {"ambient": "hopf", "hopf": self.hopf(iv.extra["hopf"], f"{name}-algebra"), "action": action}
        else:
            obj_ref, map_ref = (self.complex, self.map) if iv.ambient == "chain" else (self.smodule, self.smap)
            data = {
                "ambient": iv.ambient,
                "objects": {n: obj_ref(getattr(iv, n)) for n in ("I", "I1", "I2")},
                "maps": {n: map_ref(getattr(iv, n)) for n in ("d0", "d1", "p", "i0", "i1", "c")},
            }
        self.doc.setdefault("intervals", {})[name] = data
        return name


def category_document(A: en.EnrichedCategory, name: str = "A") -> dict:
    w = Writer(A.field)
    w.category(A, name)
    return w.doc


def functor_document(F: en.EnrichedFunctor, name: str = "F") -> dict:
    w = Writer(F.source.field)
    w.category(F.source, "source")
    w.category(F.target, "target")
    w.functor(F, name, "source", "target")
    return w.doc
