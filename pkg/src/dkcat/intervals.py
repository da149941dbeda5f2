"""Cocategory intervals and their axiom verifier.

An interval is ``d0, d1: I -> I1``, ``p: I1 -> I`` and ``i0, c, i1: I1 -> I2``.
The verifier runs over an ambient given by an ops object providing
composition, equality witnesses, pushouts and the model-structure predicates
(any of which may be unavailable, giving ``n/a`` verdicts).

Axioms:

* C0 every structure map is a morphism with the expected ends;
* C1 ``p d0 = p d1 = id``;
* C2 ``i0 d1 = i1 d0``;
* C3 ``kappa = [i0, i1]: I1 +_I I1 -> I2`` (first copy glued at its ``d1``
  end to the ``d0`` end of the second) is an isomorphism (strict) or a weak
  equivalence (lax);
* C4 ``[id, d1 p] kappa^-1 c = id = [d0 p, id] kappa^-1 c``;
* C5 ``c d0 = i0 d0`` and ``c d1 = i1 d1``;
* C6 with ``I3 = I2 +_{I1} I2`` glued along ``j1 i1 = j2 i0``, the maps
  ``[j1 c, j2 i1] kappa^-1`` and ``[j1 i0, j2 c] kappa^-1`` agree after ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Any, Callable, Optional

import numpy as np

from . import chains as ch
from . import simplicial as sm
from .chains import ChainComplex, ChainMap, StructuralError
from .finite_cats import FiniteCategory, FiniteFunctor, codiscrete, discrete
from .hopf import HopfAlgebra, swap_matrix
from .linalg import Field, Matrix, block_diag, hstack, kron, quotient, vstack

PASS, FAIL, NA = "pass", "fail", "n/a"


@dataclass
class AxiomResult:
    axiom: str
    verdict: str
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "verdict": self.verdict, "witness": self.witness}


@dataclass
class AxiomReport:
    mode: str
    results: list = dc_field(default_factory=list)
    notes: dict = dc_field(default_factory=dict)

    def add(self, axiom: str, verdict: str, witness: Optional[dict] = None) -> None:
        self.results.append(AxiomResult(axiom, verdict, witness))

    def verdict(self, axiom: str) -> str:
        for r in self.results:
            if r.axiom == axiom:
                return r.verdict
        raise KeyError(axiom)

    def result(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    @property
    def passed(self) -> bool:
        """No axiom failed (``n/a`` verdicts do not count as failures)."""
        return all(r.verdict != FAIL for r in self.results)

    def verdicts(self) -> dict:
        return {r.axiom: r.verdict for r in self.results}

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "results": [r.to_dict() for r in self.results], "passed": self.passed}
        if self.notes:
            out["notes"] = self.notes
        return out


# ------------------------------------------------------------------ ambients


@dataclass
class Glued:
    """A pushout ``A +_C B`` with its injections and a descent function."""

    obj: Any
    injections: list
    desc: Callable


class ChainOps:
    name = "chain"

    def compose(self, g, f):
        return g @ f

    def identity(self, X):
        return ch.identity(X)

    def difference(self, f, g) -> Optional[dict]:
        if f.source != g.source or f.target != g.target:
            return {"reason": "different domain or codomain"}
        return ch.first_difference(f, g)

    def map_failure(self, f, source, target) -> Optional[dict]:
        if f.source != source or f.target != target:
            return {"reason": "wrong domain or codomain"}
        bad = f.commutation_defects()
        if bad:
            return {"reason": "does not commute with the boundary", "degree": bad[0]}
        return None

    def pushout(self, f, g) -> Glued:
        P = ch.pushout(f, g)
        return Glued(P.obj, P.injections, P.desc)

    def coproduct(self, X, Y) -> Glued:
        inj = ch.sum_injections(X, Y)
        return Glued(ch.direct_sum(X, Y), inj, ch.copairing)

    def is_iso(self, f) -> bool:
        return f.is_iso()

    def inverse(self, f):
        return f.inverse()

    def is_weq(self, f) -> Optional[bool]:
        return ch.is_quasi_iso(f)

    def is_cofibration(self, f) -> Optional[bool]:
        return ch.is_cofibration(f)

    def defect(self, f) -> dict:
        """Kernel and cokernel dimensions, degree by degree."""
        top = max(f.source.top, f.target.top)
        return {
            "kernel-dims": [f[n].cols - f[n].rank for n in range(top + 1)],
            "cokernel-dims": [f[n].rows - f[n].rank for n in range(top + 1)],
        }


class SmodOps(ChainOps):
    name = "simplicial"

    def identity(self, X):
        return sm.smod_identity(X)

    def difference(self, f, g) -> Optional[dict]:
        if f.source != g.source or f.target != g.target:
            return {"reason": "different domain or codomain"}
        return sm.smod_first_difference(f, g)

    def map_failure(self, f, source, target) -> Optional[dict]:
        if f.source != source or f.target != target:
            return {"reason": "wrong domain or codomain"}
        bad = f.commutation_defects()
        if bad:
            return {"reason": "does not commute with " + bad[0]}
        return None

    def pushout(self, f, g) -> Glued:
        P = sm.smod_pushout(f, g)
        return Glued(P.obj, P.injections, P.desc)

    def coproduct(self, X, Y) -> Glued:
        S = sm.smod_direct_sum(X, Y)
        k = S.field
        inj = []
        for idx, A in enumerate((X, Y)):
            levels = []
            for n in range(S.level + 1):
                lo = 0 if idx == 0 else X.rank(n)
                levels.append(Matrix.identity(k, S.rank(n)).submatrix(cols=list(range(lo, lo + A.rank(n)))))
            inj.append(sm.SimplicialMap(A, S, levels))
        return Glued(S, inj, sm.smod_copairing)

    def is_weq(self, f) -> Optional[bool]:
        return sm.is_weak_equivalence_smod(f)

    def is_cofibration(self, f) -> Optional[bool]:
        return sm.is_cofibration_smod(f)

    def defect(self, f) -> dict:
        return {
            "kernel-dims": [m.cols - m.rank for m in f.levels],
            "cokernel-dims": [m.rows - m.rank for m in f.levels],
        }


@dataclass(frozen=True)
class LinMap:
    """A linear map ``k^source -> k^target``."""

    source: int
    target: int
    m: Matrix

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return LinMap(other.source, self.target, self.m @ other.m)


class HopfOps:
    """Vector spaces (the underlying data of ``H``-modules); pushouts are cokernels."""

    name = "hopf"

    def __init__(self, field: Field):
        self.field = field

    def compose(self, g, f):
        return g @ f

    def identity(self, n: int) -> LinMap:
        return LinMap(n, n, Matrix.identity(self.field, n))

    def difference(self, f, g) -> Optional[dict]:
        if (f.source, f.target) != (g.source, g.target):
            return {"reason": "different domain or codomain"}
        if f.m == g.m:
            return None
        i, j = map(int, np.argwhere(f.m.a != g.m.a)[0])
        return {"row": i, "col": j, "lhs": self.field.format(f.m.a[i, j]), "rhs": self.field.format(g.m.a[i, j])}

    def map_failure(self, f, source, target) -> Optional[dict]:
        if (f.source, f.target) != (source, target) or f.m.shape != (target, source):
            return {"reason": "wrong domain or codomain"}
        return None

    def pushout(self, f: LinMap, g: LinMap) -> Glued:
        k = self.field
        W = vstack(k, [f.m, -g.m], cols=f.source)
        q = quotient(W)
        n = q.proj.rows
        inj = [
            LinMap(f.target, n, q.proj.submatrix(cols=list(range(f.target)))),
            LinMap(g.target, n, q.proj.submatrix(cols=list(range(f.target, f.target + g.target)))),
        ]

        def desc(maps):
            row = hstack(k, [h.m for h in maps], rows=maps[0].target)
            if W.cols and not (row @ W).is_zero():
                raise StructuralError("cocone does not respect the gluing")
            return LinMap(n, maps[0].target, row @ q.section)

        return Glued(n, inj, desc)

    def coproduct(self, a: int, b: int) -> Glued:
        k = self.field
        I = Matrix.identity(k, a + b)
        inj = [LinMap(a, a + b, I.submatrix(cols=list(range(a)))), LinMap(b, a + b, I.submatrix(cols=list(range(a, a + b))))]
        return Glued(a + b, inj, lambda maps: LinMap(a + b, maps[0].target, hstack(k, [h.m for h in maps], rows=maps[0].target)))

    def is_iso(self, f) -> bool:
        return f.m.is_invertible()

    def inverse(self, f):
        return LinMap(f.target, f.source, f.m.inverse())

    def is_weq(self, f) -> Optional[bool]:
        # stable equivalences of H-modules are not modelled
        return True if f.m.is_invertible() else None

    def is_cofibration(self, f) -> Optional[bool]:
        return f.m.is_injective()

    def defect(self, f) -> dict:
        r = f.m.rank
        return {"kernel-dim": f.source - r, "cokernel-dim": f.target - r}


class CatOps:
    """Finite categories.  Pushouts are built only for codiscrete groupoids
    glued along a nonempty codiscrete groupoid embedded injectively on objects;
    the result is the codiscrete groupoid on the glued object set."""

    name = "cat"

    def compose(self, g, f):
        return g.compose(f)

    def identity(self, C):
        from .finite_cats import identity_functor

        return identity_functor(C)

    def difference(self, f, g) -> Optional[dict]:
        if f.source is not g.source and f.source.objects != g.source.objects:
            return {"reason": "different domain"}
        for x in f.source.objects:
            if f.on_objects[x] != g.on_objects[x]:
                return {"object": repr(x), "lhs": repr(f.on_objects[x]), "rhs": repr(g.on_objects[x])}
        for key in product(f.source.objects, repeat=2):
            if not np.array_equal(f.on_morphisms[key], g.on_morphisms[key]):
                return {"morphisms": repr(key)}
        return None

    def map_failure(self, f, source, target) -> Optional[dict]:
        if f.source.objects != source.objects or f.target.objects != target.objects:
            return {"reason": "wrong domain or codomain"}
        bad = f.validation_failures()
        return {"reason": bad[0]} if bad else None

    @staticmethod
    def _is_codiscrete(C: FiniteCategory) -> bool:
        return all(n == 1 for n in C.sizes.values())

    def _functor(self, S: FiniteCategory, T: FiniteCategory, obj: dict) -> FiniteFunctor:
        mor = {}
        for x, y in product(S.objects, repeat=2):
            mor[(x, y)] = np.zeros(S.sizes[(x, y)], dtype=np.int64)
        return FiniteFunctor(S, T, obj, mor)

    def pushout(self, f, g) -> Glued:
        C, A, B = f.source, f.target, g.target
        if not (C.objects and all(map(self._is_codiscrete, (C, A, B)))):
            raise StructuralError("Cat pushouts are only built for codiscrete groupoids over a nonempty base")
        if not (f.is_injective_on_objects() and g.is_injective_on_objects()):
            raise StructuralError("Cat pushouts need legs injective on objects")
        # objects of A, then objects of B not in the image of g
        glue = {g.on_objects[c]: f.on_objects[c] for c in C.objects}
        objs = [("A", a) for a in A.objects] + [("B", b) for b in B.objects if b not in glue]
        label = {o: n for n, o in enumerate(objs)}
        P = codiscrete(range(len(objs)))
        ia = self._functor(A, P, {a: label[("A", a)] for a in A.objects})
        ib = self._functor(B, P, {b: label[("A", glue[b])] if b in glue else label[("B", b)] for b in B.objects})

        def desc(maps):
            fa, fb = maps
            T = fa.target
            obj = {}
            for a in A.objects:
                obj[label[("A", a)]] = fa.on_objects[a]
            for b in B.objects:
                tgt = ib.on_objects[b]
                if tgt in obj and obj[tgt] != fb.on_objects[b]:
                    raise StructuralError("cocone does not respect the gluing")
                obj[tgt] = fb.on_objects[b]
            if not self._is_codiscrete(T):
                raise StructuralError("descent is only built into codiscrete groupoids")
            return self._functor(P, T, obj)

        return Glued(P, [ia, ib], desc)

    def coproduct(self, X, Y) -> Glued:
        objs = [("L", x) for x in X.objects] + [("R", y) for y in Y.objects]
        if not (self._is_discrete(X) and self._is_discrete(Y)):
            raise StructuralError("Cat coproducts are only built for discrete categories")
        D = discrete(range(len(objs)))
        ix = self._functor(X, D, {x: objs.index(("L", x)) for x in X.objects})
        iy = self._functor(Y, D, {y: objs.index(("R", y)) for y in Y.objects})

        def desc(maps):
            obj = {}
            for (side, o), n in zip(objs, range(len(objs))):
                obj[n] = maps[0 if side == "L" else 1].on_objects[o]
            T = maps[0].target
            mor = {}
            for x, y in product(D.objects, repeat=2):
                mor[(x, y)] = np.array([T.ids[obj[x]]] if x == y else [], dtype=np.int64)
            return FiniteFunctor(D, T, obj, mor)

        return Glued(D, [ix, iy], desc)

    @staticmethod
    def _is_discrete(C: FiniteCategory) -> bool:
        return all(n == (1 if x == y else 0) for (x, y), n in C.sizes.items())

    def is_iso(self, f) -> bool:
        vals = list(f.on_objects.values())
        return len(set(vals)) == len(f.target.objects) == len(vals) and f.is_full_and_faithful()

    def inverse(self, f):
        S, T = f.source, f.target
        inv_obj = {v: k for k, v in f.on_objects.items()}
        mor = {}
        for x, y in product(T.objects, repeat=2):
            fwd = f.on_morphisms[(inv_obj[x], inv_obj[y])]
            back = np.empty(T.sizes[(x, y)], dtype=np.int64)
            back[fwd] = np.arange(fwd.size)
            mor[(x, y)] = back
        return FiniteFunctor(T, S, inv_obj, mor)

    def is_weq(self, f) -> Optional[bool]:
        return f.is_equivalence()

    def is_cofibration(self, f) -> Optional[bool]:
        return f.is_injective_on_objects()

    def defect(self, f) -> dict:
        return {"objects-source": len(f.source.objects), "objects-target": len(f.target.objects)}


# ------------------------------------------------------------------ intervals


@dataclass
class CocategoryInterval:
    ambient: str
    ops: Any
    I: Any
    I1: Any
    I2: Any
    d0: Any
    d1: Any
    p: Any
    i0: Any
    i1: Any
    c: Any
    field: Optional[Field] = None
    extra: dict = dc_field(default_factory=dict)

    def replace(self, **kw) -> "CocategoryInterval":
        data = dict(self.__dict__)
        data.update(kw)
        return CocategoryInterval(**data)


def chain_interval(k: Field) -> CocategoryInterval:
    """``I1``: ``e -> b - a`` on basis ``(a, b)``, ``(e)``; ``I2`` on ``(a0, a1, a2)``, ``(e1, e2)``."""
    I = ChainComplex.unit(k)
    I1 = ChainComplex(k, [2, 1], [Matrix(k, [[-1], [1]])])
    I2 = ChainComplex(k, [3, 2], [Matrix(k, [[-1, 0], [1, -1], [0, 1]])])
    d0 = ChainMap(I, I1, [Matrix(k, [[1], [0]])])
    d1 = ChainMap(I, I1, [Matrix(k, [[0], [1]])])
    p = ChainMap(I1, I, [Matrix(k, [[1, 1]]), Matrix.zeros(k, 0, 1)])
    c = ChainMap(I1, I2, [Matrix(k, [[1, 0], [0, 0], [0, 1]]), Matrix(k, [[1], [1]])])
    i0 = ChainMap(I1, I2, [Matrix(k, [[1, 0], [0, 1], [0, 0]]), Matrix(k, [[1], [0]])])
    i1 = ChainMap(I1, I2, [Matrix(k, [[0, 0], [1, 0], [0, 1]]), Matrix(k, [[0], [1]])])
    return CocategoryInterval("chain", ChainOps(), I, I1, I2, d0, d1, p, i0, i1, c, k)


def smod_interval(k: Field, truncation: int = 2) -> CocategoryInterval:
    """``Gamma`` applied to the chain interval."""
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    ci = chain_interval(k)
    L = truncation
    maps = {name: sm.gamma_map(getattr(ci, name), L) for name in ("d0", "d1", "p", "i0", "i1", "c")}
    return CocategoryInterval(
        "simplicial",
        SmodOps(),
        sm.gamma(ci.I, L),
        sm.gamma(ci.I1, L),
        sm.gamma(ci.I2, L),
        field=k,
        **maps,
    )


ACTIONS = ("standard", "trivial")


def hopf_interval(H: HopfAlgebra, action: Any = "standard") -> CocategoryInterval:
    """``I = k``, ``I1 = k (+) H``, ``I2 = k (+) k (+) H`` with the usual maps.

    ``action`` picks the ``H``-module structure used for the linearity report:
    ``"standard"`` (``k`` via the counit, ``H`` left regular), ``"trivial"``
    (everything via the counit), or a dict ``{"I": rho, "I1":
    rho, "I2": rho}`` of lists of action matrices.
    """
    bad = H.axiom_failures()
    if bad:
        raise ValueError(f"invalid Hopf algebra: {bad[0]}")
    k, h = H.field, H.dim
    one = H.one
    eps = H.counit.a[0]
    ops = HopfOps(k)

    d0 = k.zeros((1 + h, 1))
    d0[0, 0] = k.scalar(1)
    d1 = k.zeros((1 + h, 1))
    d1[1:, 0] = one
    p = k.zeros((1, 1 + h))
    p[0, 0] = k.scalar(1)
    p[0, 1:] = eps
    i0 = k.zeros((2 + h, 1 + h))
    i0[0, 0] = k.scalar(1)
    i0[1, 1:] = eps
    i1 = k.zeros((2 + h, 1 + h))
    i1[1, 0] = k.scalar(1)
    i1[2:, 1:] = Matrix.identity(k, h).a
    c = k.zeros((2 + h, 1 + h))
    c[0, 0] = k.scalar(1)
    c[2:, 1:] = Matrix.identity(k, h).a
    mk = lambda s, t, a: LinMap(s, t, Matrix(k, a))
    iv = CocategoryInterval(
        "hopf",
        ops,
        1,
        1 + h,
        2 + h,
        mk(1, 1 + h, d0),
        mk(1, 1 + h, d1),
        mk(1 + h, 1, p),
        mk(1 + h, 2 + h, i0),
        mk(1 + h, 2 + h, i1),
        mk(1 + h, 2 + h, c),
        k,
    )
    iv.extra["hopf"] = H
    iv.extra["actions"] = _actions(H, action)
    iv.extra["action-name"] = action if isinstance(action, str) else "custom"
    return iv


def _block_action(H: HopfAlgebra, parts: list) -> list:
    k = H.field
    out = []
    for j in range(H.dim):
        mats = [H.trivial(1)[j] if part == "k" else H.left_regular()[j] for part in parts]
        out.append(block_diag(k, mats))
    return out


def _actions(H: HopfAlgebra, action: Any) -> dict:
    if isinstance(action, dict):
        return {key: [m if isinstance(m, Matrix) else Matrix(H.field, m) for m in action[key]] for key in ("I", "I1", "I2")}
    if action == "standard":
        return {"I": _block_action(H, ["k"]), "I1": _block_action(H, ["k", "H"]), "I2": _block_action(H, ["k", "k", "H"])}
    if action == "trivial":
        return {"I": H.trivial(1), "I1": H.trivial(1 + H.dim), "I2": H.trivial(2 + H.dim)}
    raise ValueError(f"unknown action configuration {action!r}; expected one of {ACTIONS} or a dict")


def hopf_linearity_report(iv: CocategoryInterval) -> dict:
    """For each structure map, whether it commutes with the chosen actions."""
    H: HopfAlgebra = iv.extra["hopf"]
    acts = iv.extra["actions"]
    out = {"action": iv.extra.get("action-name", "custom")}
    for key in ("I", "I1", "I2"):
        bad = H.representation_failures(acts[key])
        out[f"module {key}"] = "ok" if not bad else bad[0]
    ends = {"d0": ("I", "I1"), "d1": ("I", "I1"), "p": ("I1", "I"), "i0": ("I1", "I2"), "i1": ("I1", "I2"), "c": ("I1", "I2")}
    for name, (s, t) in ends.items():
        f = getattr(iv, name).m
        ok = True
        for j in range(H.dim):
            if f @ acts[s][j] != acts[t][j] @ f:
                out[name] = f"not H-linear (basis element {j})"
                ok = False
                break
        if ok:
            out[name] = "H-linear"
    return out


def cat_interval() -> CocategoryInterval:
    """Terminal category, free-living isomorphism, 3-object contractible groupoid."""
    I = codiscrete(["*"])
    I1 = codiscrete([0, 1])
    I2 = codiscrete([0, 1, 2])
    ops = CatOps()

    def fun(S, T, obj):
        return ops._functor(S, T, obj)

    return CocategoryInterval(
        "cat",
        ops,
        I,
        I1,
        I2,
        fun(I, I1, {"*": 0}),
        fun(I, I1, {"*": 1}),
        fun(I1, I, {0: "*", 1: "*"}),
        fun(I1, I2, {0: 0, 1: 1}),
        fun(I1, I2, {0: 1, 1: 2}),
        fun(I1, I2, {0: 0, 1: 2}),
    )


# ------------------------------------------------------------------ verifier


def _eq(ops, axiom_witness: dict, label: str, f, g) -> bool:
    d = ops.difference(f, g)
    if d is not None:
        axiom_witness.setdefault("failures", []).append({"equation": label, **d})
        return False
    return True


def comparison(iv: CocategoryInterval) -> tuple[Glued, Any]:
    """``I1 +_I I1`` and ``kappa = [i0, i1]`` into ``I2``."""
    ops = iv.ops
    P = ops.pushout(iv.d1, iv.d0)
    kappa = P.desc([iv.i0, iv.i1])
    return P, kappa


def verify_cocategory(iv: CocategoryInterval, mode: str = "strict") -> AxiomReport:
    if mode not in ("strict", "lax"):
        raise ValueError("mode must be 'strict' or 'lax'")
    ops = iv.ops
    rep = AxiomReport(mode)

    # C0
    w: dict = {}
    ends = {"d0": (iv.I, iv.I1), "d1": (iv.I, iv.I1), "p": (iv.I1, iv.I), "i0": (iv.I1, iv.I2), "i1": (iv.I1, iv.I2), "c": (iv.I1, iv.I2)}
    for name, (s, t) in ends.items():
        bad = ops.map_failure(getattr(iv, name), s, t)
        if bad is not None:
            w.setdefault("failures", []).append({"map": name, **bad})
    rep.add("C0", FAIL if w else PASS, w or None)

    # C1
    w = {}
    ok = _eq(ops, w, "p d0 = id", ops.compose(iv.p, iv.d0), ops.identity(iv.I))
    ok &= _eq(ops, w, "p d1 = id", ops.compose(iv.p, iv.d1), ops.identity(iv.I))
    rep.add("C1", PASS if ok else FAIL, w or None)

    # C2
    w = {}
    c2 = _eq(ops, w, "i0 d1 = i1 d0", ops.compose(iv.i0, iv.d1), ops.compose(iv.i1, iv.d0))
    rep.add("C2", PASS if c2 else FAIL, w or None)

    # C3
    kappa = P = None
    kappa_iso = False
    if not c2:
        rep.add("C3", NA, {"reason": "C2 fails, so [i0, i1] is undefined"})
    else:
        try:
            P, kappa = comparison(iv)
        except StructuralError as exc:
            rep.add("C3", NA, {"reason": str(exc)})
        else:
            kappa_iso = ops.is_iso(kappa)
            if mode == "strict":
                rep.add("C3", PASS if kappa_iso else FAIL, None if kappa_iso else {"comparison": "not an isomorphism", **ops.defect(kappa)})
            else:
                weq = True if kappa_iso else ops.is_weq(kappa)
                if weq is None:
                    rep.add("C3", NA, {"reason": "weak equivalences are not modelled in this ambient", **ops.defect(kappa)})
                else:
                    rep.add("C3", PASS if weq else FAIL, None if weq else {"comparison": "not a weak equivalence", **ops.defect(kappa)})

    # C4
    if not kappa_iso:
        rep.add("C4", NA, {"reason": "the comparison map is not an isomorphism"})
    else:
        kinv = ops.inverse(kappa)
        w = {}
        try:
            q0 = P.desc([ops.identity(iv.I1), ops.compose(iv.d1, iv.p)])
            q1 = P.desc([ops.compose(iv.d0, iv.p), ops.identity(iv.I1)])
        except StructuralError as exc:
            rep.add("C4", FAIL, {"reason": str(exc)})
        else:
            ok = _eq(ops, w, "q0 c = id", ops.compose(q0, ops.compose(kinv, iv.c)), ops.identity(iv.I1))
            ok &= _eq(ops, w, "q1 c = id", ops.compose(q1, ops.compose(kinv, iv.c)), ops.identity(iv.I1))
            rep.add("C4", PASS if ok else FAIL, w or None)

    # C5
    w = {}
    ok = _eq(ops, w, "c d0 = i0 d0", ops.compose(iv.c, iv.d0), ops.compose(iv.i0, iv.d0))
    ok &= _eq(ops, w, "c d1 = i1 d1", ops.compose(iv.c, iv.d1), ops.compose(iv.i1, iv.d1))
    rep.add("C5", PASS if ok else FAIL, w or None)

    # C6
    if not kappa_iso:
        rep.add("C6", NA, {"reason": "the comparison map is not an isomorphism"})
    else:
        kinv = ops.inverse(kappa)
        try:
            Q = ops.pushout(iv.i1, iv.i0)
            j1, j2 = Q.injections
            alpha = ops.compose(P.desc([ops.compose(j1, iv.c), ops.compose(j2, iv.i1)]), kinv)
            beta = ops.compose(P.desc([ops.compose(j1, iv.i0), ops.compose(j2, iv.c)]), kinv)
        except StructuralError as exc:
            rep.add("C6", FAIL, {"reason": str(exc)})
        else:
            w = {}
            ok = _eq(ops, w, "alpha c = beta c", ops.compose(alpha, iv.c), ops.compose(beta, iv.c))
            rep.add("C6", PASS if ok else FAIL, w or None)

    if iv.ambient == "hopf":
        rep.notes["h-linearity"] = hopf_linearity_report(iv)
    return rep


def verify_cylinder(iv: CocategoryInterval) -> AxiomReport:
    """``I + I -> I1 -> I`` factors the fold map as a cofibration then a weak equivalence."""
    ops = iv.ops
    rep = AxiomReport("cylinder")
    S = ops.coproduct(iv.I, iv.I)
    inc = S.desc([iv.d0, iv.d1])
    fold = S.desc([ops.identity(iv.I), ops.identity(iv.I)])
    w: dict = {}
    ok = _eq(ops, w, "p [d0, d1] = fold", ops.compose(iv.p, inc), fold)
    rep.add("Y1 factors the fold map", PASS if ok else FAIL, w or None)
    cof = ops.is_cofibration(inc)
    rep.add("Y2 cofibration", NA if cof is None else (PASS if cof else FAIL), None if cof else {"map": "[d0, d1]", **ops.defect(inc)})
    bad = ops.map_failure(iv.p, iv.I1, iv.I)
    if bad is not None:
        rep.add("Y3 weak equivalence", FAIL, {"map": "p", **bad})
    else:
        weq = ops.is_weq(iv.p)
        wit = None
        if iv.ambient == "chain" and not weq:
            wit = {"homology-source": list(ch.homology(iv.I1)), "homology-target": list(ch.homology(iv.I))}
        rep.add("Y3 weak equivalence", NA if weq is None else (PASS if weq else FAIL), wit)
    return rep


# ----------------------------------------------------------- comultiplication


def check_interval_comultiplication(iv: CocategoryInterval, v, obj: Any = None, counit: Any = None) -> AxiomReport:
    """Coassociativity, cocommutativity (Koszul swap) and counit laws of ``v: X -> X (x) X``.

    ``X`` defaults to ``I1`` with counit ``p``; pass ``obj=iv.I`` and the
    identity as ``counit`` to check the unit object.
    """
    rep = AxiomReport("comultiplication")
    X = iv.I1 if obj is None else obj
    e = iv.p if counit is None else counit
    if iv.ambient == "chain":
        T = ch.tensor
        idX = ch.identity(X)
        tm = ch.tensor_maps
        assoc = ch.associator(X, X, X)
        swap = ch.symmetry(X, X)
        lam, rho = ch.left_unitor(X), ch.right_unitor(X)
        diff = ch.first_difference
        XX = T(X, X)
        if v.source != X or v.target != XX:
            raise ValueError("v must be a map X -> X (x) X")
        if not v.is_chain_map():
            rep.add("chain map", FAIL, {"degree": v.commutation_defects()[0]})
        coassoc = diff(assoc @ tm(v, idX) @ v, tm(idX, v) @ v)
        cocomm = diff(swap @ v, v)
        left = diff(lam @ tm(e, idX) @ v, idX)
        right = diff(rho @ tm(idX, e) @ v, idX)
    elif iv.ambient == "hopf":
        k = iv.field
        n = X
        if v.m.shape != (n * n, n):
            raise ValueError("v must be a map X -> X (x) X")
        I = Matrix.identity(k, n)

        def d(a, b):
            if a == b:
                return None
            i, j = map(int, np.argwhere(a.a != b.a)[0])
            return {"row": i, "col": j, "lhs": k.format(a.a[i, j]), "rhs": k.format(b.a[i, j])}

        coassoc = d(kron(v.m, I) @ v.m, kron(I, v.m) @ v.m)
        cocomm = d(swap_matrix(k, n, n) @ v.m, v.m)
        left = d(kron(e.m, I) @ v.m, I)
        right = d(kron(I, e.m) @ v.m, I)
    else:
        raise ValueError(f"no monoidal structure configured for the {iv.ambient} ambient")
    for name, wit in (("coassociativity", coassoc), ("cocommutativity", cocomm), ("left counit", left), ("right counit", right)):
        rep.add(name, PASS if wit is None else FAIL, wit)
    return rep


def report_mutation(iv: CocategoryInterval, name: str, degree: int, row: int, col: int, delta=1) -> CocategoryInterval:
    """The chain interval with one entry of ``name`` shifted by ``delta``."""
    f = getattr(iv, name)
    comps = list(f.components)
    k = f.field
    a = comps[degree].a.copy()
    a[row, col] = k.scalar(a[row, col] + delta) if k.is_finite else a[row, col] + k.scalar(delta)
    comps[degree] = Matrix(k, a)
    return iv.replace(**{name: ChainMap(f.source, f.target, comps)})
