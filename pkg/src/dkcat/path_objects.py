"""Path objects for categories enriched in chain complexes.

An object of ``P0`` is a degree-0 cycle ``f in A(a, b)`` representing a class
of ``H_0``.  For ``f0: a0 -> b0`` and ``f1: a1 -> b1`` the hom-object
``P0(f0, f1)`` is the limit of

    A(a0, a1) --f1_*--> A(a0, b1) <--ev1-- [I1, A(a0, b1)] --ev0--> A(a0, b1) <--f0^*-- A(b0, b1)

so an element is ``(x, h, y)`` with ``h`` a homotopy from ``f0^*(y)`` (at the
``d0`` end) to ``f1_*(x)`` (at the ``d1`` end).  Composition concatenates
homotopies with the cocomposition of the interval.

Homotopies are transposed on the right: ``h: W -> [I1, X]`` corresponds to
``W (x) I1 -> X``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import numpy as np

from . import chains as ch
from . import enriched as en
from .chains import ChainComplex, ChainMap, StructuralError
from .intervals import CocategoryInterval, chain_interval, verify_cocategory
from .linalg import Field, Matrix, solve


@lru_cache(maxsize=4096)
def _inverse(f: ChainMap) -> ChainMap:
    return f.inverse()


@dataclass(frozen=True)
class LedgerEntry:
    key: tuple
    source: object
    target: object
    cls: int
    cycle: tuple
    is_iso: bool

    def vector(self, k: Field) -> np.ndarray:
        return k.array(list(self.cycle)) if self.cycle else k.zeros((0,))


def _canonical_cycles(A: en.EnrichedCategory, x, y, rule: str) -> list[tuple[int, np.ndarray]]:
    hd = en.homotopy_data(A)
    reps = hd.reps[(x, y)]
    out = []
    k = A.field
    ident = hd.category.ids[x] if x == y else None
    H = A.homs[(x, y)]
    shift = None
    if rule == "shifted" and H.rank(1):
        shift = H.d(1).a[:, 0]
    elif rule not in ("canonical", "shifted"):
        raise ValueError(f"unknown representative rule {rule!r}")
    for idx in range(reps.shape[1]):
        if idx == ident:
            v = A.units[x]
        else:
            v = reps[:, idx]
            if shift is not None:
                v = k.reduce(v + shift)
        out.append((idx, v))
    return out


def p0_objects(A: en.EnrichedCategory, cycles: Optional[Sequence] = None, rule: str = "canonical") -> list[LedgerEntry]:
    """One entry per ``H_0`` class of every hom, ordered by (source, target, class).

    The identity class of ``A(a, a)`` is represented by the unit of ``a``
    itself.  Over ``Q`` an explicit list ``[(a, b, cycle), ...]`` is needed.
    """
    if A.ambient != en.CHAIN:
        raise ValueError("path objects are built for the chain ambient")
    k = A.field
    if not k.is_finite:
        if cycles is None:
            raise StructuralError("over Q the objects must be supplied as explicit cycles")
        out = []
        for n, (a, b, v) in enumerate(cycles):
            v = k.array(list(v))
            if not (A.homs[(a, b)].d(0) @ Matrix.column(k, v)).is_zero() or v.shape != (A.homs[(a, b)].rank(0),):
                raise ValueError(f"entry {n} is not a degree-0 element of the hom ({a!r}, {b!r})")
            out.append(LedgerEntry((a, b, n), a, b, n, tuple(v), False))
        return out
    hd = en.homotopy_data(A)
    C = hd.category
    out = []
    for a, b in product(A.objects, repeat=2):
        for idx, v in _canonical_cycles(A, a, b, rule):
            out.append(LedgerEntry((a, b, idx), a, b, idx, tuple(int(c) for c in v), C.is_iso(a, b, idx)))
    return out


def ledger_size(A: en.EnrichedCategory) -> int:
    """Number of ``P0`` objects without building them."""
    k = A.field
    if not k.is_finite:
        raise StructuralError("the ledger is only enumerated over a prime field")
    return sum(k.order ** ch.homology_data(A.homs[(a, b)], 0).dim for a, b in product(A.objects, repeat=2))


@dataclass
class HomAssemblyTrace:
    objects: tuple
    H0: ChainMap
    H1: ChainMap
    G1: ChainMap
    G2: ChainMap
    pair: ChainMap
    m: ChainMap
    homotopy: ChainMap
    outer_source: ChainMap
    outer_target: ChainMap
    checks: dict = field(default_factory=dict)

    def summary(self) -> dict:
        def shape(f):
            return {"source": list(f.source.ranks), "target": list(f.target.ranks)}

        return {
            "objects": [repr(o) for o in self.objects],
            "maps": {
                name: shape(getattr(self, name))
                for name in ("H0", "H1", "G1", "G2", "pair", "m", "homotopy", "outer_source", "outer_target")
            },
            "checks": self.checks,
        }


class PathObjectBuilder:
    """Caches hom limits, cotensor data and compositions for one ``A``."""

    def __init__(self, A: en.EnrichedCategory, interval: Optional[CocategoryInterval] = None, rule: str = "canonical", cycles=None):
        k = A.field
        self.A = A
        self.k = k
        self.interval = interval or chain_interval(k)
        iv = self.interval
        if iv.ambient != "chain":
            raise ValueError("path objects need the chain interval")
        rep = verify_cocategory(iv, "strict")
        if rep.verdict("C3") != "pass":
            raise StructuralError("the interval's comparison map is not an isomorphism, so homotopies cannot be composed")
        self.ledger = p0_objects(A, cycles, rule)
        self.entries = {e.key: e for e in self.ledger}
        self._hom: dict = {}
        self._cot: dict = {}
        self._comp: dict = {}
        self._units: dict = {}
        self._maps: dict = {}

    # ---------------------------------------------------------- cotensors

    def cotensor(self, X: ChainComplex) -> dict:
        hit = self._cot.get(X)
        if hit is not None:
            return hit
        iv = self.interval
        I1 = iv.I1
        idX = ch.identity(X)
        unit_iso = ch.cotensor_unit_iso(X)
        ev0 = unit_iso @ ch.hom_map(iv.d0, idX)
        ev1 = unit_iso @ ch.hom_map(iv.d1, idX)
        const = ch.hom_map(iv.p, idX) @ unit_iso.inverse()
        fib = ch.pullback(ev1, ev0)
        glue = fib.lift([ch.hom_map(iv.i0, idX), ch.hom_map(iv.i1, idX)])
        m = ch.hom_map(iv.c, idX) @ glue.inverse()
        out = {"obj": ch.internal_hom(I1, X), "ev0": ev0, "ev1": ev1, "const": const, "fiber": fib, "m": m}
        self._cot[X] = out
        return out

    # ---------------------------------------------------------------- homs

    def post(self, f: LedgerEntry, a0) -> ChainMap:
        """``f_*: A(a0, a) -> A(a0, b)``, ``x -> comp(x (x) f)``."""
        key = ("post", f.key, a0)
        if key not in self._maps:
            self._maps[key] = self._post(f, a0)
        return self._maps[key]

    def _post(self, f: LedgerEntry, a0) -> ChainMap:
        A = self.A
        X = A.homs[(a0, f.source)]
        fm = ch.element_map(A.homs[(f.source, f.target)], f.vector(self.k))
        return A.comp[(a0, f.source, f.target)] @ ch.tensor_maps(ch.identity(X), fm) @ _inverse(ch.right_unitor(X))

    def pre(self, f: LedgerEntry, b1) -> ChainMap:
        """``f^*: A(b, b1) -> A(a, b1)``, ``y -> comp(f (x) y)``."""
        key = ("pre", f.key, b1)
        if key not in self._maps:
            self._maps[key] = self._pre(f, b1)
        return self._maps[key]

    def _pre(self, f: LedgerEntry, b1) -> ChainMap:
        A = self.A
        Y = A.homs[(f.target, b1)]
        fm = ch.element_map(A.homs[(f.source, f.target)], f.vector(self.k))
        return A.comp[(f.source, f.target, b1)] @ ch.tensor_maps(fm, ch.identity(Y)) @ _inverse(ch.left_unitor(Y))

    def hom(self, k0, k1) -> ch.Limit:
        key = (k0, k1)
        hit = self._hom.get(key)
        if hit is not None:
            return hit
        A = self.A
        f0, f1 = self.entries[k0], self.entries[k1]
        a0, b0, a1, b1 = f0.source, f0.target, f1.source, f1.target
        X = A.homs[(a0, b1)]
        cot = self.cotensor(X)
        lim = ch.limit(
            [A.homs[(a0, a1)], cot["obj"], A.homs[(b0, b1)]],
            [(0, self.post(f1, a0), 1, cot["ev1"]), (2, self.pre(f0, b1), 1, cot["ev0"])],
        )
        self._hom[key] = lim
        return lim

    def unit(self, key) -> np.ndarray:
        hit = self._units.get(key)
        if hit is not None:
            return hit
        A, iv, k = self.A, self.interval, self.k
        f = self.entries[key]
        a, b = f.source, f.target
        X = A.homs[(a, b)]
        g = ch.element_map(X, f.vector(k)) @ iv.p @ ch.left_unitor(iv.I1)
        T = ch.adjoint_transpose(g, ChainComplex.unit(k), iv.I1)
        lim = self.hom(key, key)
        u = lim.lift([ch.element_map(A.homs[(a, a)], A.units[a]), T, ch.element_map(A.homs[(b, b)], A.units[b])])
        out = u[0].a[:, 0].copy()
        self._units[key] = out
        return out

    # -------------------------------------------------------- composition

    def composition(self, k0, k1, k2, trace: bool = False):
        key = (k0, k1, k2)
        if not trace and key in self._comp:
            return self._comp[key]
        A, iv = self.A, self.interval
        f0, f1, f2 = self.entries[k0], self.entries[k1], self.entries[k2]
        a0, b0, a1, b1, a2, b2 = f0.source, f0.target, f1.source, f1.target, f2.source, f2.target
        L0, L1, L2 = self.hom(k0, k1), self.hom(k1, k2), self.hom(k0, k2)
        A0, A1 = L0.obj, L1.obj
        p0, mid0, q0 = L0.projections
        p1, mid1, q1 = L1.projections
        X01, X12, X = A.homs[(a0, b1)], A.homs[(a1, b2)], A.homs[(a0, b2)]
        I1 = iv.I1
        W = ch.tensor(A0, A1)
        H0 = ch.adjoint_untranspose(mid0, I1, X01)
        H1 = ch.adjoint_untranspose(mid1, I1, X12)
        idA0 = ch.identity(A0)
        # (A0 A1) I1 -> A0 (A1 I1) -> A0 (I1 A1) -> (A0 I1) A1 -> X01 A(b1, b2) -> X
        move = (
            _inverse(ch.associator(A0, I1, A1))
            @ ch.tensor_maps(idA0, ch.symmetry(A1, I1))
            @ ch.associator(A0, A1, I1)
        )
        G1 = A.comp[(a0, b1, b2)] @ ch.tensor_maps(H0, q1) @ move
        G2 = A.comp[(a0, a1, b2)] @ ch.tensor_maps(p0, H1) @ ch.associator(A0, A1, I1)
        T1 = ch.adjoint_transpose(G1, W, I1)
        T2 = ch.adjoint_transpose(G2, W, I1)
        cot = self.cotensor(X)
        gap = ch.first_difference(cot["ev1"] @ T1, cot["ev0"] @ T2)
        if gap is not None:
            raise StructuralError(f"homotopies do not glue for {key}: {gap}")
        pair = cot["fiber"].lift([T1, T2])
        G = cot["m"] @ pair
        outer_s = A.comp[(a0, a1, a2)] @ ch.tensor_maps(p0, p1)
        outer_t = A.comp[(b0, b1, b2)] @ ch.tensor_maps(q0, q1)
        start = self.pre(f0, b2) @ outer_t
        end = self.post(f2, a0) @ outer_s
        checks = {
            "G1 at d0 is f0^*(q0 q1)": ch.first_difference(cot["ev0"] @ T1, start) is None,
            "G2 at d1 is f2_*(p0 p1)": ch.first_difference(cot["ev1"] @ T2, end) is None,
            "composite starts at f0^*(q0 q1)": ch.first_difference(cot["ev0"] @ G, start) is None,
            "composite ends at f2_*(p0 p1)": ch.first_difference(cot["ev1"] @ G, end) is None,
        }
        if not all(checks.values()):
            bad = [name for name, ok in checks.items() if not ok]
            raise StructuralError(f"composite homotopy has the wrong ends for {key}: {bad}")
        out = L2.lift([outer_s, G, outer_t])
        self._comp[key] = out
        if trace:
            return out, HomAssemblyTrace((k0, k1, k2), H0, H1, G1, G2, pair, cot["m"], G, outer_s, outer_t, checks)
        return out

    # ---------------------------------------------------------- category

    def category(self, keys: Optional[Sequence] = None) -> en.EnrichedCategory:
        keys = [e.key for e in self.ledger] if keys is None else list(keys)
        homs = {(x, y): self.hom(x, y).obj for x, y in product(keys, repeat=2)}
        comp = {(x, y, z): self.composition(x, y, z) for x, y, z in product(keys, repeat=3)}
        units = {x: self.unit(x) for x in keys}
        return en.EnrichedCategory(en.CHAIN, self.k, keys, homs, comp, units)


# ------------------------------------------------------------- functional API


def p0_hom(A: en.EnrichedCategory, interval: Optional[CocategoryInterval], f0, f1) -> tuple[ChainComplex, list[ChainMap]]:
    b = PathObjectBuilder(A, interval)
    lim = b.hom(f0, f1)
    return lim.obj, lim.projections


def p0_unit(A: en.EnrichedCategory, interval: Optional[CocategoryInterval], f) -> np.ndarray:
    return PathObjectBuilder(A, interval).unit(f)


def p0_composition(A: en.EnrichedCategory, interval: Optional[CocategoryInterval], f0, f1, f2):
    return PathObjectBuilder(A, interval).composition(f0, f1, f2, trace=True)


@dataclass
class PathObjectBundle:
    base: en.EnrichedCategory
    builder: PathObjectBuilder
    P0: en.EnrichedCategory
    P: en.EnrichedCategory
    i0: en.EnrichedFunctor
    i: en.EnrichedFunctor
    s: en.EnrichedFunctor
    t: en.EnrichedFunctor
    st: en.EnrichedFunctor
    st_P: en.EnrichedFunctor
    diagonal: en.EnrichedFunctor
    ledger: list
    checks: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "base-objects": [repr(x) for x in self.base.objects],
            "field": str(self.base.field),
            "P0-objects": len(self.P0.objects),
            "P-objects": len(self.P.objects),
            "ledger": [
                {"object": repr(e.key), "source": repr(e.source), "target": repr(e.target), "class": e.cls, "cycle": list(map(str, e.cycle)), "iso": e.is_iso}
                for e in self.ledger
            ],
            "construction-checks": self.checks,
        }


DEFAULT_MAX_OBJECTS = 64


def build_bundle(
    A: en.EnrichedCategory,
    interval: Optional[CocategoryInterval] = None,
    rule: str = "canonical",
    max_objects: Optional[int] = DEFAULT_MAX_OBJECTS,
) -> PathObjectBundle:
    k = A.field
    if not k.is_finite:
        raise StructuralError("path-object bundles are built over a prime field")
    if max_objects is not None:
        n = ledger_size(A)
        if n > max_objects:
            raise StructuralError(f"P0 would have {n} objects, above the bound {max_objects}")
    b = PathObjectBuilder(A, interval, rule)
    P0 = b.category()
    checks = {}
    rep = en.validate_category(P0)
    checks["P0 is a category"] = rep.valid
    if not rep.valid:
        raise StructuralError(f"P0 fails the category axioms: {rep.witness}")
    unit_of = {}
    for a in A.objects:
        matches = [e.key for e in b.ledger if e.source == a and e.target == a and np.array_equal(e.vector(k), A.units[a])]
        unit_of[a] = matches[0]
    keys = P0.objects
    s = en.EnrichedFunctor(P0, A, {x: b.entries[x].source for x in keys}, {(x, y): b.hom(x, y).projections[0] for x, y in product(keys, repeat=2)})
    t = en.EnrichedFunctor(P0, A, {x: b.entries[x].target for x in keys}, {(x, y): b.hom(x, y).projections[2] for x, y in product(keys, repeat=2)})
    AA = en.product_category(A, A)
    st = en.EnrichedFunctor(
        P0,
        AA,
        {x: (b.entries[x].source, b.entries[x].target) for x in keys},
        {(x, y): ch.pairing([b.hom(x, y).projections[0], b.hom(x, y).projections[2]]) for x, y in product(keys, repeat=2)},
    )
    i0_comps = {}
    for x, y in product(A.objects, repeat=2):
        H = A.homs[(x, y)]
        cot = b.cotensor(H)
        idH = ch.identity(H)
        i0_comps[(x, y)] = b.hom(unit_of[x], unit_of[y]).lift([idH, cot["const"], idH])
    i0 = en.EnrichedFunctor(A, P0, unit_of, i0_comps)
    iso_keys = [e.key for e in b.ledger if e.is_iso]
    P = en.full_subcategory(P0, iso_keys)
    i = en.EnrichedFunctor(A, P, unit_of, i0_comps)
    st_P = en.EnrichedFunctor(P, AA, {x: st.on_objects[x] for x in iso_keys}, {(x, y): st.components[(x, y)] for x, y in product(iso_keys, repeat=2)})
    for name, F in (("s", s), ("t", t), ("i0", i0)):
        r = en.validate_functor(F)
        checks[f"{name} is a functor"] = r.valid
        if not r.valid:
            raise StructuralError(f"{name} is not an enriched functor: {r.witness}")
    return PathObjectBundle(A, b, P0, P, i0, i, s, t, st, st_P, en.diagonal(A), b.ledger, checks)


def _functors_equal(F: en.EnrichedFunctor, G: en.EnrichedFunctor) -> Optional[dict]:
    if F.on_objects != G.on_objects:
        for x in F.source.objects:
            if F.on_objects[x] != G.on_objects[x]:
                return {"object": repr(x), "lhs": repr(F.on_objects[x]), "rhs": repr(G.on_objects[x])}
    for key, f in F.components.items():
        g = G.components[key]
        if f.target != g.target:
            return {"hom": repr(key), "reason": "different codomains"}
        d = ch.first_difference(f, g)
        if d is not None:
            return {"hom": repr(key), **d}
    return None


def verify_path_object(bundle: PathObjectBundle) -> dict:
    """The factorization ``A -i-> P -(s,t)-> A x A`` of the diagonal."""
    A = bundle.base
    res = {}
    composite = bundle.st_P.compose(bundle.i)
    diff = _functors_equal(composite, bundle.diagonal)
    res["(s,t) i = diagonal"] = {"pass": diff is None, "witness": diff}
    bad = en.locally_failing(bundle.i, "weq")
    res["i locally a quasi-isomorphism"] = {"pass": not bad, "witness": [repr(p) for p in bad] or None}
    bad = en.locally_failing(bundle.st_P, "fib")
    res["(s,t) locally a fibration"] = {"pass": not bad, "witness": [repr(p) for p in bad] or None}
    ess = en.is_homotopy_essentially_surjective(bundle.i)
    res["i homotopy essentially surjective"] = {"pass": ess, "witness": None}
    hf = en.homotopy_functor(bundle.st_P)
    fail = hf.isofibration_failure()
    res["[(s,t)] an isofibration"] = {"pass": fail is None, "witness": None if fail is None else repr(fail)}
    res["(s,t) is a base change of (ev0, ev1)"] = _pullback_cross_check(bundle)
    homology = {}
    for x, y in product(A.objects, repeat=2):
        f = bundle.i.components[(x, y)]
        homology[repr((x, y))] = {"base": list(ch.homology(f.source)), "path": list(ch.homology(f.target))}
    return {"checks": res, "passed": all(v["pass"] for v in res.values()), "homology": homology}


def _pullback_cross_check(bundle: PathObjectBundle) -> dict:
    b = bundle.builder
    A = b.A
    keys = bundle.P.objects
    for x, y in product(keys, repeat=2):
        f0, f1 = b.entries[x], b.entries[y]
        a0, b0, a1, b1 = f0.source, f0.target, f1.source, f1.target
        X = A.homs[(a0, b1)]
        cot = b.cotensor(X)
        ends = ch.pairing([cot["ev1"], cot["ev0"]])
        if not ch.is_fibration(ends):
            return {"pass": False, "witness": {"hom": repr((x, y)), "reason": "(ev1, ev0) is not a fibration"}}
        pa, pb = ch.sum_projections(A.homs[(a0, a1)], A.homs[(b0, b1)])
        along = ch.pairing([b.post(f1, a0) @ pa, b.pre(f0, b1) @ pb])
        pb_lim = ch.pullback(ends, along)
        lim = b.hom(x, y)
        comparison = pb_lim.lift([lim.projections[1], bundle.st.components[(x, y)]])
        if not comparison.is_iso():
            return {"pass": False, "witness": {"hom": repr((x, y)), "reason": "comparison with the pullback is not an isomorphism"}}
        if ch.first_difference(pb_lim.projections[1] @ comparison, bundle.st.components[(x, y)]) is not None:
            return {"pass": False, "witness": {"hom": repr((x, y)), "reason": "projections disagree"}}
        if not ch.is_fibration(pb_lim.projections[1]):
            return {"pass": False, "witness": {"hom": repr((x, y)), "reason": "base change is not a fibration"}}
    return {"pass": True, "witness": None}


# -------------------------------------------------- representative change


def representative_comparison(first: PathObjectBundle, second: PathObjectBundle) -> en.EnrichedFunctor:
    """An isomorphism ``P0 -> P0'`` over ``A x A`` between two ledgers of ``A``.

    Objects with the same ``(a, b, class)`` correspond; if ``f' = f + d(beta)``
    a homotopy ``(x, h, y)`` is sent to ``(x, h + l(x, y), y)`` where ``l``
    transposes ``comp(x (x) K1) - comp(J0 (x) y)`` with
    ``K = (0 at d0, d(beta) at d1, beta on the edge)`` and
    ``J = (-d(beta) at d0, 0 at d1, beta on the edge)``.
    """
    A = first.base
    k = A.field
    b1, b2 = first.builder, second.builder
    iv = b1.interval
    I1 = iv.I1
    betas = {}
    for e in b1.ledger:
        e2 = b2.entries[e.key]
        H = A.homs[(e.source, e.target)]
        diff = k.reduce(e2.vector(k) - e.vector(k))
        if not np.any(diff):
            betas[e.key] = k.zeros((H.rank(1),))
            continue
        beta = solve(H.d(1), diff)
        if beta is None:
            raise StructuralError(f"representatives of {e.key} are not homologous")
        betas[e.key] = beta

    def path(key, start, end):
        e = b1.entries[key]
        H = A.homs[(e.source, e.target)]
        beta = betas[key]
        db = H.d(1) @ beta if H.rank(1) else k.zeros((H.rank(0),))
        cols0 = k.zeros((H.rank(0), 2))
        if start:
            cols0[:, 0] = k.reduce(-db)
        if end:
            cols0[:, 1] = db
        comps = [Matrix(k, cols0)]
        if H.rank(1):
            comps.append(Matrix(k, beta.reshape(-1, 1)))
        return ChainMap(I1, H, comps)

    comps = {}
    for x, y in product(first.P0.objects, repeat=2):
        f0, f1 = b1.entries[x], b1.entries[y]
        a0, bb0, a1, bb1 = f0.source, f0.target, f1.source, f1.target
        L = b1.hom(x, y)
        L2 = b2.hom(x, y)
        Wd = L.obj
        p, mid, q = L.projections
        K1 = path(y, False, True)
        J0 = path(x, True, False)
        term1 = A.comp[(a0, a1, bb1)] @ ch.tensor_maps(p, K1)
        term2 = A.comp[(a0, bb0, bb1)] @ ch.tensor_maps(J0, q) @ ch.symmetry(Wd, I1)
        ell = ch.adjoint_transpose(term1 - term2, Wd, I1)
        comps[(x, y)] = L2.lift([p, mid + ell, q])
    return en.EnrichedFunctor(first.P0, second.P0, {x: x for x in first.P0.objects}, comps)
