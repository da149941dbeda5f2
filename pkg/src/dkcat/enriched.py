"""Small enriched categories over chain complexes or simplicial modules.

Composition is ``comp[(x, y, z)]: A(x, y) (x) A(y, z) -> A(x, z)``.  Units are
degree-0 (level-0) vectors of ``A(x, x)``.  In both ambients the degree-0 part
of ``X (x) Y`` is ``X_0 (x) Y_0`` with Kronecker indexing, so composites of
degree-0 elements are ``comp_0 @ kron(u, v)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional, Sequence

import numpy as np

from . import chains as ch
from . import simplicial as sm
from .chains import ChainComplex, ChainMap, StructuralError
from .finite_cats import FiniteCategory, FiniteFunctor
from .linalg import Field, Matrix, kron


# ------------------------------------------------------------------ ambients


class ChainAmbient:
    name = "chain"
    level = None

    def __eq__(self, other) -> bool:
        return isinstance(other, ChainAmbient)

    def __hash__(self) -> int:
        return hash("chain")

    def __repr__(self) -> str:
        return "ChainAmbient()"

    def unit(self, k: Field) -> ChainComplex:
        return ChainComplex.unit(k)

    def zero(self, k: Field) -> ChainComplex:
        return ChainComplex.zero(k)

    def free(self, k: Field, n: int) -> ChainComplex:
        """``I^n``: rank ``n`` concentrated in degree 0."""
        return ChainComplex(k, [n])

    def from_degree0(self, f: ChainComplex, g: ChainComplex, m: Matrix) -> ChainMap:
        return ChainMap(f, g, [m])

    tensor = staticmethod(ch.tensor)
    tensor_maps = staticmethod(ch.tensor_maps)
    associator = staticmethod(ch.associator)
    left_unitor = staticmethod(ch.left_unitor)
    right_unitor = staticmethod(ch.right_unitor)
    identity = staticmethod(ch.identity)
    zero_map = staticmethod(ch.zero_map)
    element_map = staticmethod(ch.element_map)
    direct_sum = staticmethod(ch.direct_sum)
    projections = staticmethod(ch.sum_projections)
    pairing = staticmethod(ch.pairing)
    first_difference = staticmethod(ch.first_difference)
    is_weq = staticmethod(ch.is_quasi_iso)
    is_fib = staticmethod(ch.is_fibration)
    is_trivial_fib = staticmethod(ch.is_trivial_fibration)

    def is_map(self, f) -> bool:
        return f.is_chain_map()

    def h0(self, X: ChainComplex) -> ch.HomologyData:
        return ch.homology_data(X, 0)

    def rank0(self, X: ChainComplex) -> int:
        return X.rank(0)

    def degree0(self, f: ChainMap) -> Matrix:
        return f[0]


@dataclass(frozen=True)
class SimplicialAmbient:
    level: int
    name = "simplicial"

    def unit(self, k: Field) -> sm.SimplicialModule:
        return sm.SimplicialModule.constant(k, self.level)

    def zero(self, k: Field) -> sm.SimplicialModule:
        return sm.SimplicialModule.constant(k, self.level, 0)

    def free(self, k: Field, n: int) -> sm.SimplicialModule:
        return sm.SimplicialModule.constant(k, self.level, n)

    def from_degree0(self, A, B, m: Matrix) -> sm.SimplicialMap:
        return sm.SimplicialMap(A, B, [m] * (self.level + 1))

    def tensor(self, A, B):
        return sm.smod_tensor(A, B)

    def tensor_maps(self, f, g):
        return sm.smod_tensor_maps(f, g)

    def _relabel(self, src, tgt):
        return sm.SimplicialMap(src, tgt, [Matrix.identity(src.field, r) for r in src.ranks])

    def associator(self, A, B, C):
        # Kronecker products are strictly associative
        return self._relabel(sm.smod_tensor(sm.smod_tensor(A, B), C), sm.smod_tensor(A, sm.smod_tensor(B, C)))

    def left_unitor(self, A):
        return self._relabel(sm.smod_tensor(self.unit(A.field), A), A)

    def right_unitor(self, A):
        return self._relabel(sm.smod_tensor(A, self.unit(A.field)), A)

    def identity(self, A):
        return sm.smod_identity(A)

    def zero_map(self, A, B):
        return sm.smod_zero_map(A, B)

    def element_map(self, A, v):
        return sm.smod_element_map(A, v)

    def direct_sum(self, *As):
        return sm.smod_direct_sum(*As)

    def projections(self, *As):
        S = sm.smod_direct_sum(*As)
        k = S.field
        out = []
        for idx, A in enumerate(As):
            levels = []
            for n in range(S.level + 1):
                before = sum(B.rank(n) for B in As[:idx])
                levels.append(Matrix.identity(k, S.rank(n)).submatrix(rows=list(range(before, before + A.rank(n)))))
            out.append(sm.SimplicialMap(S, A, levels))
        return out

    def pairing(self, maps):
        return sm.smod_pairing(maps)

    def first_difference(self, f, g):
        return sm.smod_first_difference(f, g)

    def is_weq(self, f) -> bool:
        return sm.is_weak_equivalence_smod(f)

    def is_fib(self, f) -> bool:
        return sm.is_fibration_smod(f)

    def is_trivial_fib(self, f) -> bool:
        return sm.is_trivial_fibration_smod(f)

    def is_map(self, f) -> bool:
        return f.is_simplicial()

    def h0(self, X) -> ch.HomologyData:
        # N_0 = M_0 with the identity basis
        return ch.homology_data(sm.normalize(X), 0)

    def rank0(self, X) -> int:
        return X.rank(0)

    def degree0(self, f) -> Matrix:
        return f[0]


CHAIN = ChainAmbient()


# ------------------------------------------------------------- categories


class EnrichedCategory:
    """Finite enriched category; ``homs``, ``comp`` and ``units`` are dicts."""

    def __init__(self, ambient, field: Field, objects: Sequence, homs: dict, comp: dict, units: dict):
        self.ambient = ambient
        self.field = field
        self.objects = tuple(objects)
        self.homs = dict(homs)
        self.comp = dict(comp)
        self.units = {x: field.array(list(v)) if len(v) else field.zeros((0,)) for x, v in units.items()}
        self._hc = None
        self._check_shapes()

    def _check_shapes(self) -> None:
        amb = self.ambient
        for x, y in product(self.objects, repeat=2):
            if (x, y) not in self.homs:
                raise ValueError(f"missing hom-object for {(x, y)}")
        for x in self.objects:
            u = self.units.get(x)
            if u is None or u.shape != (amb.rank0(self.homs[(x, x)]),):
                raise ValueError(f"unit of {x!r} has the wrong size")
        for x, y, z in product(self.objects, repeat=3):
            f = self.comp.get((x, y, z))
            if f is None:
                raise ValueError(f"missing composition for {(x, y, z)}")
            src = amb.tensor(self.homs[(x, y)], self.homs[(y, z)])
            if f.source != src or f.target != self.homs[(x, z)]:
                raise ValueError(f"composition for {(x, y, z)} has the wrong domain or codomain")

    def hom(self, x, y):
        return self.homs[(x, y)]

    def __repr__(self) -> str:
        return f"EnrichedCategory({self.ambient.name}, {self.field}, objects={list(self.objects)})"

    def compose0(self, x, y, z, u, v) -> np.ndarray:
        """``v o u`` for degree-0 elements ``u in A(x,y)``, ``v in A(y,z)``."""
        m = self.ambient.degree0(self.comp[(x, y, z)])
        k = self.field
        return (m @ Matrix.column(k, np.kron(u, v) if len(u) and len(v) else k.zeros((len(u) * len(v),)))).a[:, 0]

    def unit_map(self, x):
        return self.ambient.element_map(self.homs[(x, x)], self.units[x])


@dataclass
class CategoryReport:
    valid: bool
    failures: list = field(default_factory=list)

    @property
    def witness(self) -> Optional[dict]:
        return self.failures[0] if self.failures else None


def validate_category(A: EnrichedCategory, first_only: bool = True) -> CategoryReport:
    """Associativity and unit laws as exact map equalities."""
    amb = A.ambient
    fails = []

    def record(kind, objs, lhs, rhs) -> bool:
        d = amb.first_difference(lhs, rhs)
        if d is not None:
            fails.append({"law": kind, "objects": [repr(o) for o in objs], **d})
            return first_only
        return False

    for x, y in product(A.objects, repeat=2):
        H = A.homs[(x, y)]
        left = A.comp[(x, x, y)] @ amb.tensor_maps(A.unit_map(x), amb.identity(H))
        if record("left unit", (x, y), left, amb.left_unitor(H)):
            return CategoryReport(False, fails)
        right = A.comp[(x, y, y)] @ amb.tensor_maps(amb.identity(H), A.unit_map(y))
        if record("right unit", (x, y), right, amb.right_unitor(H)):
            return CategoryReport(False, fails)
    for w, x, y, z in product(A.objects, repeat=4):
        P, Q, R = A.homs[(w, x)], A.homs[(x, y)], A.homs[(y, z)]
        left = A.comp[(w, y, z)] @ amb.tensor_maps(A.comp[(w, x, y)], amb.identity(R))
        right = A.comp[(w, x, z)] @ amb.tensor_maps(amb.identity(P), A.comp[(x, y, z)]) @ amb.associator(P, Q, R)
        if record("associativity", (w, x, y, z), left, right):
            return CategoryReport(False, fails)
    return CategoryReport(not fails, fails)


class EnrichedFunctor:
    def __init__(self, source: EnrichedCategory, target: EnrichedCategory, on_objects: dict, components: dict):
        if source.ambient != target.ambient:
            raise ValueError("source and target live in different ambients")
        self.source = source
        self.target = target
        self.on_objects = dict(on_objects)
        self.components = dict(components)
        F = self.on_objects
        for x, y in product(source.objects, repeat=2):
            f = self.components.get((x, y))
            if f is None:
                raise ValueError(f"missing component for {(x, y)}")
            if f.source != source.homs[(x, y)] or f.target != target.homs[(F[x], F[y])]:
                raise ValueError(f"component for {(x, y)} has the wrong domain or codomain")

    def __repr__(self) -> str:
        return f"EnrichedFunctor({self.source!r} -> {self.target!r})"

    def compose(self, first: "EnrichedFunctor") -> "EnrichedFunctor":
        """``self o first``."""
        F = first.on_objects
        return EnrichedFunctor(
            first.source,
            self.target,
            {x: self.on_objects[F[x]] for x in first.source.objects},
            {(x, y): self.components[(F[x], F[y])] @ first.components[(x, y)] for x, y in product(first.source.objects, repeat=2)},
        )


def validate_functor(F: EnrichedFunctor) -> CategoryReport:
    S, T = F.source, F.target
    amb = S.ambient
    G = F.on_objects
    fails = []
    for x, y in product(S.objects, repeat=2):
        if not amb.is_map(F.components[(x, y)]):
            fails.append({"law": "component is not a map", "objects": [repr(x), repr(y)]})
            return CategoryReport(False, fails)
    for x in S.objects:
        img = amb.degree0(F.components[(x, x)]) @ S.units[x]
        if not np.array_equal(img, T.units[G[x]]):
            fails.append({"law": "unit", "objects": [repr(x)]})
            return CategoryReport(False, fails)
    for x, y, z in product(S.objects, repeat=3):
        lhs = F.components[(x, z)] @ S.comp[(x, y, z)]
        rhs = T.comp[(G[x], G[y], G[z])] @ amb.tensor_maps(F.components[(x, y)], F.components[(y, z)])
        d = amb.first_difference(lhs, rhs)
        if d is not None:
            fails.append({"law": "composition", "objects": [repr(x), repr(y), repr(z)], **d})
            return CategoryReport(False, fails)
    return CategoryReport(True, fails)


def identity_functor(A: EnrichedCategory) -> EnrichedFunctor:
    amb = A.ambient
    return EnrichedFunctor(A, A, {x: x for x in A.objects}, {(x, y): amb.identity(A.homs[(x, y)]) for x, y in product(A.objects, repeat=2)})


# ---------------------------------------------------------------- builders


def empty_category(field: Field, ambient=CHAIN) -> EnrichedCategory:
    return EnrichedCategory(ambient, field, (), {}, {}, {})


def unit_category(field: Field, ambient=CHAIN) -> EnrichedCategory:
    """One object ``*`` with hom the unit object."""
    I = ambient.unit(field)
    return EnrichedCategory(ambient, field, ("*",), {("*", "*"): I}, {("*", "*", "*"): ambient.left_unitor(I)}, {"*": [1]})


def terminal_category(field: Field, ambient=CHAIN) -> EnrichedCategory:
    """One object with the zero hom-object."""
    Z = ambient.zero(field)
    return EnrichedCategory(ambient, field, ("*",), {("*", "*"): Z}, {("*", "*", "*"): ambient.zero_map(ambient.tensor(Z, Z), Z)}, {"*": []})


def two_object(A, ambient=CHAIN) -> EnrichedCategory:
    """Objects ``0, 1``; endo-homs the unit, ``hom(0,1) = A``, ``hom(1,0) = 0``."""
    k = A.field
    I, Z = ambient.unit(k), ambient.zero(k)
    homs = {(0, 0): I, (1, 1): I, (0, 1): A, (1, 0): Z}
    comp = {}
    for x, y, z in product((0, 1), repeat=3):
        src = ambient.tensor(homs[(x, y)], homs[(y, z)])
        tgt = homs[(x, z)]
        if (x, y) == (y, z) == (x, x):
            comp[(x, y, z)] = ambient.left_unitor(I)
        elif (x, y, z) == (0, 0, 1):
            comp[(x, y, z)] = ambient.left_unitor(A)
        elif (x, y, z) == (0, 1, 1):
            comp[(x, y, z)] = ambient.right_unitor(A)
        else:
            comp[(x, y, z)] = ambient.zero_map(src, tgt)
    return EnrichedCategory(ambient, k, (0, 1), homs, comp, {0: [1], 1: [1]})


def square_zero_category(field: Field) -> EnrichedCategory:
    """One object with endo-hom ``k[e]/(e^2)``, ``|e| = 1`` and zero boundary."""
    k = field
    H = ChainComplex(k, [1, 1], [Matrix.zeros(k, 1, 1)])
    T = CHAIN.tensor(H, H)
    # degree 1 of H (x) H is spanned by 1 (x) e and e (x) 1, both sent to e
    comp = ChainMap(T, H, [Matrix.identity(k, 1), Matrix(k, k.array([[1, 1]])), Matrix.zeros(k, 0, T.rank(2))])
    return EnrichedCategory(CHAIN, k, ("*",), {("*", "*"): H}, {("*", "*", "*"): comp}, {"*": [1]})


def two_map(i, ambient=CHAIN) -> EnrichedFunctor:
    """``2_i: 2_A -> 2_B`` for a map ``i: A -> B``."""
    S, T = two_object(i.source, ambient), two_object(i.target, ambient)
    comps = {
        (0, 0): ambient.identity(S.homs[(0, 0)]),
        (1, 1): ambient.identity(S.homs[(1, 1)]),
        (0, 1): i,
        (1, 0): ambient.identity(S.homs[(1, 0)]),
    }
    return EnrichedFunctor(S, T, {0: 0, 1: 1}, comps)


def collapse(a, ambient=CHAIN) -> EnrichedFunctor:
    """``2_A -> I`` sending both objects to ``*`` and ``hom(0,1)`` along ``a: A -> I``."""
    k = a.field
    S = two_object(a.source, ambient)
    U = unit_category(k, ambient)
    I = U.homs[("*", "*")]
    comps = {
        (0, 0): ambient.identity(I),
        (1, 1): ambient.identity(I),
        (0, 1): a,
        (1, 0): ambient.zero_map(S.homs[(1, 0)], I),
    }
    return EnrichedFunctor(S, U, {0: "*", 1: "*"}, comps)


def object_inclusion(A: EnrichedCategory, x) -> EnrichedFunctor:
    """``I -> A`` picking the object ``x``."""
    U = unit_category(A.field, A.ambient)
    return EnrichedFunctor(U, A, {"*": x}, {("*", "*"): A.unit_map(x)})


def empty_inclusion(A: EnrichedCategory) -> EnrichedFunctor:
    return EnrichedFunctor(empty_category(A.field, A.ambient), A, {}, {})


def to_terminal(A: EnrichedCategory) -> EnrichedFunctor:
    T = terminal_category(A.field, A.ambient)
    Z = T.homs[("*", "*")]
    return EnrichedFunctor(A, T, {x: "*" for x in A.objects}, {(x, y): A.ambient.zero_map(A.homs[(x, y)], Z) for x, y in product(A.objects, repeat=2)})


def full_subcategory(A: EnrichedCategory, objects: Sequence) -> EnrichedCategory:
    objs = tuple(objects)
    return EnrichedCategory(
        A.ambient,
        A.field,
        objs,
        {(x, y): A.homs[(x, y)] for x, y in product(objs, repeat=2)},
        {(x, y, z): A.comp[(x, y, z)] for x, y, z in product(objs, repeat=3)},
        {x: A.units[x] for x in objs},
    )


def inclusion_functor(B: EnrichedCategory, A: EnrichedCategory) -> EnrichedFunctor:
    """The inclusion of a full subcategory ``B`` of ``A``."""
    return EnrichedFunctor(B, A, {x: x for x in B.objects}, {(x, y): A.ambient.identity(B.homs[(x, y)]) for x, y in product(B.objects, repeat=2)})


def product_category(A: EnrichedCategory, B: EnrichedCategory) -> EnrichedCategory:
    """Object pairs; ``hom((a,b),(a',b')) = A(a,a') (+) B(b,b')``."""
    amb = A.ambient
    objs = tuple(product(A.objects, B.objects))
    homs = {(x, y): amb.direct_sum(A.homs[(x[0], y[0])], B.homs[(x[1], y[1])]) for x, y in product(objs, repeat=2)}
    comp = {}
    for x, y, z in product(objs, repeat=3):
        pa1, pb1 = amb.projections(A.homs[(x[0], y[0])], B.homs[(x[1], y[1])])
        pa2, pb2 = amb.projections(A.homs[(y[0], z[0])], B.homs[(y[1], z[1])])
        left = A.comp[(x[0], y[0], z[0])] @ amb.tensor_maps(pa1, pa2)
        right = B.comp[(x[1], y[1], z[1])] @ amb.tensor_maps(pb1, pb2)
        comp[(x, y, z)] = amb.pairing([left, right])
    units = {x: np.concatenate([A.units[x[0]], B.units[x[1]]]) for x in objs}
    return EnrichedCategory(amb, A.field, objs, homs, comp, units)


def product_functor(F: EnrichedFunctor, G: EnrichedFunctor) -> EnrichedFunctor:
    amb = F.source.ambient
    S = product_category(F.source, G.source)
    T = product_category(F.target, G.target)
    comps = {}
    for x, y in product(S.objects, repeat=2):
        pa, pb = amb.projections(F.source.homs[(x[0], y[0])], G.source.homs[(x[1], y[1])])
        comps[(x, y)] = amb.pairing([F.components[(x[0], y[0])] @ pa, G.components[(x[1], y[1])] @ pb])
    obj = {x: (F.on_objects[x[0]], G.on_objects[x[1]]) for x in S.objects}
    return EnrichedFunctor(S, T, obj, comps)


def diagonal(A: EnrichedCategory) -> EnrichedFunctor:
    """``A -> A x A``, ``x -> (x, x)`` with hom components ``[id; id]``."""
    amb = A.ambient
    P = product_category(A, A)
    comps = {}
    for x, y in product(A.objects, repeat=2):
        H = A.homs[(x, y)]
        comps[(x, y)] = amb.pairing([amb.identity(H), amb.identity(H)])
    return EnrichedFunctor(A, P, {x: (x, x) for x in A.objects}, comps)


def linearize(C: FiniteCategory, field: Field, ambient=CHAIN) -> EnrichedCategory:
    """Free module on each hom-set, concentrated in degree 0 (constant simplicially)."""
    k = field
    homs = {(x, y): ambient.free(k, C.sizes[(x, y)]) for x, y in product(C.objects, repeat=2)}
    comp = {}
    for x, y, z in product(C.objects, repeat=3):
        a, b, c = C.sizes[(x, y)], C.sizes[(y, z)], C.sizes[(x, z)]
        m = k.zeros((c, a * b))
        t = C.comp[(x, y, z)]
        for f in range(a):
            for g in range(b):
                m[int(t[f, g]), f * b + g] = k.scalar(1)
        src = ambient.tensor(homs[(x, y)], homs[(y, z)])
        comp[(x, y, z)] = ambient.from_degree0(src, homs[(x, z)], Matrix(k, m))
    units = {}
    for x in C.objects:
        u = [0] * C.sizes[(x, x)]
        u[C.ids[x]] = 1
        units[x] = u
    return EnrichedCategory(ambient, k, C.objects, homs, comp, units)


def linearize_functor(F: FiniteFunctor, field: Field, ambient=CHAIN) -> EnrichedFunctor:
    S = linearize(F.source, field, ambient)
    T = linearize(F.target, field, ambient)
    G = F.on_objects
    comps = {}
    for x, y in product(F.source.objects, repeat=2):
        rows = F.target.sizes[(G[x], G[y])]
        m = field.zeros((rows, F.source.sizes[(x, y)]))
        for f, g in enumerate(F.on_morphisms[(x, y)]):
            m[int(g), f] = field.scalar(1)
        comps[(x, y)] = ambient.from_degree0(S.homs[(x, y)], T.homs[(G[x], G[y])], Matrix(field, m))
    return EnrichedFunctor(S, T, dict(G), comps)


# -------------------------------------------------------- homotopy category


def _require_finite(k: Field) -> None:
    if not k.is_finite:
        raise StructuralError("homotopy categories are only materialized over a prime field")


def _coeff_table(dim: int, p: int) -> np.ndarray:
    """All coefficient vectors of length ``dim`` as columns, lexicographically."""
    if dim == 0:
        return np.zeros((0, 1), dtype=np.int64)
    grids = np.indices((p,) * dim).reshape(dim, -1)
    return grids.astype(np.int64)


def _encode(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Column coefficient vectors to lexicographic indices."""
    idx = np.zeros(coeffs.shape[1:], dtype=np.int64)
    for row in coeffs:
        idx = idx * p + row
    return idx


@dataclass
class HomotopyData:
    """``[A]`` together with the representative cycles of every class."""

    category: FiniteCategory
    reps: dict
    coeffs: dict
    h0: dict

    def classify(self, x, y, v) -> int:
        p = self.category_field.order
        c = self.h0[(x, y)].classify_vector(v)
        return int(_encode(c.astype(np.int64).reshape(-1, 1), p)[0])

    def representative(self, x, y, idx: int) -> np.ndarray:
        return self.reps[(x, y)][:, idx]

    category_field: Field = None  # type: ignore[assignment]


def homotopy_data(A: EnrichedCategory) -> HomotopyData:
    if A._hc is not None:
        return A._hc
    k = A.field
    _require_finite(k)
    p = k.order
    amb = A.ambient
    h0, coeffs, reps, sizes = {}, {}, {}, {}
    for x, y in product(A.objects, repeat=2):
        hd = amb.h0(A.homs[(x, y)])
        h0[(x, y)] = hd
        C = _coeff_table(hd.dim, p)
        coeffs[(x, y)] = C
        reps[(x, y)] = k.reduce(hd.reps.a.astype(np.int64) @ C) if hd.dim else np.zeros((hd.reps.rows, 1), dtype=np.int64)
        sizes[(x, y)] = C.shape[1]
    comp = {}
    for x, y, z in product(A.objects, repeat=3):
        h1, h2, h3 = h0[(x, y)], h0[(y, z)], h0[(x, z)]
        m = amb.degree0(A.comp[(x, y, z)])
        _check_well_defined(A, (x, y, z), m, h1, h2, h3)
        # class coordinates of comp(r_a (x) r_b) over basis pairs
        T = h3.classify(m @ kron(h1.reps, h2.reps)).a.astype(np.int64) if h3.dim else np.zeros((0, h1.dim * h2.dim), dtype=np.int64)
        T = T.reshape(h3.dim, h1.dim, h2.dim)
        res = np.einsum("kab,ai,bj->kij", T, coeffs[(x, y)], coeffs[(y, z)]) % p
        comp[(x, y, z)] = _encode(res, p).reshape(sizes[(x, y)], sizes[(y, z)])
    ids = {}
    for x in A.objects:
        c = h0[(x, x)].classify_vector(A.units[x]).astype(np.int64)
        ids[x] = int(_encode(c.reshape(-1, 1), p)[0])
    cat = FiniteCategory(A.objects, sizes, comp, ids)
    out = HomotopyData(cat, reps, coeffs, h0, k)
    A._hc = out
    return out


def _check_well_defined(A, objs, m: Matrix, h1, h2, h3) -> None:
    """Composition of a cycle with a boundary must be a boundary."""
    B1, Z1 = _boundaries0(A.ambient, A.homs[(objs[0], objs[1])]), h1.cycles
    B2, Z2 = _boundaries0(A.ambient, A.homs[(objs[1], objs[2])]), h2.cycles
    for left, right in ((B1, Z2), (Z1, B2)):
        if left.cols and right.cols and h3.reps.rows:
            img = m @ kron(left, right)
            if not h3.classify(img).is_zero():
                raise StructuralError(f"composition on {objs} does not descend to H_0")


def _boundaries0(amb, X) -> Matrix:
    if isinstance(amb, SimplicialAmbient):
        X = sm.normalize(X)
    return X.d(1)


def homotopy_category(A: EnrichedCategory) -> FiniteCategory:
    return homotopy_data(A).category


def homotopy_functor(F: EnrichedFunctor) -> FiniteFunctor:
    S, T = homotopy_data(F.source), homotopy_data(F.target)
    p = F.source.field.order
    amb = F.source.ambient
    G = F.on_objects
    mor = {}
    for x, y in product(F.source.objects, repeat=2):
        img = amb.degree0(F.components[(x, y)]) @ Matrix(F.source.field, S.reps[(x, y)])
        h = T.h0[(G[x], G[y])]
        if h.dim:
            c = h.classify(img).a.astype(np.int64)
            mor[(x, y)] = _encode(c, p)
        else:
            mor[(x, y)] = np.zeros(S.category.sizes[(x, y)], dtype=np.int64)
    return FiniteFunctor(S.category, T.category, dict(G), mor)


# ---------------------------------------------------------------- predicates


PREDICATES = ("weq", "fib", "triv-fib")


def locally_failing(F: EnrichedFunctor, predicate: str) -> list:
    amb = F.source.ambient
    test: Callable = {"weq": amb.is_weq, "fib": amb.is_fib, "triv-fib": amb.is_trivial_fib}.get(predicate)  # type: ignore[assignment]
    if test is None:
        raise ValueError(f"unknown predicate {predicate!r}; expected one of {PREDICATES}")
    return [(x, y) for x, y in product(F.source.objects, repeat=2) if not test(F.components[(x, y)])]


def is_locally(F: EnrichedFunctor, predicate: str) -> bool:
    return not locally_failing(F, predicate)


def is_homotopy_essentially_surjective(F: EnrichedFunctor, witnesses: Optional[dict] = None) -> bool:
    """Over a prime field the homotopy categories are enumerated.

    Over ``Q`` a ``witnesses`` dict ``{y: (x, u, v)}`` must be supplied, with
    ``u in B(F x, y)_0`` and ``v in B(y, F x)_0`` degree-0 cycles whose
    composites are homologous to the units; the witnesses are checked exactly.
    """
    k = F.source.field
    if k.is_finite and witnesses is None:
        hf = homotopy_functor(F)
        T = hf.target
        image = []
        for x in F.source.objects:
            if F.on_objects[x] not in image:
                image.append(F.on_objects[x])
        return all(any(T.isomorphic(fx, y) for fx in image) for y in T.objects)
    if witnesses is None:
        raise StructuralError("over Q essential surjectivity needs explicit witnesses")
    B = F.target
    for y in B.objects:
        if y not in witnesses:
            return False
        x, u, v = witnesses[y]
        fx = F.on_objects[x]
        if not _homologous_to_unit(B, fx, y, u, v) or not _homologous_to_unit(B, y, fx, v, u):
            return False
    return True


def _homologous_to_unit(B: EnrichedCategory, a, b, u, v) -> bool:
    amb = B.ambient
    k = B.field
    u, v = k.array(list(u)), k.array(list(v))
    hd = amb.h0(B.homs[(a, a)])
    for src, tgt, w in ((a, b, u), (b, a, v)):
        z = amb.h0(B.homs[(src, tgt)])
        try:
            z.classify_vector(w)
        except StructuralError:
            return False
    vu = B.compose0(a, b, a, u, v)
    return not np.any(hd.classify_vector(k.reduce(vu - B.units[a])))


def is_homotopy_isofibration(F: EnrichedFunctor) -> bool:
    return homotopy_functor(F).is_isofibration()


def is_dk_equivalence(F: EnrichedFunctor) -> bool:
    return is_locally(F, "weq") and is_homotopy_essentially_surjective(F)


def is_dk_fibration(F: EnrichedFunctor) -> bool:
    return is_locally(F, "fib") and is_homotopy_isofibration(F)


def is_surjective_on_objects(F: EnrichedFunctor) -> bool:
    return set(F.on_objects.values()) >= set(F.target.objects)


def trivial_fibration_characterization(F: EnrichedFunctor) -> tuple[bool, bool]:
    """``(DK-equivalence and DK-fibration, surjective on objects and locally a trivial fibration)``."""
    lhs = is_dk_equivalence(F) and is_dk_fibration(F)
    rhs = is_surjective_on_objects(F) and is_locally(F, "triv-fib")
    return lhs, rhs


def dk_report(F: EnrichedFunctor) -> dict:
    """Every predicate evaluated on its own, with the failing hom pairs."""
    weq_bad = locally_failing(F, "weq")
    fib_bad = locally_failing(F, "fib")
    ess = is_homotopy_essentially_surjective(F)
    iso = is_homotopy_isofibration(F)
    pair = trivial_fibration_characterization(F)
    return {
        "locally-weq": not weq_bad,
        "locally-fib": not fib_bad,
        "ess-surj": ess,
        "isofib": iso,
        "dk-equiv": (not weq_bad) and ess,
        "dk-fib": (not fib_bad) and iso,
        "triv-fib-characterization-pair": list(pair),
        "pair-equal": pair[0] == pair[1],
        "failing-weq-pairs": [[repr(x), repr(y)] for x, y in weq_bad],
        "failing-fib-pairs": [[repr(x), repr(y)] for x, y in fib_bad],
    }


# ----------------------------------------------------------- change of base


def _gamma_level(A: EnrichedCategory, level: Optional[int]) -> int:
    top = max([1] + [H.top for H in A.homs.values()])
    if level is None:
        return top
    if level < top:
        raise StructuralError(f"truncation level {level} is below the top hom degree {top}")
    return level


def gamma_change_base(A: EnrichedCategory, level: Optional[int] = None) -> EnrichedCategory:
    """Apply ``Gamma`` hom-wise; composition ``Gamma(comp) o phi`` with ``phi`` the lax structure."""
    if A.ambient != CHAIN:
        raise ValueError("change of base starts from the chain ambient")
    L = _gamma_level(A, level)
    amb = SimplicialAmbient(L)
    homs = {key: sm.gamma(H, L) for key, H in A.homs.items()}
    comp = {}
    for (x, y, z), c in A.comp.items():
        phi = sm.gamma_lax(A.homs[(x, y)], A.homs[(y, z)], L)
        comp[(x, y, z)] = sm.gamma_map(c, L, allow_truncation=True) @ phi
    return EnrichedCategory(amb, A.field, A.objects, homs, comp, dict(A.units))


def gamma_change_base_functor(F: EnrichedFunctor, level: Optional[int] = None) -> EnrichedFunctor:
    L = max(_gamma_level(F.source, level), _gamma_level(F.target, level))
    S = gamma_change_base(F.source, L)
    T = gamma_change_base(F.target, L)
    comps = {key: sm.gamma_map(f, L) for key, f in F.components.items()}
    return EnrichedFunctor(S, T, F.on_objects, comps)
