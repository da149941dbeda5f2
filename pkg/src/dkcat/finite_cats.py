"""Finite categories stored as composition tables.

Morphisms ``x -> y`` are the integers ``0..n-1``.  ``comp[(x, y, z)]`` is an
integer array of shape ``(|C(x,y)|, |C(y,z)|)`` whose entry ``[f, g]`` is the
index of ``g o f`` (first ``f``, then ``g``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np


@dataclass
class FiniteCategory:
    objects: tuple
    sizes: dict
    comp: dict
    ids: dict
    labels: Optional[dict] = None
    _iso: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.objects = tuple(self.objects)
        for x, y in product(self.objects, repeat=2):
            if (x, y) not in self.sizes:
                raise ValueError(f"missing hom-set size for {(x, y)}")
        for x, y, z in product(self.objects, repeat=3):
            t = self.comp.get((x, y, z))
            shape = (self.sizes[(x, y)], self.sizes[(y, z)])
            if t is None or t.shape != shape:
                raise ValueError(f"composition table for {(x, y, z)} must have shape {shape}")

    def hom(self, x, y) -> int:
        return self.sizes[(x, y)]

    def compose(self, x, y, z, f: int, g: int) -> int:
        """``g o f`` for ``f: x -> y`` and ``g: y -> z``."""
        return int(self.comp[(x, y, z)][f, g])

    def validation_failures(self) -> list[str]:
        bad = []
        for x, y in product(self.objects, repeat=2):
            n = self.sizes[(x, y)]
            if n and not 0 <= self.ids.get(x, -1) < self.sizes[(x, x)]:
                bad.append(f"identity of {x!r} missing")
                return bad
            if not n:
                continue
            r = np.arange(n)
            if not np.array_equal(self.comp[(x, x, y)][self.ids[x], :], r):
                bad.append(f"left unit on {(x, y)}")
            if not np.array_equal(self.comp[(x, y, y)][:, self.ids[y]], r):
                bad.append(f"right unit on {(x, y)}")
        for x, y, z, w in product(self.objects, repeat=4):
            a, b, c = self.sizes[(x, y)], self.sizes[(y, z)], self.sizes[(z, w)]
            if not (a and b and c):
                continue
            fg = self.comp[(x, y, z)]
            gh = self.comp[(y, z, w)]
            left = self.comp[(x, z, w)][fg[:, :, None], np.arange(c)[None, None, :]]
            right = self.comp[(x, y, w)][np.arange(a)[:, None, None], gh[None, :, :]]
            if not np.array_equal(left, right):
                f, g, h = map(int, np.argwhere(left != right)[0])
                bad.append(f"associativity on {(x, y, z, w)} at {(f, g, h)}")
        return bad

    def is_valid(self) -> bool:
        return not self.validation_failures()

    def inverses(self, x, y) -> np.ndarray:
        """For each ``f: x -> y`` the index of its inverse, or ``-1``."""
        key = (x, y)
        hit = self._iso.get(key)
        if hit is not None:
            return hit
        out = np.full(self.sizes[(x, y)], -1, dtype=np.int64)
        if self.sizes[(x, y)] and self.sizes[(y, x)]:
            there = self.comp[(x, y, x)] == self.ids[x]
            back = (self.comp[(y, x, y)] == self.ids[y]).T
            both = there & back
            for f in range(out.shape[0]):
                hits = np.flatnonzero(both[f])
                if hits.size:
                    out[f] = hits[0]
        self._iso[key] = out
        return out

    def is_iso(self, x, y, f: int) -> bool:
        return bool(self.inverses(x, y)[f] >= 0)

    def iso_witness(self, x, y) -> Optional[tuple[int, int]]:
        """First ``(u, v)`` with ``u: x -> y`` and ``v u = id``, ``u v = id``."""
        inv = self.inverses(x, y)
        hits = np.flatnonzero(inv >= 0)
        if not hits.size:
            return None
        u = int(hits[0])
        return u, int(inv[u])

    def isomorphic(self, x, y) -> bool:
        return self.iso_witness(x, y) is not None

    def product(self, other: "FiniteCategory") -> "FiniteCategory":
        """Pairs of objects; ``(f, g)`` has index ``f * |D(y,y')| + g``."""
        objs = tuple(product(self.objects, other.objects))
        sizes = {(a, b): self.sizes[(a[0], b[0])] * other.sizes[(a[1], b[1])] for a in objs for b in objs}
        comp = {}
        for a, b, c in product(objs, repeat=3):
            t1 = self.comp[(a[0], b[0], c[0])]
            t2 = other.comp[(a[1], b[1], c[1])]
            n2f, n2g, n2h = other.sizes[(a[1], b[1])], other.sizes[(b[1], c[1])], other.sizes[(a[1], c[1])]
            # entry [(f1, f2), (g1, g2)] = t1[f1, g1] * n2h + t2[f2, g2]
            full = t1[:, None, :, None] * n2h + t2[None, :, None, :]
            comp[(a, b, c)] = full.reshape(t1.shape[0] * n2f, t1.shape[1] * n2g)
        ids = {a: self.ids[a[0]] * other.sizes[(a[1], a[1])] + other.ids[a[1]] for a in objs}
        return FiniteCategory(objs, sizes, comp, ids)

    def full_subcategory(self, objects: Sequence) -> "FiniteCategory":
        objs = tuple(objects)
        return FiniteCategory(
            objs,
            {(x, y): self.sizes[(x, y)] for x in objs for y in objs},
            {(x, y, z): self.comp[(x, y, z)] for x in objs for y in objs for z in objs},
            {x: self.ids[x] for x in objs},
        )


def codiscrete(objects: Sequence) -> FiniteCategory:
    """Exactly one morphism between any two objects (a contractible groupoid)."""
    objs = tuple(objects)
    return FiniteCategory(
        objs,
        {(x, y): 1 for x in objs for y in objs},
        {(x, y, z): np.zeros((1, 1), dtype=np.int64) for x in objs for y in objs for z in objs},
        {x: 0 for x in objs},
    )


def terminal_category() -> FiniteCategory:
    return codiscrete(["*"])


def discrete(objects: Sequence) -> FiniteCategory:
    objs = tuple(objects)
    sizes = {(x, y): int(x == y) for x in objs for y in objs}
    comp = {
        (x, y, z): np.zeros((sizes[(x, y)], sizes[(y, z)]), dtype=np.int64) for x in objs for y in objs for z in objs
    }
    return FiniteCategory(objs, sizes, comp, {x: 0 for x in objs})


def arrow_category() -> FiniteCategory:
    """``0 -> 1`` with a single non-identity arrow."""
    sizes = {(0, 0): 1, (1, 1): 1, (0, 1): 1, (1, 0): 0}
    comp = {}
    for x, y, z in product((0, 1), repeat=3):
        comp[(x, y, z)] = np.zeros((sizes[(x, y)], sizes[(y, z)]), dtype=np.int64)
    return FiniteCategory((0, 1), sizes, comp, {0: 0, 1: 0})


def cyclic_group(n: int) -> FiniteCategory:
    """One object with morphisms ``0..n-1`` composing by addition mod ``n``."""
    r = np.arange(n)
    return FiniteCategory(("*",), {("*", "*"): n}, {("*", "*", "*"): (r[:, None] + r[None, :]) % n}, {"*": 0})


@dataclass
class FiniteFunctor:
    source: FiniteCategory
    target: FiniteCategory
    on_objects: dict
    on_morphisms: dict

    def validation_failures(self) -> list[str]:
        S, T, F = self.source, self.target, self.on_objects
        bad = []
        for x, y in product(S.objects, repeat=2):
            m = self.on_morphisms.get((x, y))
            if m is None or m.shape != (S.sizes[(x, y)],):
                bad.append(f"morphism map on {(x, y)} has the wrong shape")
                return bad
            if m.size and (m.min() < 0 or m.max() >= T.sizes[(F[x], F[y])]):
                bad.append(f"morphism map on {(x, y)} leaves the hom-set")
                return bad
        for x in S.objects:
            if self.on_morphisms[(x, x)][S.ids[x]] != T.ids[F[x]]:
                bad.append(f"identity of {x!r} not preserved")
        for x, y, z in product(S.objects, repeat=3):
            if not (S.sizes[(x, y)] and S.sizes[(y, z)]):
                continue
            fxy, fyz, fxz = self.on_morphisms[(x, y)], self.on_morphisms[(y, z)], self.on_morphisms[(x, z)]
            left = fxz[S.comp[(x, y, z)]]
            right = T.comp[(F[x], F[y], F[z])][fxy[:, None], fyz[None, :]]
            if not np.array_equal(left, right):
                bad.append(f"composition not preserved on {(x, y, z)}")
        return bad

    def is_valid(self) -> bool:
        return not self.validation_failures()

    def compose(self, first: "FiniteFunctor") -> "FiniteFunctor":
        """``self o first``."""
        S = first.source
        obj = {x: self.on_objects[first.on_objects[x]] for x in S.objects}
        mor = {
            (x, y): self.on_morphisms[(first.on_objects[x], first.on_objects[y])][first.on_morphisms[(x, y)]]
            for x, y in product(S.objects, repeat=2)
        }
        return FiniteFunctor(S, self.target, obj, mor)

    def is_surjective_on_objects(self) -> bool:
        return set(self.on_objects.values()) >= set(self.target.objects)

    def is_injective_on_objects(self) -> bool:
        vals = list(self.on_objects.values())
        return len(set(vals)) == len(vals)

    def is_full_and_faithful(self) -> bool:
        S, T, F = self.source, self.target, self.on_objects
        for x, y in product(S.objects, repeat=2):
            m = self.on_morphisms[(x, y)]
            if sorted(m.tolist()) != list(range(T.sizes[(F[x], F[y])])):
                return False
        return True

    def is_essentially_surjective(self) -> bool:
        image = set(self.on_objects.values())
        return all(any(self.target.isomorphic(fx, y) for fx in sorted(image, key=self.target.objects.index)) for y in self.target.objects)

    def is_equivalence(self) -> bool:
        return self.is_full_and_faithful() and self.is_essentially_surjective()

    def is_isofibration(self) -> bool:
        """Every iso ``v: F(x) -> y'`` lifts to an iso ``u: x -> y`` with ``F(y) = y'`` and ``F(u) = v``."""
        return self.isofibration_failure() is None

    def isofibration_failure(self) -> Optional[tuple]:
        S, T, F = self.source, self.target, self.on_objects
        for x in S.objects:
            for y2 in T.objects:
                for v in np.flatnonzero(T.inverses(F[x], y2) >= 0):
                    lifted = False
                    for y in S.objects:
                        if F[y] != y2:
                            continue
                        isos = np.flatnonzero(S.inverses(x, y) >= 0)
                        if np.any(self.on_morphisms[(x, y)][isos] == v):
                            lifted = True
                            break
                    if not lifted:
                        return (x, y2, int(v))
        return None


def identity_functor(C: FiniteCategory) -> FiniteFunctor:
    return FiniteFunctor(
        C,
        C,
        {x: x for x in C.objects},
        {(x, y): np.arange(C.sizes[(x, y)]) for x, y in product(C.objects, repeat=2)},
    )
