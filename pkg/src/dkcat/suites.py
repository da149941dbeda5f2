"""Seeded random inputs and the property suites run by the CLI and tests.

Every generator takes a ``random.Random`` so a seed fixes the whole run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from . import chains as ch
from . import finite_cats as fc
from . import enriched as en
from . import simplicial as sm
from .chains import ChainComplex, ChainMap, StructuralError
from .linalg import Field, Matrix, kernel_basis


def random_matrix(rng: random.Random, k: Field, rows: int, cols: int, span: int = 3) -> Matrix:
    if k.is_finite:
        vals = [[rng.randrange(k.order) for _ in range(cols)] for _ in range(rows)]
    else:
        vals = [[rng.randint(-span, span) for _ in range(cols)] for _ in range(rows)]
    return Matrix(k, vals, shape=(rows, cols))


def random_invertible(rng: random.Random, k: Field, n: int) -> Matrix:
    while True:
        m = random_matrix(rng, k, n, n)
        if m.is_invertible():
            return m


def random_complex(rng: random.Random, k: Field, max_degree: int, max_rank: int) -> ChainComplex:
    """Random ranks up to a random top degree; each boundary lands in the cycles."""
    top = rng.randint(0, max_degree)
    ranks = [rng.randint(0, max_rank) for _ in range(top + 1)]
    bds = []
    for n in range(1, top + 1):
        Z = kernel_basis(bds[-1]) if bds else Matrix.identity(k, ranks[0])
        coeffs = random_matrix(rng, k, Z.cols, ranks[n])
        bds.append(Z @ coeffs)
    return ChainComplex(k, ranks, bds)


def random_chain_map(rng: random.Random, C: ChainComplex, D: ChainComplex) -> ChainMap:
    """A uniformly random element of the space of chain maps ``C -> D``.

    Chain maps are the kernel of ``(f_n) -> (d f_n - f_{n-1} d)`` on the
    vectorized components; a random combination of a kernel basis is taken.
    """
    k = C.field
    top = max(C.top, D.top)
    shapes = [(D.rank(n), C.rank(n)) for n in range(top + 1)]
    offs = [0]
    for r, c in shapes:
        offs.append(offs[-1] + r * c)
    rows = sum(D.rank(n - 1) * C.rank(n) for n in range(1, top + 1))
    Phi = k.zeros((rows, offs[-1]))
    row = 0
    for n in range(1, top + 1):
        dD, dC = D.d(n).a, C.d(n).a
        r, c = shapes[n]
        for i in range(D.rank(n - 1)):
            for j in range(c):
                # (d f_n)[i, j] = sum_a dD[i, a] f_n[a, j]
                for a_ in range(r):
                    Phi[row, offs[n] + a_ * c + j] += dD[i, a_]
                # (f_{n-1} d)[i, j] = sum_b f_{n-1}[i, b] dC[b, j]
                pc = shapes[n - 1][1]
                for b_ in range(pc):
                    Phi[row, offs[n - 1] + i * pc + b_] -= dC[b_, j]
                row += 1
    K = kernel_basis(Matrix(k, k.reduce(Phi), shape=(rows, offs[-1])))
    vec = K @ random_matrix(rng, k, K.cols, 1) if K.cols else Matrix.zeros(k, offs[-1], 1)
    v = vec.a[:, 0]
    comps = [Matrix(k, v[offs[n] : offs[n + 1]].reshape(shapes[n]), shape=shapes[n]) if shapes[n][0] * shapes[n][1] else Matrix.zeros(k, *shapes[n]) for n in range(top + 1)]
    return ChainMap(C, D, comps)


def conjugate(M: sm.SimplicialModule, isos: list[Matrix]) -> sm.SimplicialModule:
    """The same simplicial module written in a new basis ``isos[n]`` at each level."""
    inv = [g.inverse() for g in isos]
    L = M.level
    faces = [[isos[n - 1] @ M.face(n, i) @ inv[n] for i in range(n + 1)] for n in range(1, L + 1)]
    degens = [[isos[n + 1] @ M.degeneracy(n, i) @ inv[n] for i in range(n + 1)] for n in range(L)]
    return sm.SimplicialModule(M.field, M.ranks, faces, degens)


def random_smodule(rng: random.Random, k: Field, level: int, max_degree: int, max_rank: int) -> sm.SimplicialModule:
    """``Gamma`` of a random complex, re-expressed in random bases."""
    C = random_complex(rng, k, min(max_degree, level), max_rank)
    G = sm.gamma(C, level)
    return conjugate(G, [random_invertible(rng, k, G.rank(n)) for n in range(level + 1)])


# ----------------------------------------------------------------- Dold-Kan


@dataclass
class SuiteResult:
    name: str
    trials: int
    seed: int
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> Optional[int]:
        return self.failures[0]["trial"] if self.failures else None

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "first-failing-trial": self.first_failure,
            "failures": self.failures,
            "statistics": self.stats,
        }


def dold_kan_trial(rng: random.Random, k: Field, max_degree: int, max_rank: int, fault: Optional[str] = None) -> list[str]:
    """One trial; returns the names of the failing checks."""
    bad = []
    L = max(max_degree, 1)
    C = random_complex(rng, k, max_degree, max_rank)
    if not sm.normalize(sm.gamma(C, L)) == _pad(C, L):
        bad.append("normalize(gamma(C)) = C")
    M = random_smodule(rng, k, L, max_degree, max_rank)
    if not M.is_valid():
        bad.append("random simplicial module is valid")
        return bad
    psi = sm.dold_kan_counit(M)
    if not (psi.is_simplicial() and psi.is_iso()):
        bad.append("gamma(normalize(M)) -> M is an isomorphism")
    # the Eilenberg-Zilber pair on two small modules whose degrees fit below L
    p = rng.randint(0, L)
    A = random_smodule(rng, k, L, p, max_rank)
    B = random_smodule(rng, k, L, L - p, max_rank)
    sh = sm.shuffle(A, B, sign_fault=(fault == "shuffle-sign"))
    aw = sm.alexander_whitney(A, B)
    if not sh.is_chain_map():
        bad.append("shuffle is a chain map")
    if not aw.is_chain_map():
        bad.append("Alexander-Whitney is a chain map")
    if ch.first_difference(_restrict(aw @ sh, L), _restrict(ch.identity(sh.source), L)) is not None:
        bad.append("AW o shuffle = id")
    if k.is_finite:
        try:
            eta = sm.eta_bijection(M)
            H0 = ch.homology_data(sm.normalize(M), 0).dim
            if len(eta) != k.order ** H0 or len(sm.pi0_underlying(M)) != len(eta):
                bad.append("|pi_0(M)| = |H_0(N M)|")
        except StructuralError:
            bad.append("H_0(N M) -> pi_0(M) is a bijection")
    return bad


def _pad(C: ChainComplex, L: int) -> ChainComplex:
    if C.top >= L:
        return C
    ranks = list(C.ranks) + [0] * (L - C.top)
    bds = list(C.boundaries) + [Matrix.zeros(C.field, ranks[n - 1], 0) for n in range(C.top + 1, L + 1)]
    return ChainComplex(C.field, ranks, bds)


def _restrict(f: ChainMap, L: int) -> ChainMap:
    return ChainMap(f.source, f.target, [f[n] for n in range(L + 1)] + [Matrix.zeros(f.field, f.target.rank(n), f.source.rank(n)) for n in range(L + 1, max(f.source.top, f.target.top) + 1)])


def dold_kan_suite(trials: int, seed: int, max_degree: int, field: Field, max_rank: int = 3, fault: Optional[str] = None) -> SuiteResult:
    if fault not in (None, "shuffle-sign"):
        raise ValueError(f"unknown fault {fault!r}")
    master = random.Random(seed)
    res = SuiteResult("dold-kan", trials, seed)
    counts: dict = {}
    for t in range(trials):
        rng = random.Random(master.getrandbits(64))
        bad = dold_kan_trial(rng, field, max_degree, max_rank, fault)
        for name in bad:
            counts[name] = counts.get(name, 0) + 1
        if bad:
            res.failures.append({"trial": t, "checks": bad})
    res.stats = {"field": str(field), "max-degree": max_degree, "max-rank": max_rank, "fault": fault, "failing-checks": dict(sorted(counts.items()))}
    return res


# ------------------------------------------------- random enriched functors


def random_category(rng: random.Random, k: Field, max_objects: int = 3, max_rank: int = 2) -> en.EnrichedCategory:
    """A linearized small category, or a two-object category on a random complex."""
    n = rng.randint(1, max_objects)
    objs = tuple(range(n))
    kind = rng.choice(["codiscrete", "discrete", "poset", "cyclic", "two-object"])
    if kind == "two-object" and max_objects >= 2:
        return en.two_object(random_complex(rng, k, 1, max_rank))
    if kind == "codiscrete":
        C = fc.codiscrete(objs)
    elif kind == "discrete":
        C = fc.discrete(objs)
    elif kind == "cyclic":
        C = fc.cyclic_group(rng.randint(1, max_rank))
    else:
        sizes = {(x, y): int(x <= y) for x in objs for y in objs}
        comp = {(x, y, z): np.zeros((sizes[(x, y)], sizes[(y, z)]), dtype=np.int64) for x, y, z in product(objs, repeat=3)}
        C = fc.FiniteCategory(objs, sizes, comp, {x: 0 for x in objs})
    return en.linearize(C, k)


def random_functor(rng: random.Random, k: Field, max_objects: int = 3, max_rank: int = 2) -> en.EnrichedFunctor:
    """Random functors of a few shapes whose validity is guaranteed by construction."""
    kind = rng.choice(["identity", "collapse", "inclusion", "diagonal", "to-terminal", "linearized", "disk-map"])
    if kind == "identity":
        return en.identity_functor(random_category(rng, k, max_objects, max_rank))
    if kind == "collapse":
        C = random_complex(rng, k, 1, max_rank)
        return en.collapse(random_chain_map(rng, C, ChainComplex.unit(k)))
    if kind == "inclusion":
        A = random_category(rng, k, max_objects, max_rank)
        x = rng.choice(A.objects)
        return en.object_inclusion(A, x)
    if kind == "diagonal":
        A = random_category(rng, k, 1, max_rank)
        return en.diagonal(A)
    if kind == "to-terminal":
        return en.to_terminal(random_category(rng, k, max_objects, max_rank))
    if kind == "linearized":
        m = rng.randint(1, max_objects)
        n = rng.randint(1, max_objects)
        S, T = fc.codiscrete(range(m)), fc.codiscrete(range(n))
        obj = {x: rng.randrange(n) for x in range(m)}
        mor = {(x, y): np.zeros(1, dtype=np.int64) for x in range(m) for y in range(m)}
        return en.linearize_functor(fc.FiniteFunctor(S, T, obj, mor), k)
    # a chain map between random complexes, seen as a functor of two-object categories
    C = random_complex(rng, k, 1, max_rank)
    D = random_complex(rng, k, 1, max_rank)
    f = random_chain_map(rng, C, D)
    return en.two_map(f)


def characterization_suite(trials: int, seed: int, field: Field, max_objects: int = 3, max_rank: int = 2) -> SuiteResult:
    master = random.Random(seed)
    res = SuiteResult("trivial-fibration-characterization", trials, seed)
    kinds = {"equal-true": 0, "equal-false": 0}
    for t in range(trials):
        rng = random.Random(master.getrandbits(64))
        F = random_functor(rng, field, max_objects, max_rank)
        rep = en.validate_functor(F)
        if not rep.valid:
            res.failures.append({"trial": t, "checks": ["generated functor is valid"], "witness": rep.witness})
            continue
        a, b = en.trivial_fibration_characterization(F)
        if a != b:
            res.failures.append({"trial": t, "checks": ["characterization pair is equal"], "pair": [a, b]})
        else:
            kinds["equal-true" if a else "equal-false"] += 1
    res.stats = {"field": str(field), "outcomes": kinds}
    return res
