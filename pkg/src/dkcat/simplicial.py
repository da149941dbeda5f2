"""Truncated simplicial modules and the Dold-Kan pair.

A :class:`SimplicialModule` stores levels ``0..L`` with faces
``d_i: M_n -> M_{n-1}`` and degeneracies ``s_i: M_n -> M_{n+1}`` (the latter
only for ``n < L``).  Monotone maps ``theta: [n'] -> [n]`` are tuples of
values; ``M.operator(theta)`` is the induced ``M_n -> M_{n'}``.

``normalize`` uses ``N_n = ker d_1 cap ... cap ker d_n`` with boundary
``d_0``.  ``gamma`` puts one copy of ``C_m`` at level ``n`` for every monotone
surjection ``[n] -> [m]``; a surjection is encoded by the bitmask of the
positions ``i`` with ``sigma(i + 1) = sigma(i) + 1``, and summands are ordered
by ``(m, mask)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Optional, Sequence

import numpy as np

from .chains import ChainComplex, ChainMap, StructuralError, homology_data, is_fibration, is_quasi_iso, tensor, tensor_blocks
from .linalg import Field, Matrix, block_diag, hstack, image_basis, kernel_basis, kron, quotient, vstack

Theta = tuple[int, ...]


def face_theta(n: int, i: int) -> Theta:
    """The coface ``[n-1] -> [n]`` skipping ``i``."""
    return tuple(j if j < i else j + 1 for j in range(n))


def degeneracy_theta(n: int, i: int) -> Theta:
    """The codegeneracy ``[n+1] -> [n]`` hitting ``i`` twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def epi_mono(theta: Theta) -> tuple[Theta, Theta]:
    """``theta = eta o tau`` with ``tau`` surjective and ``eta`` injective."""
    image = sorted(set(theta))
    pos = {v: k for k, v in enumerate(image)}
    return tuple(pos[v] for v in theta), tuple(image)


def surjection_from_mask(n: int, mask: int) -> Theta:
    vals = [0]
    for i in range(n):
        vals.append(vals[-1] + ((mask >> i) & 1))
    return tuple(vals)


def mask_of_surjection(sigma: Theta) -> int:
    return sum(1 << i for i in range(len(sigma) - 1) if sigma[i + 1] != sigma[i])


@lru_cache(maxsize=None)
def surjections(n: int, m: int) -> tuple[int, ...]:
    """Masks of the surjections ``[n] -> [m]`` in ascending order."""
    if m > n or m < 0:
        return ()
    return tuple(sorted(sum(1 << i for i in c) for c in combinations(range(n), m)))


class SimplicialModule:
    __slots__ = ("field", "ranks", "faces", "degens", "_ops", "_hash")

    def __init__(self, field: Field, ranks: Sequence[int], faces: Sequence[Sequence[Matrix]], degens: Sequence[Sequence[Matrix]]):
        ranks = tuple(int(r) for r in ranks)
        L = len(ranks) - 1
        if L < 0:
            raise ValueError("a simplicial module needs at least level 0")
        if len(faces) != L or len(degens) != L:
            raise ValueError(f"expected {L} levels of faces and degeneracies")
        for n in range(1, L + 1):
            fs = faces[n - 1]
            if len(fs) != n + 1:
                raise ValueError(f"level {n} needs {n + 1} faces")
            for m in fs:
                if m.shape != (ranks[n - 1], ranks[n]):
                    raise ValueError(f"face at level {n} has shape {m.shape}")
        for n in range(0, L):
            ss = degens[n]
            if len(ss) != n + 1:
                raise ValueError(f"level {n} needs {n + 1} degeneracies")
            for m in ss:
                if m.shape != (ranks[n + 1], ranks[n]):
                    raise ValueError(f"degeneracy at level {n} has shape {m.shape}")
        self.field = field
        self.ranks = ranks
        self.faces = tuple(tuple(fs) for fs in faces)
        self.degens = tuple(tuple(ss) for ss in degens)
        self._ops: dict[Theta, Matrix] = {}
        self._hash = None

    @property
    def level(self) -> int:
        return len(self.ranks) - 1

    def rank(self, n: int) -> int:
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    def face(self, n: int, i: int) -> Matrix:
        """``d_i: M_n -> M_{n-1}``."""
        return self.faces[n - 1][i]

    def degeneracy(self, n: int, i: int) -> Matrix:
        """``s_i: M_n -> M_{n+1}``."""
        return self.degens[n][i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialModule):
            return NotImplemented
        return (
            self.field == other.field
            and self.ranks == other.ranks
            and self.faces == other.faces
            and self.degens == other.degens
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.ranks, self.faces, self.degens))
        return self._hash

    def __repr__(self) -> str:
        return f"SimplicialModule({self.field}, ranks={list(self.ranks)})"

    def apply(self, theta: Theta, n: int) -> Matrix:
        """``M(theta)`` for ``theta: [len(theta)-1] -> [n]``."""
        key = (theta, n)
        hit = self._ops.get(key)  # type: ignore[arg-type]
        if hit is not None:
            return hit
        tau, eta = epi_mono(theta)
        out = self._surjection_op(tau) @ self._injection_op(eta, n)
        self._ops[key] = out  # type: ignore[index]
        return out

    def _injection_op(self, eta: Theta, n: int) -> Matrix:
        if len(eta) == n + 1:
            return Matrix.identity(self.field, self.rank(n))
        missing = [j for j in range(n + 1) if j not in set(eta)]
        j = missing[-1]
        inner = tuple(v if v < j else v - 1 for v in eta)
        return self._injection_op(inner, n - 1) @ self.face(n, j)

    def _surjection_op(self, tau: Theta) -> Matrix:
        n = len(tau) - 1
        reps = [i for i in range(n) if tau[i] == tau[i + 1]]
        if not reps:
            return Matrix.identity(self.field, self.rank(n))
        i = reps[-1]
        inner = tau[: i + 1] + tau[i + 2 :]
        if n - 1 >= self.level:
            raise StructuralError("operator leaves the truncation range")
        return self.degeneracy(n - 1, i) @ self._surjection_op(inner)

    def identity_failures(self) -> list[str]:
        """Simplicial identities that fail, as readable labels."""
        bad = []
        L = self.level
        d, s = self.face, self.degeneracy
        for n in range(2, L + 1):
            for j in range(n + 1):
                for i in range(j):
                    if d(n - 1, i) @ d(n, j) != d(n - 1, j - 1) @ d(n, i):
                        bad.append(f"d{i}d{j}=d{j - 1}d{i} at level {n}")
        for n in range(0, L):
            k = self.field
            ident = Matrix.identity(k, self.rank(n))
            for j in range(n + 1):
                if d(n + 1, j) @ s(n, j) != ident or d(n + 1, j + 1) @ s(n, j) != ident:
                    bad.append(f"d{j}s{j}=d{j + 1}s{j}=id at level {n}")
                for i in range(n + 2):
                    if i < j:
                        if d(n + 1, i) @ s(n, j) != s(n - 1, j - 1) @ d(n, i):
                            bad.append(f"d{i}s{j}=s{j - 1}d{i} at level {n}")
                    elif i > j + 1:
                        if d(n + 1, i) @ s(n, j) != s(n - 1, j) @ d(n, i - 1):
                            bad.append(f"d{i}s{j}=s{j}d{i - 1} at level {n}")
            if n + 2 <= L:
                for j in range(n + 1):
                    for i in range(j + 1):
                        if s(n + 1, i) @ s(n, j) != s(n + 1, j + 1) @ s(n, i):
                            bad.append(f"s{i}s{j}=s{j + 1}s{i} at level {n}")
        return bad

    def is_valid(self) -> bool:
        return not self.identity_failures()

    @classmethod
    def constant(cls, field: Field, level: int, rank: int = 1) -> "SimplicialModule":
        """The constant module; with ``rank=1`` this is the unit ``ck``."""
        I = Matrix.identity(field, rank)
        return cls(
            field,
            [rank] * (level + 1),
            [[I] * (n + 1) for n in range(1, level + 1)],
            [[I] * (n + 1) for n in range(level)],
        )


class SimplicialMap:
    __slots__ = ("source", "target", "levels", "_hash")

    def __init__(self, source: SimplicialModule, target: SimplicialModule, levels: Sequence[Matrix]):
        if source.level != target.level:
            raise ValueError("truncation levels differ")
        if len(levels) != source.level + 1:
            raise ValueError("one matrix per level is required")
        for n, m in enumerate(levels):
            if m.shape != (target.rank(n), source.rank(n)):
                raise ValueError(f"level {n} matrix has shape {m.shape}")
        self.source = source
        self.target = target
        self.levels = tuple(levels)
        self._hash = None

    @property
    def field(self) -> Field:
        return self.source.field

    def __getitem__(self, n: int) -> Matrix:
        return self.levels[n]

    def component(self, n: int) -> Matrix:
        return self.levels[n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.levels == other.levels

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.levels))
        return self._hash

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        if first.target != self.source:
            raise ValueError("maps are not composable")
        return SimplicialMap(first.source, self.target, [a @ b for a, b in zip(self.levels, first.levels)])

    __matmul__ = compose

    def __add__(self, other: "SimplicialMap") -> "SimplicialMap":
        return SimplicialMap(self.source, self.target, [a + b for a, b in zip(self.levels, other.levels)])

    def __sub__(self, other: "SimplicialMap") -> "SimplicialMap":
        return SimplicialMap(self.source, self.target, [a - b for a, b in zip(self.levels, other.levels)])

    def scale(self, s) -> "SimplicialMap":
        return SimplicialMap(self.source, self.target, [a.scale(s) for a in self.levels])

    def commutation_defects(self) -> list[str]:
        bad = []
        S, T = self.source, self.target
        for n in range(1, S.level + 1):
            for i in range(n + 1):
                if self[n - 1] @ S.face(n, i) != T.face(n, i) @ self[n]:
                    bad.append(f"d{i} at level {n}")
        for n in range(S.level):
            for i in range(n + 1):
                if self[n + 1] @ S.degeneracy(n, i) != T.degeneracy(n, i) @ self[n]:
                    bad.append(f"s{i} at level {n}")
        return bad

    def is_simplicial(self) -> bool:
        return not self.commutation_defects()

    def is_injective(self) -> bool:
        return all(m.is_injective() for m in self.levels)

    def is_surjective(self) -> bool:
        return all(m.is_surjective() for m in self.levels)

    def is_iso(self) -> bool:
        return all(m.is_invertible() for m in self.levels)

    def inverse(self) -> "SimplicialMap":
        if not self.is_iso():
            raise StructuralError("simplicial map is not an isomorphism")
        return SimplicialMap(self.target, self.source, [m.inverse() for m in self.levels])

    def apply0(self, v) -> np.ndarray:
        return self[0] @ v


def smod_identity(M: SimplicialModule) -> SimplicialMap:
    return SimplicialMap(M, M, [Matrix.identity(M.field, r) for r in M.ranks])


def smod_zero_map(M: SimplicialModule, N: SimplicialModule) -> SimplicialMap:
    return SimplicialMap(M, N, [Matrix.zeros(M.field, N.rank(n), M.rank(n)) for n in range(M.level + 1)])


def smod_element_map(M: SimplicialModule, v) -> SimplicialMap:
    """``ck -> M`` sending ``1`` to the iterated degeneracies of the vertex ``v``."""
    ck = SimplicialModule.constant(M.field, M.level)
    cols = [M.apply(tuple([0] * (n + 1)), 0) @ Matrix.column(M.field, v) for n in range(M.level + 1)]
    return SimplicialMap(ck, M, cols)


def smod_first_difference(f: SimplicialMap, g: SimplicialMap) -> Optional[dict]:
    for n, (a, b) in enumerate(zip(f.levels, g.levels)):
        if a != b:
            i, j = map(int, np.argwhere(a.a != b.a)[0])
            return {"level": n, "row": i, "col": j, "lhs": f.field.format(a.a[i, j]), "rhs": f.field.format(b.a[i, j])}
    return None


def smod_tensor(A: SimplicialModule, B: SimplicialModule) -> SimplicialModule:
    """Pointwise tensor product (levelwise Kronecker products)."""
    return _smod_tensor(A, B)


@lru_cache(maxsize=1024)
def _smod_tensor(A: SimplicialModule, B: SimplicialModule) -> SimplicialModule:
    if A.level != B.level:
        raise ValueError("truncation levels differ")
    L = A.level
    return SimplicialModule(
        A.field,
        [A.rank(n) * B.rank(n) for n in range(L + 1)],
        [[kron(A.face(n, i), B.face(n, i)) for i in range(n + 1)] for n in range(1, L + 1)],
        [[kron(A.degeneracy(n, i), B.degeneracy(n, i)) for i in range(n + 1)] for n in range(L)],
    )


def smod_tensor_maps(f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    return SimplicialMap(
        smod_tensor(f.source, g.source),
        smod_tensor(f.target, g.target),
        [kron(a, b) for a, b in zip(f.levels, g.levels)],
    )


def smod_direct_sum(*Ms: SimplicialModule) -> SimplicialModule:
    k = Ms[0].field
    L = Ms[0].level
    return SimplicialModule(
        k,
        [sum(M.rank(n) for M in Ms) for n in range(L + 1)],
        [[block_diag(k, [M.face(n, i) for M in Ms]) for i in range(n + 1)] for n in range(1, L + 1)],
        [[block_diag(k, [M.degeneracy(n, i) for M in Ms]) for i in range(n + 1)] for n in range(L)],
    )


def smod_copairing(maps: Sequence[SimplicialMap]) -> SimplicialMap:
    T = maps[0].target
    S = smod_direct_sum(*[f.source for f in maps])
    return SimplicialMap(S, T, [hstack(T.field, [f[n] for f in maps], rows=T.rank(n)) for n in range(T.level + 1)])


def smod_pairing(maps: Sequence[SimplicialMap]) -> SimplicialMap:
    W = maps[0].source
    S = smod_direct_sum(*[f.target for f in maps])
    return SimplicialMap(W, S, [vstack(W.field, [f[n] for f in maps], cols=W.rank(n)) for n in range(W.level + 1)])


@dataclass
class SmodColimit:
    obj: SimplicialModule
    injections: list[SimplicialMap]
    quotients: list
    relation_mats: list

    def desc(self, maps: Sequence[SimplicialMap]) -> SimplicialMap:
        T = maps[0].target
        k = T.field
        levels = []
        for n in range(T.level + 1):
            row = hstack(k, [f[n] for f in maps], rows=T.rank(n))
            W = self.relation_mats[n]
            if W.cols and not (row @ W).is_zero():
                raise StructuralError(f"cocone does not respect the gluing at level {n}")
            levels.append(row @ self.quotients[n].section)
        return SimplicialMap(self.obj, T, levels)


def smod_pushout(f: SimplicialMap, g: SimplicialMap) -> SmodColimit:
    """Levelwise cokernel of ``(f, -g)`` with induced faces and degeneracies."""
    if f.source != g.source:
        raise ValueError("pushout legs have different domains")
    A, B = f.target, g.target
    k = f.field
    L = A.level
    qs, Ws = [], []
    for n in range(L + 1):
        W = vstack(k, [f[n], -g[n]], cols=f.source.rank(n))
        qs.append(quotient(W))
        Ws.append(W)
    faces = [
        [qs[n - 1].proj @ block_diag(k, [A.face(n, i), B.face(n, i)]) @ qs[n].section for i in range(n + 1)]
        for n in range(1, L + 1)
    ]
    degens = [
        [qs[n + 1].proj @ block_diag(k, [A.degeneracy(n, i), B.degeneracy(n, i)]) @ qs[n].section for i in range(n + 1)]
        for n in range(L)
    ]
    P = SimplicialModule(k, [q.proj.rows for q in qs], faces, degens)
    inj = []
    for idx, X in enumerate((A, B)):
        levels = []
        for n in range(L + 1):
            lo = 0 if idx == 0 else A.rank(n)
            levels.append(qs[n].proj.submatrix(cols=list(range(lo, lo + X.rank(n)))))
        inj.append(SimplicialMap(X, P, levels))
    return SmodColimit(P, inj, qs, Ws)


# ---------------------------------------------------------------- Dold-Kan


class NormalizedData:
    """Basis of ``N_n`` inside ``M_n`` and the projection killing degeneracies."""

    def __init__(self, M: SimplicialModule):
        k = M.field
        self.module = M
        self.basis: list[Matrix] = []
        self.basis_inv: list[Matrix] = []
        for n in range(M.level + 1):
            if n == 0:
                K = Matrix.identity(k, M.rank(0))
            else:
                K = kernel_basis(vstack(k, [M.face(n, i) for i in range(1, n + 1)], cols=M.rank(n)))
            self.basis.append(K)
            self.basis_inv.append(K.left_inverse())
        bds = [self.basis_inv[n - 1] @ M.face(n, 0) @ self.basis[n] for n in range(1, M.level + 1)]
        self.complex = ChainComplex(k, [K.cols for K in self.basis], bds)
        self._proj: dict[int, Matrix] = {}

    def projection(self, n: int) -> Matrix:
        """``M_n -> N_n`` along the degenerate subspace, in ``N_n`` coordinates."""
        hit = self._proj.get(n)
        if hit is not None:
            return hit
        M = self.module
        k = M.field
        K = self.basis[n]
        if n == 0:
            P = Matrix.identity(k, M.rank(0))
        else:
            D = image_basis(hstack(k, [M.degeneracy(n - 1, j) for j in range(n)], rows=M.rank(n)))
            full = hstack(k, [K, D], rows=M.rank(n))
            if not full.is_invertible():
                raise StructuralError(f"normalized and degenerate parts do not split level {n}")
            P = full.inverse().submatrix(rows=list(range(K.cols)))
        self._proj[n] = P
        return P


@lru_cache(maxsize=1024)
def normalized_data(M: SimplicialModule) -> NormalizedData:
    return NormalizedData(M)


def normalize(M: SimplicialModule) -> ChainComplex:
    return normalized_data(M).complex


def normalize_map(f: SimplicialMap) -> ChainMap:
    src, tgt = normalized_data(f.source), normalized_data(f.target)
    comps = [tgt.basis_inv[n] @ f[n] @ src.basis[n] for n in range(f.source.level + 1)]
    return ChainMap(src.complex, tgt.complex, comps)


def gamma_summands(C_ranks: Sequence[int], n: int) -> list[tuple[int, int, int]]:
    """``(m, mask, offset)`` for the summands of ``Gamma(C)_n``."""
    out = []
    off = 0
    for m in range(0, min(n, len(C_ranks) - 1) + 1):
        for mask in surjections(n, m):
            out.append((m, mask, off))
            off += C_ranks[m]
    return out


def _gamma_op(C: ChainComplex, L: int, theta: Theta, n: int) -> Matrix:
    """``Gamma(C)(theta): Gamma(C)_n -> Gamma(C)_{n'}``."""
    k = C.field
    n2 = len(theta) - 1
    src = gamma_summands(C.ranks, n)
    tgt = {(m, mask): off for m, mask, off in gamma_summands(C.ranks, n2)}
    rows = sum(C.rank(m) for m, _, _ in gamma_summands(C.ranks, n2))
    cols = sum(C.rank(m) for m, _, _ in src)
    out = k.zeros((rows, cols))
    for m, mask, off in src:
        r = C.rank(m)
        if not r:
            continue
        sigma = surjection_from_mask(n, mask)
        comp = tuple(sigma[t] for t in theta)
        tau, eta = epi_mono(comp)
        kk = len(eta) - 1
        if kk == m:
            block = Matrix.identity(k, r)
        elif kk == m - 1 and eta == tuple(range(1, m + 1)):
            block = C.d(m)
        else:
            continue
        if kk > C.top:
            continue
        to = tgt[(kk, mask_of_surjection(tau))]
        out[to : to + block.rows, off : off + block.cols] += block.a
    return Matrix(k, k.reduce(out))


def gamma(C: ChainComplex, level: Optional[int] = None, *, allow_truncation: bool = False) -> SimplicialModule:
    """Dold-Kan ``Gamma``, truncated at ``level`` (default: the top degree of ``C``)."""
    L = C.top if level is None else level
    if L < C.top and not allow_truncation:
        raise StructuralError(f"truncation level {L} is below the top degree {C.top}")
    if L > C.top or L == C.top:
        return _gamma(C, L)
    # drop the degrees above L; Gamma at levels <= L never sees them
    cut = ChainComplex(C.field, C.ranks[: L + 1], C.boundaries[:L])
    return _gamma(cut, L)


@lru_cache(maxsize=1024)
def _gamma(C: ChainComplex, L: int) -> SimplicialModule:
    ranks = [sum(C.rank(m) for m, _, _ in gamma_summands(C.ranks, n)) for n in range(L + 1)]
    faces = [[_gamma_op(C, L, face_theta(n, i), n) for i in range(n + 1)] for n in range(1, L + 1)]
    degens = [[_gamma_op(C, L, degeneracy_theta(n, i), n) for i in range(n + 1)] for n in range(L)]
    return SimplicialModule(C.field, ranks, faces, degens)


def gamma_map(f: ChainMap, level: Optional[int] = None, *, allow_truncation: bool = False) -> SimplicialMap:
    L = max(f.source.top, f.target.top) if level is None else level
    S = gamma(f.source, L, allow_truncation=allow_truncation)
    T = gamma(f.target, L, allow_truncation=allow_truncation)
    k = f.field
    levels = []
    for n in range(L + 1):
        tgt = {(m, mask): off for m, mask, off in gamma_summands(T_ranks(f.target, L), n)}
        out = k.zeros((T.rank(n), S.rank(n)))
        for m, mask, off in gamma_summands(T_ranks(f.source, L), n):
            blk = f[m]
            if not blk.rows or not blk.cols:
                continue
            to = tgt[(m, mask)]
            out[to : to + blk.rows, off : off + blk.cols] = blk.a
        levels.append(Matrix(k, out))
    return SimplicialMap(S, T, levels)


def T_ranks(C: ChainComplex, L: int) -> tuple[int, ...]:
    return tuple(C.rank(m) for m in range(min(C.top, L) + 1))


def dold_kan_counit(M: SimplicialModule) -> SimplicialMap:
    """The isomorphism ``Gamma(N(M)) -> M``; summand ``sigma`` maps by ``M(sigma)``."""
    nd = normalized_data(M)
    N = nd.complex
    G = gamma(N, M.level)
    k = M.field
    levels = []
    for n in range(M.level + 1):
        cols = []
        for m, mask, _ in gamma_summands(N.ranks, n):
            if not N.rank(m):
                continue
            sigma = surjection_from_mask(n, mask)
            cols.append(M.apply(sigma, m) @ nd.basis[m])
        levels.append(hstack(k, cols, rows=M.rank(n)))
    return SimplicialMap(G, M, levels)


# --------------------------------------------------- monoidal comparisons


def _shuffles(p: int, q: int):
    """``(mu, nu, sign)`` over the ``(p, q)``-shuffles of ``{0..p+q-1}``."""
    n = p + q
    for mu in combinations(range(n), p):
        nu = tuple(x for x in range(n) if x not in mu)
        perm = list(mu) + list(nu)
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        yield mu, nu, -1 if inv % 2 else 1


def _degeneracy_word(M: SimplicialModule, start: int, word: Sequence[int]) -> Matrix:
    """``s_{w_r} ... s_{w_1}`` starting at level ``start``."""
    out = Matrix.identity(M.field, M.rank(start))
    lvl = start
    for j in word:
        out = M.degeneracy(lvl, j) @ out
        lvl += 1
    return out


def shuffle(A: SimplicialModule, B: SimplicialModule, *, sign_fault: bool = False) -> ChainMap:
    """Eilenberg-Zilber ``N(A) (x) N(B) -> N(A (x) B)``.

    ``a (x) b -> sum sgn(mu, nu) s_nu(a) (x) s_mu(b)``, projected onto the
    normalized part.  ``sign_fault`` drops the shuffle signs (used for
    mutation tests only).
    """
    k = A.field
    na, nb = normalized_data(A), normalized_data(B)
    AB = smod_tensor(A, B)
    nab = normalized_data(AB)
    src = tensor(na.complex, nb.complex)
    tgt = nab.complex
    L = A.level
    comps = []
    for n in range(src.top + 1):
        out = k.zeros((tgt.rank(n), src.rank(n)))
        if n <= L:
            for p, q, off in tensor_blocks(na.complex.ranks, nb.complex.ranks, n):
                size = na.complex.rank(p) * nb.complex.rank(q)
                if not size:
                    continue
                acc = Matrix.zeros(k, AB.rank(n), size)
                for mu, nu, sgn in _shuffles(p, q):
                    if sign_fault:
                        sgn = 1
                    left = _degeneracy_word(A, p, nu) @ na.basis[p]
                    right = _degeneracy_word(B, q, mu) @ nb.basis[q]
                    term = kron(left, right)
                    acc = acc + (term if sgn > 0 else -term)
                out[:, off : off + size] = (nab.projection(n) @ acc).a
        comps.append(Matrix(k, out))
    return ChainMap(src, tgt, comps)


def alexander_whitney(A: SimplicialModule, B: SimplicialModule) -> ChainMap:
    """``N(A (x) B) -> N(A) (x) N(B)``, ``a (x) b -> sum_i (front_i a) (x) (back_{n-i} b)``."""
    k = A.field
    na, nb = normalized_data(A), normalized_data(B)
    AB = smod_tensor(A, B)
    nab = normalized_data(AB)
    src = nab.complex
    tgt = tensor(na.complex, nb.complex)
    comps = []
    for n in range(src.top + 1):
        out = k.zeros((tgt.rank(n), src.rank(n)))
        for i, j, off in tensor_blocks(na.complex.ranks, nb.complex.ranks, n):
            size = na.complex.rank(i) * nb.complex.rank(j)
            if not size:
                continue
            front = na.projection(i) @ A.apply(tuple(range(i + 1)), n)
            back = nb.projection(j) @ B.apply(tuple(range(i, n + 1)), n)
            blk = kron(front, back) @ nab.basis[n]
            out[off : off + size, :] = blk.a
        comps.append(Matrix(k, out))
    return ChainMap(src, tgt, comps)


def gamma_lax(C: ChainComplex, D: ChainComplex, level: int) -> SimplicialMap:
    """``Gamma(C) (x) Gamma(D) -> Gamma(C (x) D)``: ``Gamma(AW)`` after ``(Gamma N M -> M)^{-1}``."""
    GC = gamma(C, level, allow_truncation=True)
    GD = gamma(D, level, allow_truncation=True)
    X = smod_tensor(GC, GD)
    psi = dold_kan_counit(X)
    aw = alexander_whitney(GC, GD)
    CD = _cut(tensor(C, D), level)
    if any(aw.target.rank(n) != CD.rank(n) for n in range(aw.source.top + 1)):
        raise StructuralError("normalize(gamma(C)) does not reproduce C")
    aw = ChainMap(aw.source, CD, [aw[n] for n in range(aw.source.top + 1)])
    return gamma_map(aw, level, allow_truncation=True) @ psi.inverse()


def _cut(C: ChainComplex, L: int) -> ChainComplex:
    if C.top <= L:
        return C
    return ChainComplex(C.field, C.ranks[: L + 1], C.boundaries[:L])


# ---------------------------------------------------------- predicates


def is_weak_equivalence_smod(f: SimplicialMap) -> bool:
    return is_quasi_iso(normalize_map(f))


def is_fibration_smod(f: SimplicialMap) -> bool:
    """Simplicial modules are simplicial groups, so Kan fibrations are detected on ``N``."""
    return is_fibration(normalize_map(f))


def is_cofibration_smod(f: SimplicialMap) -> bool:
    return f.is_injective()


def is_trivial_fibration_smod(f: SimplicialMap) -> bool:
    g = normalize_map(f)
    return is_fibration(g) and is_quasi_iso(g)


# ---------------------------------------------------------- simplicial sets


class FiniteSimplicialSet:
    """Finite truncated simplicial set given by face and degeneracy tables."""

    def __init__(self, sizes: Sequence[int], faces: Sequence[Sequence[Sequence[int]]], degens: Sequence[Sequence[Sequence[int]]]):
        self.sizes = tuple(int(s) for s in sizes)
        L = len(self.sizes) - 1
        if len(faces) != L or len(degens) != L:
            raise ValueError(f"expected {L} levels of faces and degeneracies")
        self.faces = tuple(tuple(tuple(t) for t in fs) for fs in faces)
        self.degens = tuple(tuple(tuple(t) for t in ss) for ss in degens)
        for n in range(1, L + 1):
            if len(self.faces[n - 1]) != n + 1 or any(len(t) != self.sizes[n] for t in self.faces[n - 1]):
                raise ValueError(f"bad face tables at level {n}")
        for n in range(L):
            if len(self.degens[n]) != n + 1 or any(len(t) != self.sizes[n] for t in self.degens[n]):
                raise ValueError(f"bad degeneracy tables at level {n}")

    @property
    def level(self) -> int:
        return len(self.sizes) - 1

    def identity_failures(self) -> list[str]:
        M = free_module(self, Field(2))
        return M.identity_failures()

    @classmethod
    def standard_simplex(cls, k: int, level: int) -> "FiniteSimplicialSet":
        """``Delta[k]``: level ``n`` is the monotone maps ``[n] -> [k]`` in lexicographic order."""
        levels = [sorted(_monotone(n, k)) for n in range(level + 1)]
        index = [{s: i for i, s in enumerate(lv)} for lv in levels]
        faces = [
            [[index[n - 1][s[:i] + s[i + 1 :]] for s in levels[n]] for i in range(n + 1)]
            for n in range(1, level + 1)
        ]
        degens = [
            [[index[n + 1][s[: i + 1] + s[i:]] for s in levels[n]] for i in range(n + 1)]
            for n in range(level)
        ]
        return cls([len(lv) for lv in levels], faces, degens)

    @classmethod
    def point(cls, level: int) -> "FiniteSimplicialSet":
        return cls.standard_simplex(0, level)

    def product(self, other: "FiniteSimplicialSet") -> "FiniteSimplicialSet":
        """Levelwise product; ``(x, y)`` sits at ``x * |Y_n| + y``."""
        if self.level != other.level:
            raise ValueError("truncation levels differ")
        L = self.level
        sx, sy = self.sizes, other.sizes
        faces = [
            [
                [self.faces[n - 1][i][x] * sy[n - 1] + other.faces[n - 1][i][y] for x in range(sx[n]) for y in range(sy[n])]
                for i in range(n + 1)
            ]
            for n in range(1, L + 1)
        ]
        degens = [
            [
                [self.degens[n][i][x] * sy[n + 1] + other.degens[n][i][y] for x in range(sx[n]) for y in range(sy[n])]
                for i in range(n + 1)
            ]
            for n in range(L)
        ]
        return FiniteSimplicialSet([a * b for a, b in zip(sx, sy)], faces, degens)


def _monotone(n: int, k: int):
    for combo in product(range(k + 1), repeat=n + 1):
        if all(combo[i] <= combo[i + 1] for i in range(n)):
            yield combo


def _table_matrix(field: Field, table: Sequence[int], rows: int) -> Matrix:
    out = field.zeros((rows, len(table)))
    for col, row in enumerate(table):
        out[row, col] = field.scalar(1)
    return Matrix(field, out)


def free_module(X: FiniteSimplicialSet, field: Field) -> SimplicialModule:
    L = X.level
    return SimplicialModule(
        field,
        X.sizes,
        [[_table_matrix(field, X.faces[n - 1][i], X.sizes[n - 1]) for i in range(n + 1)] for n in range(1, L + 1)],
        [[_table_matrix(field, X.degens[n][i], X.sizes[n + 1]) for i in range(n + 1)] for n in range(L)],
    )


# -------------------------------------------------------------- pi_0


@dataclass(frozen=True)
class Pi0:
    """``pi_0`` of the underlying simplicial set: cosets of ``im(d_0 - d_1)`` in ``M_0``."""

    field: Field
    representatives: tuple[tuple[int, ...], ...]
    proj: Matrix
    section: Matrix

    def __len__(self) -> int:
        return len(self.representatives)

    def index(self, v) -> int:
        """Index of the component containing the vertex ``v``."""
        c = self.proj @ np.asarray(v)
        return _encode(c, self.field.order)


def _encode(vec, p: int) -> int:
    idx = 0
    for x in vec:
        idx = idx * p + int(x)
    return idx


def pi0_underlying(M: SimplicialModule) -> Pi0:
    k = M.field
    if not k.is_finite:
        raise StructuralError("pi_0 of a rational simplicial module is infinite")
    if M.level == 0:
        rel = Matrix.zeros(k, M.rank(0), 0)
    else:
        rel = M.face(1, 0) - M.face(1, 1)
    q = quotient(rel)
    dim = q.proj.rows
    reps = []
    for coeffs in product(range(k.order), repeat=dim):
        v = q.section @ k.array(list(coeffs)) if dim else k.zeros((M.rank(0),))
        reps.append(tuple(int(x) for x in v))
    return Pi0(k, tuple(reps), q.proj, q.section)


def eta_bijection(M: SimplicialModule) -> dict[int, int]:
    """``H_0(N M) -> pi_0(U M)`` on class indices; raises unless it is a bijection."""
    k = M.field
    N = normalize(M)
    hd = homology_data(N, 0)
    pi = pi0_underlying(M)
    out = {}
    for idx, coeffs in enumerate(product(range(k.order), repeat=hd.dim)):
        rep = hd.reps @ k.array(list(coeffs)) if hd.dim else k.zeros((M.rank(0),))
        out[idx] = pi.index(rep)
    if sorted(out.values()) != list(range(len(pi))):
        raise StructuralError("H_0(N M) -> pi_0(M) is not a bijection")
    return out
