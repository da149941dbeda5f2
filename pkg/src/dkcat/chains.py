"""Bounded non-negatively graded chain complexes of finite-rank free modules.

Conventions used everywhere in the package:

* ``C.d(n)`` is the boundary ``C_n -> C_{n-1}`` as a ``rank(n-1) x rank(n)``
  matrix.
* ``(C (x) D)_n`` is the direct sum of ``C_i (x) D_j`` over ``i + j = n`` in
  increasing ``i``; inside a summand the basis element ``c_a (x) d_b`` sits
  at ``a * rank D_j + b`` (the :func:`~dkcat.linalg.kron` convention).  The
  differential is ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``.
* The internal hom ``[C, D]`` has the graded maps of degree ``n`` in degrees
  ``n >= 1`` and the chain maps (degree-0 cycles) in degree 0.  A graded map
  is stored block by block, ``Hom(C_m, D_{m+n})`` for increasing ``m``, each
  block flattened row-major; the differential is
  ``phi -> d phi - (-1)^n phi d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .linalg import (
    Field,
    Matrix,
    block_diag,
    hstack,
    kernel_basis,
    kron,
    quotient,
    vstack,
)


class StructuralError(ValueError):
    """A construction was asked for something its inputs cannot support."""


class ChainComplex:
    __slots__ = ("field", "ranks", "_d", "_hash")

    def __init__(self, field: Field, ranks: Sequence[int], boundaries: Sequence[Matrix] = ()):
        ranks = [int(r) for r in ranks]
        if any(r < 0 for r in ranks):
            raise ValueError("ranks must be non-negative")
        while len(ranks) > 1 and ranks[-1] == 0:
            ranks.pop()
        if not ranks:
            ranks = [0]
        bds = list(boundaries)
        top = len(ranks) - 1
        if len(bds) < top:
            raise ValueError(f"need {top} boundary matrices, got {len(bds)}")
        for n, m in enumerate(bds[top:], start=top + 1):
            if m.cols != 0 and not m.is_zero():
                raise ValueError(f"nonzero boundary d_{n} beyond the top degree")
        bds = bds[:top]
        for n, m in enumerate(bds, start=1):
            if m.field != field:
                raise ValueError("field mismatch in boundary matrices")
            if m.shape != (ranks[n - 1], ranks[n]):
                raise ValueError(
                    f"d_{n} has shape {m.shape}, expected {(ranks[n - 1], ranks[n])}"
                )
        self.field = field
        self.ranks = tuple(ranks)
        self._d = tuple(bds)
        self._hash = None

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def rank(self, n: int) -> int:
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    def d(self, n: int) -> Matrix:
        if 1 <= n <= self.top:
            return self._d[n - 1]
        return Matrix.zeros(self.field, self.rank(n - 1), self.rank(n))

    @property
    def boundaries(self) -> tuple[Matrix, ...]:
        return self._d

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.field == other.field and self.ranks == other.ranks and self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.ranks, self._d))
        return self._hash

    def __repr__(self) -> str:
        return f"ChainComplex({self.field}, ranks={list(self.ranks)})"

    def validate(self) -> "ComplexReport":
        bad = [n for n in range(1, self.top) if not (self.d(n) @ self.d(n + 1)).is_zero()]
        return ComplexReport(not bad, bad)

    def is_valid(self) -> bool:
        return self.validate().valid

    @property
    def is_zero(self) -> bool:
        return self.ranks == (0,)

    # standard objects

    @classmethod
    def zero(cls, field: Field) -> "ChainComplex":
        return cls(field, [0])

    @classmethod
    def unit(cls, field: Field) -> "ChainComplex":
        return cls(field, [1])

    @classmethod
    def sphere(cls, field: Field, n: int) -> "ChainComplex":
        """``S^n``: rank one in degree ``n``; the zero complex for ``n < 0``."""
        if n < 0:
            return cls.zero(field)
        ranks = [0] * n + [1]
        return cls(field, ranks, [Matrix.zeros(field, ranks[k - 1], ranks[k]) for k in range(1, n + 1)])

    @classmethod
    def disk(cls, field: Field, n: int) -> "ChainComplex":
        """``D^n``: rank one in degrees ``n`` and ``n - 1`` joined by the identity; ``D^0 = I``."""
        if n == 0:
            return cls.unit(field)
        ranks = [0] * (n - 1) + [1, 1]
        bds = [Matrix.zeros(field, ranks[k - 1], ranks[k]) for k in range(1, n)]
        bds.append(Matrix.identity(field, 1))
        return cls(field, ranks, bds)


@dataclass(frozen=True)
class ComplexReport:
    valid: bool
    failing_degrees: list[int]


class ChainMap:
    """A degree-0 map of complexes given by one matrix per degree."""

    __slots__ = ("source", "target", "_c", "_hash")

    def __init__(self, source: ChainComplex, target: ChainComplex, components: Sequence[Matrix]):
        if source.field != target.field:
            raise ValueError("source and target live over different fields")
        comps = list(components)
        top = max(source.top, target.top)
        out = []
        for n in range(top + 1):
            want = (target.rank(n), source.rank(n))
            if n < len(comps):
                m = comps[n]
                if m.field != source.field:
                    raise ValueError("field mismatch in components")
                if m.shape != want:
                    raise ValueError(f"component {n} has shape {m.shape}, expected {want}")
                out.append(m)
            else:
                out.append(Matrix.zeros(source.field, *want))
        for n, m in enumerate(comps[top + 1 :], start=top + 1):
            if m.rows and m.cols:
                raise ValueError(f"component {n} beyond both top degrees")
        self.source = source
        self.target = target
        self._c = tuple(out)
        self._hash = None

    @property
    def field(self) -> Field:
        return self.source.field

    @property
    def top(self) -> int:
        return len(self._c) - 1

    def component(self, n: int) -> Matrix:
        if 0 <= n < len(self._c):
            return self._c[n]
        return Matrix.zeros(self.field, self.target.rank(n), self.source.rank(n))

    __getitem__ = component

    @property
    def components(self) -> tuple[Matrix, ...]:
        return self._c

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.source, self.target, self._c))
        return self._hash

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r})"

    def compose(self, first: "ChainMap") -> "ChainMap":
        """``self o first``."""
        if first.target != self.source:
            raise ValueError("maps are not composable")
        top = max(first.source.top, self.target.top)
        return ChainMap(first.source, self.target, [self[n] @ first[n] for n in range(top + 1)])

    def __matmul__(self, first: "ChainMap") -> "ChainMap":
        return self.compose(first)

    def _same_shape(self, other: "ChainMap") -> None:
        if self.source != other.source or self.target != other.target:
            raise ValueError("maps have different sources or targets")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._same_shape(other)
        return ChainMap(self.source, self.target, [a + b for a, b in zip(self._c, other._c)])

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._same_shape(other)
        return ChainMap(self.source, self.target, [a - b for a, b in zip(self._c, other._c)])

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, [-a for a in self._c])

    def scale(self, s) -> "ChainMap":
        return ChainMap(self.source, self.target, [a.scale(s) for a in self._c])

    def commutation_defects(self) -> list[int]:
        """Degrees ``n`` where ``f_{n-1} d_n != d_n f_n``."""
        top = max(self.source.top, self.target.top)
        return [
            n
            for n in range(1, top + 1)
            if self[n - 1] @ self.source.d(n) != self.target.d(n) @ self[n]
        ]

    def is_chain_map(self) -> bool:
        return not self.commutation_defects()

    def is_injective(self) -> bool:
        return all(m.is_injective() for m in self._c)

    def is_surjective(self) -> bool:
        return all(m.is_surjective() for m in self._c)

    def is_iso(self) -> bool:
        return all(m.is_invertible() for m in self._c)

    def inverse(self) -> "ChainMap":
        if not self.is_iso():
            raise StructuralError("chain map is not an isomorphism")
        return ChainMap(self.target, self.source, [m.inverse() for m in self._c])

    def apply0(self, v) -> np.ndarray:
        """Image of a degree-0 element."""
        return self[0] @ v


@lru_cache(maxsize=8192)
def identity(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, [Matrix.identity(C.field, r) for r in C.ranks])


def zero_map(C: ChainComplex, D: ChainComplex) -> ChainMap:
    return ChainMap(C, D, [])


def element_map(C: ChainComplex, v) -> ChainMap:
    """The map ``I -> C`` picking the degree-0 element ``v``."""
    I = ChainComplex.unit(C.field)
    return ChainMap(I, C, [Matrix.column(C.field, v)])


def first_difference(f: ChainMap, g: ChainMap) -> Optional[dict]:
    """Location of the first differing entry of two parallel maps, or ``None``."""
    f._same_shape(g)
    for n, (a, b) in enumerate(zip(f.components, g.components)):
        if a != b:
            i, j = map(int, np.argwhere(a.a != b.a)[0])
            return {
                "degree": n,
                "row": i,
                "col": j,
                "lhs": f.field.format(a.a[i, j]),
                "rhs": f.field.format(b.a[i, j]),
            }
    return None


# ---------------------------------------------------------------- tensor


def tensor_blocks(rc: Sequence[int], rd: Sequence[int], n: int) -> list[tuple[int, int, int]]:
    """``(i, j, offset)`` for the summands ``C_i (x) D_j`` of degree ``n``."""
    out = []
    off = 0
    for i in range(max(0, n - (len(rd) - 1)), min(n, len(rc) - 1) + 1):
        j = n - i
        out.append((i, j, off))
        off += rc[i] * rd[j]
    return out


def _tensor_ranks(rc, rd) -> list[int]:
    top = len(rc) - 1 + len(rd) - 1
    return [sum(rc[i] * rd[n - i] for i, _, _ in tensor_blocks(rc, rd, n)) for n in range(top + 1)]


@lru_cache(maxsize=4096)
def tensor(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    if C.field != D.field:
        raise ValueError("field mismatch")
    k = C.field
    rc, rd = C.ranks, D.ranks
    ranks = _tensor_ranks(rc, rd)
    bds = []
    for n in range(1, len(ranks)):
        out = k.zeros((ranks[n - 1], ranks[n]))
        tgt = {(i, j): off for i, j, off in tensor_blocks(rc, rd, n - 1)}
        for i, j, off in tensor_blocks(rc, rd, n):
            size = rc[i] * rd[j]
            if not size:
                continue
            if i >= 1:
                to = tgt[(i - 1, j)]
                m = kron(C.d(i), Matrix.identity(k, rd[j]))
                out[to : to + m.rows, off : off + size] += m.a
            if j >= 1:
                to = tgt[(i, j - 1)]
                m = kron(Matrix.identity(k, rc[i]), D.d(j))
                if i % 2:
                    m = -m
                out[to : to + m.rows, off : off + size] += m.a
        bds.append(Matrix(k, k.reduce(out)))
    return ChainComplex(k, ranks, bds)


@lru_cache(maxsize=8192)
def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    k = f.field
    comps = []
    for n in range(max(src.top, tgt.top) + 1):
        out = k.zeros((tgt.rank(n), src.rank(n)))
        tblocks = {(i, j): off for i, j, off in tensor_blocks(f.target.ranks, g.target.ranks, n)}
        for i, j, off in tensor_blocks(f.source.ranks, g.source.ranks, n):
            if (i, j) not in tblocks:
                continue
            m = kron(f[i], g[j])
            to = tblocks[(i, j)]
            out[to : to + m.rows, off : off + m.cols] = m.a
        comps.append(Matrix(k, out))
    return ChainMap(src, tgt, comps)


def _permutation_map(src: ChainComplex, tgt: ChainComplex, rule: Callable[[int], list[tuple[int, int, int]]]) -> ChainMap:
    """Signed permutation map; ``rule(n)`` lists ``(source index, target index, sign)``."""
    k = src.field
    comps = []
    for n in range(src.top + 1):
        out = k.zeros((tgt.rank(n), src.rank(n)))
        for s, t, sign in rule(n):
            out[t, s] = k.scalar(sign)
        comps.append(Matrix(k, out))
    return ChainMap(src, tgt, comps)


@lru_cache(maxsize=8192)
def symmetry(C: ChainComplex, D: ChainComplex) -> ChainMap:
    """``x (x) y -> (-1)^{|x||y|} y (x) x``."""
    rc, rd = C.ranks, D.ranks

    def rule(n):
        tgt = {(j, i): off for j, i, off in tensor_blocks(rd, rc, n)}
        out = []
        for i, j, off in tensor_blocks(rc, rd, n):
            to = tgt[(j, i)]
            sign = -1 if (i * j) % 2 else 1
            for a in range(rc[i]):
                for b in range(rd[j]):
                    out.append((off + a * rd[j] + b, to + b * rc[i] + a, sign))
        return out

    return _permutation_map(tensor(C, D), tensor(D, C), rule)


@lru_cache(maxsize=8192)
def associator(C: ChainComplex, D: ChainComplex, E: ChainComplex) -> ChainMap:
    """``(C (x) D) (x) E -> C (x) (D (x) E)``; a pure permutation (no signs)."""
    rc, rd, re = C.ranks, D.ranks, E.ranks
    CD = tensor(C, D)
    DE = tensor(D, E)
    rcd, rde = CD.ranks, DE.ranks

    def rule(n):
        tgt = {(i, q): off for i, q, off in tensor_blocks(rc, rde, n)}
        out = []
        for p, k3, off in tensor_blocks(rcd, re, n):
            for i, j, off_cd in tensor_blocks(rc, rd, p):
                q = j + k3
                to = tgt[(i, q)]
                off_de = {(jj, kk): o for jj, kk, o in tensor_blocks(rd, re, q)}[(j, k3)]
                for a in range(rc[i]):
                    for b in range(rd[j]):
                        for c in range(re[k3]):
                            s = off + (off_cd + a * rd[j] + b) * re[k3] + c
                            t = to + a * rde[q] + off_de + b * re[k3] + c
                            out.append((s, t, 1))
        return out

    return _permutation_map(tensor(CD, E), tensor(C, DE), rule)


@lru_cache(maxsize=4096)
def left_unitor(C: ChainComplex) -> ChainMap:
    """``I (x) C -> C``, the identity matrix in every degree."""
    src = tensor(ChainComplex.unit(C.field), C)
    return ChainMap(src, C, [Matrix.identity(C.field, r) for r in C.ranks])


@lru_cache(maxsize=4096)
def right_unitor(C: ChainComplex) -> ChainMap:
    src = tensor(C, ChainComplex.unit(C.field))
    return ChainMap(src, C, [Matrix.identity(C.field, r) for r in C.ranks])


# ------------------------------------------------------------ internal hom


class HomLayout:
    """Bookkeeping for the graded hom ``G_n = prod_m Hom(C_m, D_{m+n})``."""

    def __init__(self, C: ChainComplex, D: ChainComplex):
        if C.field != D.field:
            raise ValueError("field mismatch")
        self.C, self.D = C, D
        k = C.field
        self.blocks: dict[int, list[tuple[int, int, int, int]]] = {}
        self.dims: dict[int, int] = {}
        for n in range(-C.top - 1, D.top + 1):
            off = 0
            bl = []
            for m in range(0, C.top + 1):
                if 0 <= m + n <= D.top:
                    r, c = D.rank(m + n), C.rank(m)
                    bl.append((m, off, r, c))
                    off += r * c
            self.blocks[n] = bl
            self.dims[n] = off
        self.delta: dict[int, Matrix] = {}
        for n in range(-C.top, D.top + 1):
            out = k.zeros((self.dims[n - 1], self.dims[n]))
            tgt = {m: (off, r, c) for m, off, r, c in self.blocks[n - 1]}
            sign = -1 if n % 2 == 0 else 1  # -(-1)^n
            for m, off, r, c in self.blocks[n]:
                size = r * c
                if not size:
                    continue
                if m in tgt:
                    to, r2, _ = tgt[m]
                    blk = kron(D.d(m + n), Matrix.identity(k, c))
                    out[to : to + r2 * c, off : off + size] += blk.a
                if m + 1 in tgt:
                    to, _, c2 = tgt[m + 1]
                    blk = kron(Matrix.identity(k, r), C.d(m + 1).T)
                    if sign < 0:
                        blk = -blk
                    out[to : to + r * c2, off : off + size] += blk.a
            self.delta[n] = Matrix(k, k.reduce(out))
        self.cycles0 = kernel_basis(self.delta[0])
        self.cycles0_inv = self.cycles0.left_inverse()
        ranks = [self.cycles0.cols] + [self.dims[n] for n in range(1, D.top + 1)]
        bds = []
        for n in range(1, D.top + 1):
            if n == 1:
                bds.append(self.cycles0_inv @ self.delta[1])
            else:
                bds.append(self.delta[n])
        self.complex = ChainComplex(k, ranks, bds)

    def graded(self, n: int) -> Matrix:
        """Basis of degree ``n`` of ``[C, D]`` in graded coordinates (columns)."""
        if n == 0:
            return self.cycles0
        return Matrix.identity(self.C.field, self.dims.get(n, 0))

    def to_internal(self, n: int, vecs: Matrix) -> Matrix:
        """Graded coordinates -> coordinates in ``[C, D]_n`` (degree 0 must be cycles)."""
        if n != 0:
            return vecs
        if not (self.delta[0] @ vecs).is_zero():
            raise StructuralError("degree-0 graded map is not a chain map")
        return self.cycles0_inv @ vecs

    def block(self, n: int, m: int) -> Optional[tuple[int, int, int]]:
        for mm, off, r, c in self.blocks.get(n, []):
            if mm == m:
                return off, r, c
        return None


@lru_cache(maxsize=2048)
def hom_layout(C: ChainComplex, D: ChainComplex) -> HomLayout:
    return HomLayout(C, D)


def internal_hom(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    return hom_layout(C, D).complex


def hom_map(u: ChainMap, v: ChainMap) -> ChainMap:
    """``[u, v]: [C, D] -> [C', D']`` for ``u: C' -> C`` and ``v: D -> D'``; ``phi -> v phi u``."""
    src = hom_layout(u.target, v.source)
    tgt = hom_layout(u.source, v.target)
    k = u.field
    comps = []
    for n in range(0, max(src.D.top, tgt.D.top) + 1):
        out = k.zeros((tgt.dims.get(n, 0), src.dims.get(n, 0)))
        for m, off, r, c in tgt.blocks.get(n, []):
            sb = src.block(n, m)
            if sb is None:
                continue
            soff, sr, sc = sb
            blk = kron(v[m + n], u[m].T)
            out[off : off + r * c, soff : soff + sr * sc] = blk.a
        M = Matrix(k, out)
        if n == 0:
            M = tgt.cycles0_inv @ M @ src.cycles0
        comps.append(M)
    return ChainMap(src.complex, tgt.complex, comps)


def adjoint_transpose(g: ChainMap, A: ChainComplex, B: ChainComplex) -> ChainMap:
    """``g: A (x) B -> X`` to ``A -> [B, X]`` with ``g^(a)(b) = g(a (x) b)``."""
    if g.source != tensor(A, B):
        raise ValueError("map source is not A (x) B")
    X = g.target
    lay = hom_layout(B, X)
    k = g.field
    comps = []
    for n in range(A.top + 1):
        G = k.zeros((lay.dims.get(n, 0), A.rank(n)))
        for m, off, r, c in lay.blocks.get(n, []) if n >= 0 else []:
            if not r * c:
                continue
            gm = g[n + m].a
            toff = {(i, j): o for i, j, o in tensor_blocks(A.ranks, B.ranks, n + m)}[(n, m)]
            for alpha in range(A.rank(n)):
                start = toff + alpha * c
                G[off : off + r * c, alpha] = gm[:, start : start + c].reshape(-1)
        M = Matrix(k, G)
        if n == 0:
            try:
                M = lay.to_internal(0, M)
            except StructuralError as exc:
                raise StructuralError("transpose does not land in degree-0 chain maps") from exc
        comps.append(M)
    return ChainMap(A, lay.complex, comps)


def adjoint_untranspose(h: ChainMap, B: ChainComplex, X: ChainComplex) -> ChainMap:
    """Inverse of :func:`adjoint_transpose`: ``A -> [B, X]`` to ``A (x) B -> X``."""
    lay = hom_layout(B, X)
    if h.target != lay.complex:
        raise ValueError("target of h is not [B, X]")
    A = h.source
    src = tensor(A, B)
    k = h.field
    comps = []
    for N in range(src.top + 1):
        out = k.zeros((X.rank(N), src.rank(N)))
        for n, m, off in tensor_blocks(A.ranks, B.ranks, N):
            blk = lay.block(n, m)
            if blk is None or not A.rank(n) * B.rank(m):
                continue
            boff, r, c = blk
            H = lay.cycles0 @ h[0] if n == 0 else h[n]
            for alpha in range(A.rank(n)):
                out[:, off + alpha * c : off + (alpha + 1) * c] = H.a[boff : boff + r * c, alpha].reshape(r, c)
        comps.append(Matrix(k, out))
    return ChainMap(src, X, comps)


def evaluation(B: ChainComplex, X: ChainComplex) -> ChainMap:
    """``[B, X] (x) B -> X``."""
    H = internal_hom(B, X)
    return adjoint_untranspose(identity(H), B, X)


def cotensor_unit_iso(X: ChainComplex) -> ChainMap:
    """``[I, X] -> X``; the identity matrix in every degree."""
    H = internal_hom(ChainComplex.unit(X.field), X)
    return ChainMap(H, X, [Matrix.identity(X.field, r) for r in X.ranks])


# ---------------------------------------------------------------- homology


class HomologyData:
    """Cycles, boundaries and canonical representatives of ``H_n``.

    The representatives are the cycle-basis vectors at the non-pivot positions
    of the boundaries (written in cycle coordinates), so they are determined
    by the rref of the boundary space.
    """

    def __init__(self, C: ChainComplex, n: int):
        self.n = n
        self.cycles = kernel_basis(C.d(n))
        self._cinv = self.cycles.left_inverse()
        bz = self._cinv @ C.d(n + 1)
        self.boundaries = C.d(n + 1)
        self.q = quotient(bz)
        self.reps = self.cycles @ self.q.section
        self.dn = C.d(n)

    @property
    def dim(self) -> int:
        return self.reps.cols

    def classify(self, vecs: Matrix) -> Matrix:
        """Class coordinates of cycles given as columns."""
        if not (self.dn @ vecs).is_zero():
            raise StructuralError(f"not a cycle in degree {self.n}")
        return self.q.proj @ (self._cinv @ vecs)

    def classify_vector(self, v) -> np.ndarray:
        return self.classify(Matrix.column(self.reps.field, v)).a[:, 0].copy()


@lru_cache(maxsize=4096)
def homology_data(C: ChainComplex, n: int) -> HomologyData:
    return HomologyData(C, n)


def homology(C: ChainComplex) -> tuple[int, ...]:
    """``dim H_n`` for ``n = 0 .. top``."""
    return tuple(homology_data(C, n).dim for n in range(C.top + 1))


def induced_on_homology(f: ChainMap, n: int) -> Matrix:
    hs = homology_data(f.source, n)
    ht = homology_data(f.target, n)
    return ht.classify(f[n] @ hs.reps)


def is_quasi_iso(f: ChainMap) -> bool:
    for n in range(max(f.source.top, f.target.top) + 1):
        M = induced_on_homology(f, n)
        if not M.is_invertible():
            return False
    return True


def is_fibration(f: ChainMap) -> bool:
    """Surjective in every strictly positive degree."""
    return all(f[n].is_surjective() for n in range(1, max(f.source.top, f.target.top) + 1))


def is_cofibration(f: ChainMap) -> bool:
    """Injective in every degree (the over-a-field description)."""
    return all(f[n].is_injective() for n in range(max(f.source.top, f.target.top) + 1))


def is_trivial_fibration(f: ChainMap) -> bool:
    return is_fibration(f) and is_quasi_iso(f)


def generating_cofibration(field: Field, n: int) -> ChainMap:
    """``S^{n-1} -> D^n``; for ``n = 0`` this is ``0 -> I``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    S = ChainComplex.sphere(field, n - 1)
    D = ChainComplex.disk(field, n)
    if n == 0:
        return zero_map(S, D)
    comps = [Matrix.zeros(field, D.rank(k), S.rank(k)) for k in range(n - 1)]
    comps.append(Matrix.identity(field, 1))
    return ChainMap(S, D, comps)


# ------------------------------------------------------------ (co)limits


def direct_sum(*Cs: ChainComplex) -> ChainComplex:
    k = Cs[0].field
    top = max(C.top for C in Cs)
    ranks = [sum(C.rank(n) for C in Cs) for n in range(top + 1)]
    bds = [block_diag(k, [C.d(n) for C in Cs]) for n in range(1, top + 1)]
    return ChainComplex(k, ranks, bds)


def sum_projections(*Cs: ChainComplex) -> list[ChainMap]:
    S = direct_sum(*Cs)
    k = S.field
    out = []
    for idx, C in enumerate(Cs):
        comps = []
        for n in range(S.top + 1):
            before = sum(D.rank(n) for D in Cs[:idx])
            m = k.zeros((C.rank(n), S.rank(n)))
            for a in range(C.rank(n)):
                m[a, before + a] = k.scalar(1)
            comps.append(Matrix(k, m))
        out.append(ChainMap(S, C, comps))
    return out


def sum_injections(*Cs: ChainComplex) -> list[ChainMap]:
    S = direct_sum(*Cs)
    return [ChainMap(C, S, [p[n].T for n in range(S.top + 1)]) for C, p in zip(Cs, sum_projections(*Cs))]


def pairing(maps: Sequence[ChainMap]) -> ChainMap:
    """``(f_1, ..., f_r): W -> X_1 (+) ... (+) X_r``."""
    W = maps[0].source
    S = direct_sum(*[f.target for f in maps])
    top = max(S.top, W.top)
    return ChainMap(W, S, [vstack(W.field, [f[n] for f in maps], cols=W.rank(n)) for n in range(top + 1)])


def copairing(maps: Sequence[ChainMap]) -> ChainMap:
    """``[f_1, ..., f_r]: X_1 (+) ... (+) X_r -> T``."""
    T = maps[0].target
    S = direct_sum(*[f.source for f in maps])
    top = max(S.top, T.top)
    return ChainMap(S, T, [hstack(T.field, [f[n] for f in maps], rows=T.rank(n)) for n in range(top + 1)])


@dataclass
class Limit:
    """A finite limit: ``obj`` with ``projections`` and a ``lift`` for cones."""

    obj: ChainComplex
    projections: list[ChainMap]
    factors: list[ChainComplex]
    constraints: list
    embeddings: list[Matrix] = dc_field(repr=False)
    embeddings_inv: list[Matrix] = dc_field(repr=False)

    def lift(self, maps: Sequence[ChainMap]) -> ChainMap:
        """The unique map into the limit with the given projections."""
        if len(maps) != len(self.factors):
            raise ValueError("one map per factor is required")
        W = maps[0].source
        k = W.field
        comps = []
        for n in range(max(W.top, self.obj.top) + 1):
            stacked = vstack(k, [f[n] for f in maps], cols=W.rank(n))
            if n > self.obj.top:
                if not stacked.is_zero():
                    raise StructuralError("cone does not factor through the limit")
                comps.append(Matrix.zeros(k, 0, W.rank(n)))
                continue
            K = self.embeddings[n]
            coords = self.embeddings_inv[n] @ stacked
            if K @ coords != stacked:
                raise StructuralError(f"cone does not satisfy the limit constraints in degree {n}")
            comps.append(coords)
        return ChainMap(W, self.obj, comps)


def limit(factors: Sequence[ChainComplex], constraints: Sequence[tuple[int, ChainMap, int, ChainMap]]) -> Limit:
    """Limit of ``factors`` cut out by ``u o pr_i == v o pr_j`` for each ``(i, u, j, v)``.

    Degree ``n`` is the kernel (canonical basis) of the stacked constraint
    matrix on ``(+)_i X_i,n``.
    """
    k = factors[0].field
    for i, u, j, v in constraints:
        if u.source != factors[i] or v.source != factors[j]:
            raise ValueError("constraint map does not start at its factor")
        if u.target != v.target:
            raise ValueError("constraint maps have different codomains")
    top = max(X.top for X in factors)
    offsets = []
    embeds, invs, ranks = [], [], []
    for n in range(top + 1):
        widths = [X.rank(n) for X in factors]
        offs = np.cumsum([0] + widths)
        rows = []
        for i, u, j, v in constraints:
            row = k.zeros((u.target.rank(n), int(offs[-1])))
            row[:, offs[i] : offs[i + 1]] += u[n].a
            row[:, offs[j] : offs[j + 1]] -= v[n].a
            rows.append(Matrix(k, k.reduce(row)))
        M = vstack(k, rows, cols=int(offs[-1])) if rows else Matrix.zeros(k, 0, int(offs[-1]))
        K = kernel_basis(M)
        embeds.append(K)
        invs.append(K.left_inverse())
        ranks.append(K.cols)
        offsets.append(offs)
    bds = []
    for n in range(1, top + 1):
        D = block_diag(k, [X.d(n) for X in factors])
        bds.append(invs[n - 1] @ (D @ embeds[n]))
    P = ChainComplex(k, ranks, bds)
    projections = []
    for idx, X in enumerate(factors):
        comps = []
        for n in range(top + 1):
            offs = offsets[n]
            if n <= P.top:
                comps.append(embeds[n].submatrix(rows=list(range(offs[idx], offs[idx + 1]))))
            else:
                comps.append(Matrix.zeros(k, X.rank(n), 0))
        projections.append(ChainMap(P, X, comps))
    return Limit(P, projections, list(factors), list(constraints), embeds, invs)


def pullback(f: ChainMap, g: ChainMap) -> Limit:
    """Pullback of ``A -f-> C <-g- B`` with projections to ``A`` and ``B``."""
    if f.target != g.target:
        raise ValueError("pullback legs have different codomains")
    return limit([f.source, g.source], [(0, f, 1, g)])


@dataclass
class Colimit:
    obj: ChainComplex
    injections: list[ChainMap]
    relations: Matrix | None = None
    quotients: list = dc_field(default_factory=list, repr=False)
    relation_mats: list = dc_field(default_factory=list, repr=False)

    def desc(self, maps: Sequence[ChainMap]) -> ChainMap:
        """The unique map out of the colimit restricting to ``maps``."""
        T = maps[0].target
        k = T.field
        comps = []
        for n in range(max(self.obj.top, T.top) + 1):
            row = hstack(k, [f[n] for f in maps], rows=T.rank(n))
            W = self.relation_mats[n] if n < len(self.relation_mats) else None
            if W is not None and W.cols and not (row @ W).is_zero():
                raise StructuralError(f"cocone does not respect the gluing in degree {n}")
            if n < len(self.quotients):
                comps.append(row @ self.quotients[n].section)
            else:
                comps.append(Matrix.zeros(k, T.rank(n), 0))
        return ChainMap(self.obj, T, comps)


def pushout(f: ChainMap, g: ChainMap) -> Colimit:
    """Pushout of ``A <-f- C -g-> B``: the cokernel of ``(f, -g)`` with canonical basis."""
    if f.source != g.source:
        raise ValueError("pushout legs have different domains")
    A, B = f.target, g.target
    k = f.field
    top = max(A.top, B.top)
    qs, Ws, ranks = [], [], []
    for n in range(top + 1):
        W = vstack(k, [f[n], -g[n]], cols=f.source.rank(n))
        q = quotient(W)
        qs.append(q)
        Ws.append(W)
        ranks.append(q.proj.rows)
    bds = []
    for n in range(1, top + 1):
        D = block_diag(k, [A.d(n), B.d(n)])
        bds.append(qs[n - 1].proj @ D @ qs[n].section)
    P = ChainComplex(k, ranks, bds)
    inj = []
    for idx, X in enumerate((A, B)):
        comps = []
        for n in range(top + 1):
            lo = 0 if idx == 0 else A.rank(n)
            cols = list(range(lo, lo + X.rank(n)))
            comps.append(qs[n].proj.submatrix(cols=cols) if n <= P.top else Matrix.zeros(k, 0, X.rank(n)))
        inj.append(ChainMap(X, P, comps))
    return Colimit(P, inj, None, qs, Ws)
