"""Finite-dimensional Hopf algebras given by structure matrices.

With basis ``e_0..e_{h-1}`` of ``H``, the tensor square has basis
``e_i (x) e_j`` at index ``i * h + j``.  ``mult`` is ``h x h^2``, ``unit``
``h x 1``, ``comult`` ``h^2 x h``, ``counit`` ``1 x h``, ``antipode`` ``h x h``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .linalg import Field, Matrix, kron


def swap_matrix(field: Field, a: int, b: int) -> Matrix:
    """``V (x) W -> W (x) V`` for ``dim V = a``, ``dim W = b``."""
    out = field.zeros((a * b, a * b))
    for i in range(a):
        for j in range(b):
            out[j * a + i, i * b + j] = field.scalar(1)
    return Matrix(field, out)


@dataclass(frozen=True)
class HopfAlgebra:
    field: Field
    dim: int
    mult: Matrix
    unit: Matrix
    comult: Matrix
    counit: Matrix
    antipode: Matrix
    name: str = "H"

    def shape_errors(self) -> list[str]:
        h = self.dim
        want = {
            "mult": (h, h * h),
            "unit": (h, 1),
            "comult": (h * h, h),
            "counit": (1, h),
            "antipode": (h, h),
        }
        return [f"{k} has shape {getattr(self, k).shape}, expected {v}" for k, v in want.items() if getattr(self, k).shape != v]

    def axiom_failures(self) -> list[str]:
        """Bialgebra, antipode and cocommutativity identities that fail."""
        bad = self.shape_errors()
        if bad:
            return bad
        k, h = self.field, self.dim
        I = Matrix.identity(k, h)
        one = Matrix.identity(k, 1)
        m, u, D, e, S = self.mult, self.unit, self.comult, self.counit, self.antipode
        tw = swap_matrix(k, h, h)
        checks = [
            ("associativity", m @ kron(m, I), m @ kron(I, m)),
            ("left unit", m @ kron(u, I), I),
            ("right unit", m @ kron(I, u), I),
            ("coassociativity", kron(D, I) @ D, kron(I, D) @ D),
            ("left counit", kron(e, I) @ D, I),
            ("right counit", kron(I, e) @ D, I),
            ("comultiplication is multiplicative", D @ m, kron(m, m) @ kron(kron(I, tw), I) @ kron(D, D)),
            ("comultiplication preserves the unit", D @ u, kron(u, u)),
            ("counit is multiplicative", e @ m, kron(e, e)),
            ("counit preserves the unit", e @ u, one),
            ("left antipode", m @ kron(S, I) @ D, u @ e),
            ("right antipode", m @ kron(I, S) @ D, u @ e),
            ("cocommutativity", tw @ D, D),
        ]
        return [name for name, a, b in checks if a != b]

    def is_valid(self) -> bool:
        return not self.axiom_failures()

    @property
    def one(self) -> np.ndarray:
        return self.unit.a[:, 0].copy()

    def left_regular(self) -> list[Matrix]:
        """``rho(e_j) = m(e_j (x) -)`` for each basis element."""
        h = self.dim
        return [self.mult.submatrix(cols=list(range(j * h, (j + 1) * h))) for j in range(h)]

    def trivial(self, n: int) -> list[Matrix]:
        """``rho(e_j) = eps(e_j) * id`` on ``k^n``."""
        k = self.field
        return [Matrix.identity(k, n).scale(self.counit.a[0, j]) for j in range(self.dim)]

    def representation_failures(self, rho: Sequence[Matrix]) -> list[str]:
        k, h = self.field, self.dim
        if len(rho) != h:
            return [f"expected {h} action matrices"]
        n = rho[0].rows
        bad = []
        unit_act = _act(self, rho, self.one)
        if unit_act != Matrix.identity(k, n):
            bad.append("unit does not act as the identity")
        for i in range(h):
            for j in range(h):
                prod = self.mult.a[:, i * h + j]
                if rho[i] @ rho[j] != _act(self, rho, prod):
                    bad.append(f"e_{i} e_{j} not respected")
                    return bad
        return bad


def _act(H: HopfAlgebra, rho: Sequence[Matrix], vec) -> Matrix:
    k = H.field
    n = rho[0].rows
    out = Matrix.zeros(k, n, n)
    for j, c in enumerate(vec):
        if c:
            out = out + rho[j].scale(c)
    return out


def group_algebra(field: Field, n: int) -> HopfAlgebra:
    """``k[C_n]`` with basis ``g^0..g^{n-1}``."""
    k = field
    mult = k.zeros((n, n * n))
    comult = k.zeros((n * n, n))
    anti = k.zeros((n, n))
    for i in range(n):
        for j in range(n):
            mult[(i + j) % n, i * n + j] = k.scalar(1)
        comult[i * n + i, i] = k.scalar(1)
        anti[(-i) % n, i] = k.scalar(1)
    unit = k.zeros((n, 1))
    unit[0, 0] = k.scalar(1)
    counit = k.array([[1] * n])
    return HopfAlgebra(k, n, Matrix(k, mult), Matrix(k, unit), Matrix(k, comult), Matrix(k, counit), Matrix(k, anti), name=f"k[C{n}]")


def hopf_from_dict(data: dict, field: Optional[Field] = None) -> HopfAlgebra:
    """Structure matrices given as nested lists of scalar strings or integers."""
    k = field or Field.parse(str(data["field"]))
    h = int(data["dim"])

    def mat(key, shape):
        rows = data[key]
        arr = k.array([[k.parse_scalar(x) for x in row] for row in rows]) if shape[0] * shape[1] else k.zeros(shape)
        m = Matrix(k, arr.reshape(shape) if arr.size == shape[0] * shape[1] else arr)
        if m.shape != shape:
            raise ValueError(f"{key} has shape {m.shape}, expected {shape}")
        return m

    return HopfAlgebra(
        k,
        h,
        mat("mult", (h, h * h)),
        mat("unit", (h, 1)),
        mat("comult", (h * h, h)),
        mat("counit", (1, h)),
        mat("antipode", (h, h)),
        name=str(data.get("name", "H")),
    )


def hopf_to_dict(H: HopfAlgebra) -> dict:
    return {
        "field": str(H.field),
        "dim": H.dim,
        "name": H.name,
        "mult": H.mult.tolist(),
        "unit": H.unit.tolist(),
        "comult": H.comult.tolist(),
        "counit": H.counit.tolist(),
        "antipode": H.antipode.tolist(),
    }
