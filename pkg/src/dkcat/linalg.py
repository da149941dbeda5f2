"""Exact dense linear algebra over the rationals and prime fields.

Matrices wrap a numpy array: ``int64`` holding canonical residues for small
prime fields, ``object`` holding :class:`fractions.Fraction` for the rationals
(and for primes too large for safe ``int64`` products).  Every public result
is reduced, so equality of matrices is plain array equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

_INT64_PRIME_BOUND = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``characteristic == 0``) or the prime field F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"characteristic {self.characteristic} is not prime")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``Q`` or ``F<p>``."""
        text = text.strip()
        if text == "Q":
            return cls(0)
        if text[:1] == "F" and text[1:].isdigit():
            return cls(int(text[1:]))
        raise ValueError(f"unknown field {text!r}; expected Q or F<p>")

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("the rationals are infinite")
        return self.characteristic

    @property
    def dtype(self):
        if self.is_finite and self.characteristic < _INT64_PRIME_BOUND:
            return np.int64
        return object

    # scalars

    def scalar(self, x) -> int | Fraction:
        if self.characteristic == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.characteristic)) % self.characteristic
        return int(x) % self.characteristic

    def inv(self, x):
        x = self.scalar(x)
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.characteristic == 0:
            return 1 / x
        return pow(int(x), -1, self.characteristic)

    def format(self, x) -> str:
        x = self.scalar(x)
        if self.characteristic == 0:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def parse_scalar(self, text) -> int | Fraction:
        if isinstance(text, str):
            return self.scalar(Fraction(text.strip()))
        return self.scalar(text)

    def elements(self) -> range:
        return range(self.order)

    # arrays

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.characteristic == 0:
            return arr
        return arr % self.characteristic

    def array(self, data, shape: Optional[tuple[int, int]] = None) -> np.ndarray:
        if self.characteristic == 0:
            raw = np.array(data, dtype=object)
            if shape is not None:
                raw = raw.reshape(shape)
            out = np.empty(raw.shape, dtype=object)
            for idx, v in np.ndenumerate(raw):
                out[idx] = Fraction(v)
            return out
        if self.dtype is object:
            raw = np.array(data, dtype=object)
            if shape is not None:
                raw = raw.reshape(shape)
            out = np.empty(raw.shape, dtype=object)
            for idx, v in np.ndenumerate(raw):
                out[idx] = self.scalar(v)
            return out
        raw = np.array(data, dtype=object)
        if shape is not None:
            raw = raw.reshape(shape)
        if raw.size and any(isinstance(v, Fraction) for v in raw.flat):
            raw = np.vectorize(self.scalar, otypes=[object])(raw)
        return np.array(raw, dtype=np.int64) % self.characteristic

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0) if self.characteristic == 0 else 0)
            return out
        return np.zeros(shape, dtype=np.int64)


class Matrix:
    """Immutable dense matrix over a :class:`Field`.

    Composition is ``A @ B``; a vector is a 1-D numpy array in the field's
    dtype (``A @ v`` works for those too).
    """

    __slots__ = ("field", "a", "_hash")

    def __init__(self, field: Field, data, shape: Optional[tuple[int, int]] = None):
        self.field = field
        if isinstance(data, np.ndarray) and data.ndim == 2 and data.dtype == field.dtype and shape is None:
            arr = field.reduce(data).copy()
        else:
            if shape is not None and (shape[0] == 0 or shape[1] == 0):
                arr = field.zeros(shape)
            else:
                arr = field.array(data, shape)
            if arr.ndim != 2:
                if arr.size == 0 and shape is None:
                    raise ValueError("cannot infer the shape of an empty matrix")
                raise ValueError("matrix data must be two-dimensional")
        arr.setflags(write=False)
        self.a = arr
        self._hash = None

    # construction helpers

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z = field.zeros((n, n))
        for i in range(n):
            z[i, i] = field.scalar(1)
        return cls(field, z)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence, rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        arr = field.zeros((rows, len(columns)))
        for j, col in enumerate(columns):
            arr[:, j] = field.array(list(col)) if not isinstance(col, np.ndarray) else col
        return cls(field, arr)

    @classmethod
    def column(cls, field: Field, vector) -> "Matrix":
        v = vector if isinstance(vector, np.ndarray) else field.array(list(vector))
        return cls(field, v.reshape(-1, 1))

    # basic properties

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __repr__(self) -> str:
        body = [[self.field.format(x) for x in row] for row in self.a]
        return f"Matrix({self.field}, {self.rows}x{self.cols}, {body})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.shape, tuple(self.a.flat)))
        return self._hash

    def is_zero(self) -> bool:
        return not bool(np.any(self.a != 0))

    def entry(self, i: int, j: int):
        return self.a[i, j]

    def tolist(self) -> list[list[str]]:
        return [[self.field.format(x) for x in row] for row in self.a]

    def columns(self) -> list[np.ndarray]:
        return [self.a[:, j].copy() for j in range(self.cols)]

    # arithmetic

    def _check(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            if self.rows == 0 or other.cols == 0 or self.cols == 0:
                return Matrix.zeros(self.field, self.rows, other.cols)
            return Matrix(self.field, self.field.reduce(self.a @ other.a))
        v = np.asarray(other)
        if v.shape != (self.cols,):
            raise ValueError(f"cannot apply {self.shape} matrix to vector of shape {v.shape}")
        if self.cols == 0:
            return self.field.zeros((self.rows,))
        return self.field.reduce(self.a @ v)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.field, self.field.reduce(self.a - other.a))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.field.reduce(-self.a))

    def scale(self, s) -> "Matrix":
        s = self.field.scalar(s)
        if self.a.dtype == object:
            return Matrix(self.field, self.field.reduce(self.a * s))
        return Matrix(self.field, self.field.reduce(self.a * int(s)))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, np.ascontiguousarray(self.a.T))

    def submatrix(self, rows=None, cols=None) -> "Matrix":
        r = slice(None) if rows is None else rows
        c = slice(None) if cols is None else cols
        sub = self.a[r, :][:, c]
        return Matrix(self.field, np.ascontiguousarray(sub))

    # linear algebra

    def rref(self) -> tuple["Matrix", list[int]]:
        R, piv = _rref(self.field, self.a, self.cols)
        return Matrix(self.field, R), piv

    @property
    def rank(self) -> int:
        return len(_rref(self.field, self.a, self.cols)[1])

    def is_injective(self) -> bool:
        return self.rank == self.cols

    def is_surjective(self) -> bool:
        return self.rank == self.rows

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank == self.rows

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        x = solve(self, Matrix.identity(self.field, self.rows))
        if x is None:
            raise ValueError("matrix is singular")
        return x

    def left_inverse(self) -> "Matrix":
        """Some ``L`` with ``L @ self == identity``; requires injectivity."""
        x = solve(self.T, Matrix.identity(self.field, self.cols))
        if x is None:
            raise ValueError("matrix is not injective")
        return x.T


def _rref(field: Field, a: np.ndarray, pivot_cols: int) -> tuple[np.ndarray, list[int]]:
    R = np.array(a, copy=True)
    rows = R.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = field.inv(R[r, c])
        R[r] = field.reduce(R[r] * inv)
        factors = R[:, c].copy()
        factors[r] = 0
        if np.any(factors != 0):
            R = field.reduce(R - np.outer(factors, R[r]))
        pivots.append(c)
        r += 1
    return R, pivots


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot columns (left-to-right scan)."""
    return M.rref()


def rank(M: Matrix) -> int:
    return M.rank


def kernel_basis(M: Matrix) -> Matrix:
    """Null-space basis as the columns of the returned ``cols x (cols - rank)`` matrix.

    Column ``j`` is the solution whose ``j``-th free variable is 1 and whose
    other free variables are 0, free variables taken in increasing order.
    """
    field = M.field
    n = M.cols
    R, pivots = _rref(field, M.a, n)
    free = [j for j in range(n) if j not in set(pivots)]
    K = field.zeros((n, len(free)))
    one = field.scalar(1)
    for k, f in enumerate(free):
        K[f, k] = one
        for i, pc in enumerate(pivots):
            K[pc, k] = field.reduce(-R[i, f])
    return Matrix(field, K)


def image_basis(M: Matrix) -> Matrix:
    """Canonical column basis of the image: transposed nonzero rows of ``rref(M.T)``."""
    R, piv = _rref(M.field, M.T.a, M.rows)
    return Matrix(M.field, np.ascontiguousarray(R[: len(piv)].T)) if piv else Matrix.zeros(M.field, M.rows, 0)


def solve(A: Matrix, b):
    """One solution of ``A x = b`` with free variables zero, or ``None``.

    ``b`` may be a :class:`Matrix` (several right-hand sides, all must be
    consistent) or a vector; the result has the same kind.
    """
    field = A.field
    as_vector = not isinstance(b, Matrix)
    B = Matrix.column(field, b) if as_vector else b
    if B.field != field:
        raise ValueError("field mismatch")
    if B.rows != A.rows:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has {B.rows} rows")
    n = A.cols
    if A.rows == 0:
        X = Matrix.zeros(field, n, B.cols)
    else:
        aug = np.concatenate([A.a, B.a], axis=1) if B.cols else A.a
        R, pivots = _rref(field, aug, n)
        r = len(pivots)
        if B.cols and np.any(R[r:, n:] != 0):
            return None
        X_arr = field.zeros((n, B.cols))
        for i, pc in enumerate(pivots):
            X_arr[pc, :] = R[i, n:]
        X = Matrix(field, X_arr)
    if as_vector:
        return X.a[:, 0].copy()
    return X


def kron(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product; row/column ``(i, j)`` sits at ``i * B.rows + j`` / ``i * B.cols + j``."""
    if A.field != B.field:
        raise ValueError("field mismatch")
    rows, cols = A.rows * B.rows, A.cols * B.cols
    if rows == 0 or cols == 0:
        return Matrix.zeros(A.field, rows, cols)
    out = (A.a[:, None, :, None] * B.a[None, :, None, :]).reshape(rows, cols)
    return Matrix(A.field, out)


def hstack(field: Field, mats: Sequence[Matrix], rows: Optional[int] = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, rows or 0, 0)
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise ValueError("row counts differ")
    return Matrix(field, np.concatenate([m.a for m in mats], axis=1)) if sum(m.cols for m in mats) else Matrix.zeros(field, r, 0)


def vstack(field: Field, mats: Sequence[Matrix], cols: Optional[int] = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, 0, cols or 0)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise ValueError("column counts differ")
    return Matrix(field, np.concatenate([m.a for m in mats], axis=0)) if sum(m.rows for m in mats) else Matrix.zeros(field, 0, c)


def block_diag(field: Field, mats: Sequence[Matrix]) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = field.zeros((rows, cols))
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Matrix(field, out)


def block(field: Field, grid: Sequence[Sequence[Matrix]]) -> Matrix:
    return vstack(field, [hstack(field, list(row)) for row in grid])


@dataclass(frozen=True)
class Quotient:
    """Canonical quotient ``k^n -> k^n / W``.

    The complement of ``W`` is spanned by the standard vectors at the indices
    that are *not* pivots of ``rref(W^T)``; ``proj`` reduces a vector modulo
    ``W`` and reads those coordinates, ``section`` is the matching inclusion.
    """

    proj: Matrix
    section: Matrix
    complement: tuple[int, ...]


def quotient(W: Matrix) -> Quotient:
    field = W.field
    n = W.rows
    R, piv = _rref(field, W.T.a, n)
    R = R[: len(piv)]
    keep = tuple(j for j in range(n) if j not in set(piv))
    # v - R^T v[piv] vanishes on pivots and differs from v by an element of W
    P = field.zeros((n, n))
    for j in range(n):
        P[j, j] = field.scalar(1)
    if piv:
        sel = field.zeros((len(piv), n))
        for i, pc in enumerate(piv):
            sel[i, pc] = field.scalar(1)
        P = field.reduce(P - (R.T @ sel))
    proj = Matrix(field, np.ascontiguousarray(P[list(keep), :])) if keep else Matrix.zeros(field, 0, n)
    sec = field.zeros((n, len(keep)))
    for k, j in enumerate(keep):
        sec[j, k] = field.scalar(1)
    return Quotient(proj, Matrix(field, sec), keep)


def vector(field: Field, values: Iterable) -> np.ndarray:
    return field.array(list(values)) if not isinstance(values, np.ndarray) else field.reduce(values)


def unit_vector(field: Field, n: int, i: int) -> np.ndarray:
    v = field.zeros((n,))
    v[i] = field.scalar(1)
    return v
