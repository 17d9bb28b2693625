"""Dense complex matrices over interchangeable scalar types.

A CMatrix wraps a 2-D numpy array whose dtype is either complex128 (the
fast numeric mode) or object (entries are RationalComplex for exact work,
or JetScalar for derivative-carrying work).  All operations are pure; a
CMatrix is never mutated after construction.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .exact import RC_ONE, RC_ZERO, RationalComplex
from .jets import JetScalar


class ShapeError(ValueError):
    """Dimension mismatch in a matrix operation."""


def _as_2d(data) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D array, got shape {arr.shape}")
    return arr


class CMatrix:
    __slots__ = ("data",)

    def __init__(self, data):
        self.data = _as_2d(data)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rows(rows: Iterable[Iterable], exact: bool = False) -> "CMatrix":
        rows = [list(r) for r in rows]
        if exact:
            arr = np.empty((len(rows), len(rows[0])), dtype=object)
            for i, r in enumerate(rows):
                for j, v in enumerate(r):
                    arr[i, j] = v if isinstance(v, RationalComplex) else RationalComplex(v)
            return CMatrix(arr)
        return CMatrix(np.array(rows, dtype=complex))

    @staticmethod
    def zeros(rows: int, cols: int, exact: bool = False) -> "CMatrix":
        if exact:
            arr = np.empty((rows, cols), dtype=object)
            arr[:] = RC_ZERO
            return CMatrix(arr)
        return CMatrix(np.zeros((rows, cols), dtype=complex))

    @staticmethod
    def identity(n: int, exact: bool = False) -> "CMatrix":
        if exact:
            arr = np.empty((n, n), dtype=object)
            arr[:] = RC_ZERO
            for i in range(n):
                arr[i, i] = RC_ONE
            return CMatrix(arr)
        return CMatrix(np.eye(n, dtype=complex))

    # -- structure ---------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def is_object(self) -> bool:
        return self.data.dtype == object

    def __getitem__(self, idx):
        return self.data[idx]

    # -- arithmetic ----------------------------------------------------------

    def _binary_check(self, other: "CMatrix", op: str):
        if not isinstance(other, CMatrix):
            raise TypeError(f"{op}: expected CMatrix, got {type(other).__name__}")

    def __add__(self, other):
        self._binary_check(other, "add")
        if self.shape != other.shape:
            raise ShapeError(f"add: shapes {self.shape} and {other.shape} differ")
        return CMatrix(self.data + other.data)

    def __sub__(self, other):
        self._binary_check(other, "sub")
        if self.shape != other.shape:
            raise ShapeError(f"sub: shapes {self.shape} and {other.shape} differ")
        return CMatrix(self.data - other.data)

    def __neg__(self):
        return CMatrix(-self.data)

    def _exact_entries(self) -> bool:
        return self.data.dtype == object and isinstance(self.data[0, 0], RationalComplex)

    def __matmul__(self, other):
        self._binary_check(other, "matmul")
        if self.cols != other.rows:
            raise ShapeError(f"matmul: shapes {self.shape} and {other.shape} incompatible")
        a, b = self, other
        # mixing a floating matrix with an exact one demotes the exact side
        if not a.is_object() and b._exact_entries():
            b = CMatrix(b.to_complex())
        elif not b.is_object() and a._exact_entries():
            a = CMatrix(a.to_complex())
        if a.is_object() or b.is_object():
            return CMatrix(np.dot(a.data, b.data))
        return CMatrix(a.data @ b.data)

    def scale(self, scalar) -> "CMatrix":
        return CMatrix(self.data * scalar)

    def __mul__(self, scalar):
        return self.scale(scalar)

    __rmul__ = __mul__

    def transpose(self) -> "CMatrix":
        return CMatrix(self.data.T)

    @property
    def T(self) -> "CMatrix":
        return self.transpose()

    def conjugate(self) -> "CMatrix":
        if self.data.dtype == object:
            out = np.empty(self.shape, dtype=object)
            for i in range(self.rows):
                for j in range(self.cols):
                    v = self.data[i, j]
                    if isinstance(v, JetScalar):
                        raise TypeError("conjugation of jet-valued matrices is not defined")
                    out[i, j] = v.conjugate()
            return CMatrix(out)
        return CMatrix(np.conj(self.data))

    def conj_transpose(self) -> "CMatrix":
        return self.conjugate().transpose()

    def trace(self):
        if self.rows != self.cols:
            raise ShapeError(f"trace: matrix is {self.shape}, not square")
        total = self.data[0, 0]
        for i in range(1, self.rows):
            total = total + self.data[i, i]
        return total

    # -- conversions and norms ----------------------------------------------

    def to_complex(self) -> np.ndarray:
        """Plain complex128 array; exact entries convert, jets are rejected."""
        if self.data.dtype != object:
            return self.data
        out = np.empty(self.shape, dtype=complex)
        for i in range(self.rows):
            for j in range(self.cols):
                v = self.data[i, j]
                if isinstance(v, JetScalar):
                    raise TypeError("cannot flatten a jet-valued matrix to complex")
                out[i, j] = complex(v)
        return out

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.to_complex()))) if self.data.size else 0.0

    def exact_equals(self, other: "CMatrix") -> bool:
        if self.shape != other.shape:
            return False
        for i in range(self.rows):
            for j in range(self.cols):
                if not (self.data[i, j] == other.data[i, j]):
                    return False
        return True

    def __repr__(self):
        return f"CMatrix({self.data!r})"


def kron_delta(i: int, j: int) -> int:
    return 1 if i == j else 0


def standard_symplectic(n: int, exact: bool = False) -> CMatrix:
    """The 2n x 2n block matrix [[0, I], [-I, 0]]."""
    if exact:
        m = CMatrix.zeros(2 * n, 2 * n, exact=True).data.copy()
        for i in range(n):
            m[i, n + i] = RC_ONE
            m[n + i, i] = RationalComplex(-1)
        return CMatrix(m)
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    m[:n, n:] = np.eye(n)
    m[n:, :n] = -np.eye(n)
    return CMatrix(m)
