"""Sparse square matrices over RatFun.

Shared by the representation backend (generator images), the tensor-leg
operators of ``rmat`` and the dynamical sector.  Values are treated as
immutable once built.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterator, Mapping, Optional, Sequence, Tuple

from .coeff import QExpr, RatFun
from .errors import CoefficientDivisionError, StructureError

__all__ = ["SparseMatrix", "as_coefficient"]

Rows = Dict[int, Dict[int, RatFun]]
_SCALARS = (int, Fraction, QExpr, RatFun)


def as_coefficient(value) -> RatFun:
    if isinstance(value, RatFun):
        return value
    return RatFun(value)


class SparseMatrix:
    """``dim x dim`` matrix stored as row dictionaries of nonzero entries."""

    __slots__ = ("dim", "_rows")

    def __init__(self, dim: int, entries: Optional[Mapping[Tuple[int, int], object]] = None):
        self.dim = dim
        rows: Rows = {}
        for (i, j), value in (entries or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise StructureError(f"entry ({i}, {j}) outside a {dim}x{dim} matrix")
            value = as_coefficient(value)
            if not value.is_zero():
                rows.setdefault(i, {})[j] = value
        self._rows = rows

    @classmethod
    def _from_rows(cls, dim: int, rows: Rows) -> "SparseMatrix":
        obj = cls.__new__(cls)
        obj.dim = dim
        obj._rows = rows
        return obj

    @classmethod
    def zero(cls, dim: int) -> "SparseMatrix":
        return cls._from_rows(dim, {})

    @classmethod
    def identity(cls, dim: int) -> "SparseMatrix":
        one = RatFun(1)
        return cls._from_rows(dim, {i: {i: one} for i in range(dim)})

    @classmethod
    def diagonal(cls, values: Sequence) -> "SparseMatrix":
        return cls(len(values), {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def unit(cls, dim: int, i: int, j: int, value=1) -> "SparseMatrix":
        return cls(dim, {(i, j): value})

    # -- access ----------------------------------------------------------

    def get(self, i: int, j: int) -> RatFun:
        value = self._rows.get(i, {}).get(j)
        return value if value is not None else RatFun(0)

    def row(self, i: int) -> Dict[int, RatFun]:
        return self._rows.get(i, {})

    def items(self) -> Iterator[Tuple[int, int, RatFun]]:
        for i in sorted(self._rows):
            row = self._rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def first_nonzero(self) -> Optional[Tuple[int, int, RatFun]]:
        return next(self.items(), None)

    # -- arithmetic ------------------------------------------------------

    def _check_dim(self, other: "SparseMatrix") -> None:
        if self.dim != other.dim:
            raise StructureError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        self._check_dim(other)
        rows: Rows = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            target = rows.setdefault(i, {})
            for j, v in r.items():
                s = target[j] + v if j in target else v
                if s.is_zero():
                    target.pop(j, None)
                else:
                    target[j] = s
            if not target:
                del rows[i]
        return SparseMatrix._from_rows(self.dim, rows)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix._from_rows(self.dim, {i: {j: -v for j, v in r.items()} for i, r in self._rows.items()})

    def __sub__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = as_coefficient(c)
        if c.is_zero():
            return SparseMatrix.zero(self.dim)
        if c.is_one():
            return self
        return SparseMatrix._from_rows(self.dim, {i: {j: v * c for j, v in r.items()} for i, r in self._rows.items()})

    def __mul__(self, other):
        if isinstance(other, SparseMatrix):
            return self._matmul(other)
        if isinstance(other, _SCALARS):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, _SCALARS):
            return self.scale(other)
        return NotImplemented

    def _matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check_dim(other)
        rows: Rows = {}
        other_rows = other._rows
        for i, r in self._rows.items():
            acc: Dict[int, RatFun] = {}
            for k, a in r.items():
                brow = other_rows.get(k)
                if not brow:
                    continue
                for j, b in brow.items():
                    p = a * b
                    acc[j] = acc[j] + p if j in acc else p
            acc = {j: v for j, v in acc.items() if not v.is_zero()}
            if acc:
                rows[i] = acc
        return SparseMatrix._from_rows(self.dim, rows)

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        """Kronecker product; the left factor indexes the most significant digit."""
        d = other.dim
        rows: Rows = {}
        for i, r in self._rows.items():
            for k, a in r.items():
                for i2, r2 in other._rows.items():
                    target = rows.setdefault(i * d + i2, {})
                    for k2, b in r2.items():
                        target[k * d + k2] = a * b
        return SparseMatrix._from_rows(self.dim * d, {i: r for i, r in rows.items() if r})

    def transpose(self) -> "SparseMatrix":
        rows: Rows = {}
        for i, j, v in self.items():
            rows.setdefault(j, {})[i] = v
        return SparseMatrix._from_rows(self.dim, rows)

    def inverse(self) -> "SparseMatrix":
        """Gauss-Jordan elimination over the coefficient field."""
        n = self.dim
        work = [dict(self.row(i)) for i in range(n)]
        inv = [{i: RatFun(1)} for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if col in work[r]), None)
            if pivot is None:
                raise CoefficientDivisionError(f"matrix is singular at column {col}")
            work[col], work[pivot] = work[pivot], work[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
            factor = work[col][col].inverse()
            work[col] = {j: v * factor for j, v in work[col].items()}
            inv[col] = {j: v * factor for j, v in inv[col].items()}
            for r in range(n):
                if r == col or col not in work[r]:
                    continue
                f = work[r][col]
                work[r] = _axpy(work[r], work[col], f)
                inv[r] = _axpy(inv[r], inv[col], f)
        return SparseMatrix._from_rows(n, {i: r for i, r in enumerate(inv) if r})

    # -- comparison and maps ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.dim == other.dim and (self - other).is_zero()

    __hash__ = None

    def map_entries(self, fn: Callable[[RatFun], object]) -> "SparseMatrix":
        return SparseMatrix(self.dim, {(i, j): fn(v) for i, j, v in self.items()})

    def substitute(self, pos: int, image, root: int = 1) -> "SparseMatrix":
        return self.map_entries(lambda v: v.substitute(pos, image, root))

    def at_q_one(self) -> "SparseMatrix":
        return self.map_entries(lambda v: v.at_q_one())

    def __str__(self) -> str:
        return "\n".join(f"{i},{j}: {v}" for i, j, v in self.items())

    def __repr__(self) -> str:
        return f"SparseMatrix(dim={self.dim}, nnz={self.nnz()})"


def _axpy(target: Dict[int, RatFun], source: Dict[int, RatFun], f: RatFun) -> Dict[int, RatFun]:
    """target - f * source, dropping zeros."""
    out = dict(target)
    for j, v in source.items():
        s = out[j] - f * v if j in out else -(f * v)
        if s.is_zero():
            out.pop(j, None)
        else:
            out[j] = s
    return out
