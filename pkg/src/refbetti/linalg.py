"""Exact matrices and subspace calculus over a :mod:`refbetti.field`.

Subspaces are stored canonically: the nonzero rows of the reduced row-echelon
form of any spanning set. Two equal subspaces therefore compare equal as
Python values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import Field


class DimensionMismatch(ValueError):
    pass


class NotContained(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: int
    cols: int
    data: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(field(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("cols is required for a matrix with no rows")
            cols = len(data[0])
        return cls(field, len(data), cols, data)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = [tuple(field(x) for x in c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise ValueError("column length does not match rows")
        data = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(field, rows, len(cols), data)

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, tuple((field.zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls(
            field, n, n,
            tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)),
        )

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        F = self.field
        ocols = other.columns()
        data = tuple(tuple(_dot(F, row, c) for c in ocols) for row in self.data)
        return Matrix(F, self.rows, other.cols, data)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionMismatch("vector length does not match matrix columns")
        return tuple(_dot(self.field, row, v) for row in self.data)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)


def _dot(F, u, v):
    acc = F.zero
    for x, y in zip(u, v):
        if x and y:
            acc = F.add(acc, F.mul(x, y))
    return acc


def dot(F, u: Sequence, v: Sequence):
    """Standard coordinate dot product."""
    if len(u) != len(v):
        raise DimensionMismatch("vectors of different length")
    return _dot(F, u, v)


def _rref_rows(F, rows: list[list], ncols: int):
    """In-place RREF of a list of mutable rows; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r]
        inv = F.inv(piv[c])
        if inv != F.one:
            for k in range(c, ncols):
                if piv[k]:
                    piv[k] = F.mul(piv[k], inv)
        for i in range(nrows):
            if i != r:
                row = rows[i]
                factor = row[c]
                if factor:
                    for k in range(c, ncols):
                        if piv[k]:
                            row[k] = F.sub(row[k], F.mul(factor, piv[k]))
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank."""
    rows = [list(r) for r in m.data]
    pivots = _rref_rows(m.field, rows, m.cols)
    reduced = Matrix(m.field, m.rows, m.cols, tuple(tuple(r) for r in rows))
    return reduced, pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of ``field**ambient_dim`` in canonical form."""

    field: Field
    ambient_dim: int
    vectors: tuple  # RREF rows, each a tuple of length ambient_dim

    @property
    def rank(self) -> int:
        return len(self.vectors)

    dim = rank

    @property
    def basis(self) -> Matrix:
        """Basis vectors as the columns of a matrix (column-reduced echelon form)."""
        return Matrix.from_columns(self.field, self.vectors, self.ambient_dim)

    @classmethod
    def span(cls, field, ambient_dim: int, vectors) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            rows.append([field(x) for x in v])
        _rref_rows(field, rows, ambient_dim)
        return cls(field, ambient_dim, tuple(tuple(r) for r in rows if any(r)))

    @classmethod
    def zero(cls, field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, ())

    @classmethod
    def full(cls, field, ambient_dim: int) -> "Subspace":
        return cls.span(field, ambient_dim, Matrix.identity(field, ambient_dim).data)

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        F = self.field
        w = [F(x) for x in v]
        for row in self.vectors:
            c = next(i for i, x in enumerate(row) if x)
            if w[c]:
                factor = w[c]
                for k in range(c, self.ambient_dim):
                    if row[k]:
                        w[k] = F.sub(w[k], F.mul(factor, row[k]))
        return not any(w)

    def __le__(self, other: "Subspace") -> bool:
        _check_compatible(self, other)
        return all(other.contains_vector(v) for v in self.vectors)

    def __repr__(self):
        return f"Subspace(dim={self.rank}, ambient={self.ambient_dim}, field={self.field})"


def _check_compatible(u: Subspace, v: Subspace):
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {u.ambient_dim} vs {v.ambient_dim}")
    if u.field != v.field:
        raise DimensionMismatch(f"fields differ: {u.field} vs {v.field}")


def image(m: Matrix) -> Subspace:
    """Column space of ``m``."""
    return Subspace.span(m.field, m.rows, m.columns())


def kernel(m: Matrix) -> Subspace:
    """Null space of ``m`` inside ``field**m.cols``."""
    F = m.field
    reduced, pivots, _ = rref(m)
    pivset = set(pivots)
    vecs = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [F.zero] * m.cols
        v[free] = F.one
        for i, pc in enumerate(pivots):
            x = reduced.data[i][free]
            if x:
                v[pc] = F.neg(x)
        vecs.append(v)
    return Subspace.span(F, m.cols, vecs)


def sum_(u: Subspace, v: Subspace) -> Subspace:
    _check_compatible(u, v)
    return Subspace.span(u.field, u.ambient_dim, u.vectors + v.vectors)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Solve ``U y = V z`` and map the solutions back through ``U``."""
    _check_compatible(u, v)
    F = u.field
    n = u.ambient_dim
    if not u.vectors or not v.vectors:
        return Subspace.zero(F, n)
    # columns: u basis, then -v basis
    cols = list(u.vectors) + [tuple(F.neg(x) for x in w) for w in v.vectors]
    system = Matrix.from_columns(F, cols, n)
    ker = kernel(system)
    k = u.rank
    out = []
    for sol in ker.vectors:
        y = sol[:k]
        vec = [F.zero] * n
        for coef, basis_vec in zip(y, u.vectors):
            if coef:
                for i, x in enumerate(basis_vec):
                    if x:
                        vec[i] = F.add(vec[i], F.mul(coef, x))
        out.append(vec)
    return Subspace.span(F, n, out)


def quotient_basis(v: Subspace, w: Subspace) -> list[tuple]:
    """Vectors of ``v`` whose classes form a basis of ``v / w``.

    The basis of ``w`` is extended by the canonical basis vectors of ``v`` in
    order, so the choice is deterministic.
    """
    _check_compatible(v, w)
    if not w <= v:
        raise NotContained("w is not contained in v")
    F = v.field
    rows = [list(x) for x in w.vectors]
    current = len(rows)
    reps = []
    for cand in v.vectors:
        trial = [list(r) for r in rows] + [list(cand)]
        if len(_rref_rows(F, trial, v.ambient_dim)) > current:
            rows = [r for r in trial if any(r)]
            current += 1
            reps.append(tuple(cand))
    return reps


def orth_complement(w: Subspace, v: Subspace) -> Subspace:
    """``w``-perp inside ``v`` for the coordinate dot product (rationals only)."""
    _check_compatible(w, v)
    if not v.field.is_rational:
        raise ValueError("orthogonal complements need the rational field")
    if not w <= v:
        raise NotContained("w is not contained in v")
    F = v.field
    if not v.vectors:
        return Subspace.zero(F, v.ambient_dim)
    if not w.vectors:
        return v
    # x = sum y_j v_j with <x, w_i> = 0 for all i
    gram = Matrix.from_rows(F, [[dot(F, wi, vj) for vj in v.vectors] for wi in w.vectors], cols=v.rank)
    coeffs = kernel(gram)
    out = []
    for y in coeffs.vectors:
        x = [F.zero] * v.ambient_dim
        for c, vj in zip(y, v.vectors):
            if c:
                for i, e in enumerate(vj):
                    x[i] = x[i] + c * e
        out.append(x)
    return Subspace.span(F, v.ambient_dim, out)


def left_inverse(m: Matrix) -> Matrix:
    """A matrix ``L`` with ``L @ m = I`` for ``m`` of full column rank."""
    F = m.field
    n, k = m.rows, m.cols
    aug = [list(m.data[i]) + [F.one if j == i else F.zero for j in range(n)] for i in range(n)]
    pivots = _rref_rows(F, aug, k + n)
    if pivots[:k] != list(range(k)):
        raise ValueError("matrix does not have full column rank")
    return Matrix(F, k, n, tuple(tuple(aug[i][k:]) for i in range(k)))
