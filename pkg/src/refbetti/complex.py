"""Finite simplicial complexes, PL vertex functions and their homology."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .field import Field, parse_rational
from .linalg import Matrix, Subspace, image, kernel, left_inverse, quotient_basis, rank


@dataclass(frozen=True)
class Violation:
    kind: str  # vertex-out-of-range | unsorted | duplicate | missing-face
    simplex: tuple
    detail: str

    def __str__(self):
        return f"{self.kind}: {list(self.simplex)} ({self.detail})"


class InvalidComplex(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices are vertex tuples, grouped by dimension in their given order.

    The order within a dimension fixes the chain-space coordinates.
    """

    n_vertices: int
    simplices: tuple  # simplices[d] = tuple of d-simplices

    @classmethod
    def from_simplices(cls, n_vertices: int, simplices: Sequence[Sequence[int]]) -> "SimplicialComplex":
        by_dim: list[list[tuple]] = []
        for s in simplices:
            s = tuple(int(v) for v in s)
            if not s:
                continue
            d = len(s) - 1
            while len(by_dim) <= d:
                by_dim.append([])
            by_dim[d].append(s)
        while by_dim and not by_dim[-1]:
            by_dim.pop()
        return cls(n_vertices, tuple(tuple(g) for g in by_dim))

    @classmethod
    def closure(cls, n_vertices: int, facets: Sequence[Sequence[int]]) -> "SimplicialComplex":
        """Smallest complex containing ``facets``, simplices sorted within each dimension."""
        faces = set()
        for f in facets:
            f = tuple(sorted(f))
            for k in range(1, len(f) + 1):
                faces.update(combinations(f, k))
        return cls.from_simplices(n_vertices, sorted(faces, key=lambda s: (len(s), s)))

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def is_empty(self) -> bool:
        return not self.simplices

    def cells(self, d: int) -> tuple:
        if 0 <= d < len(self.simplices):
            return self.simplices[d]
        return ()

    @cached_property
    def _index(self) -> list[dict]:
        return [{s: i for i, s in enumerate(g)} for g in self.simplices]

    def index(self, simplex: tuple) -> int | None:
        d = len(simplex) - 1
        if d >= len(self._index):
            return None
        return self._index[d].get(simplex)

    def all_simplices(self):
        for g in self.simplices:
            yield from g


def validate(k: SimplicialComplex) -> Violation | None:
    """Return the first structural violation of ``k``, or ``None``."""
    seen = set()
    for s in k.all_simplices():
        for v in s:
            if not 0 <= v < k.n_vertices:
                return Violation("vertex-out-of-range", s, f"vertex {v} not below n_vertices={k.n_vertices}")
        if any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
            return Violation("unsorted", s, "vertices must be strictly increasing")
        if s in seen:
            return Violation("duplicate", s, "simplex listed twice")
        seen.add(s)
    for s in k.all_simplices():
        if len(s) > 1:
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                if face not in seen:
                    return Violation("missing-face", s, f"face {list(face)} is not listed")
    return None


def check(k: SimplicialComplex) -> SimplicialComplex:
    v = validate(k)
    if v is not None:
        raise InvalidComplex(v)
    return k


def as_values(values, n_vertices: int | None = None) -> tuple[Fraction, ...]:
    """Exact vertex values; decimal strings are parsed without rounding."""
    vals = tuple(parse_rational(x) for x in values)
    if n_vertices is not None and len(vals) != n_vertices:
        raise ValueError(f"expected {n_vertices} vertex values, got {len(vals)}")
    return vals


def boundary_matrix(k: SimplicialComplex, r: int, field: Field) -> Matrix:
    """Matrix of the boundary map from r-chains to (r-1)-chains."""
    if r < 1:
        raise ValueError("boundary_matrix needs r >= 1")
    rows, cols = k.cells(r - 1), k.cells(r)
    data = [[field.zero] * len(cols) for _ in rows]
    minus = field.neg(field.one)
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            data[k.index(face)][j] = field.one if i % 2 == 0 else minus
    return Matrix(field, len(rows), len(cols), tuple(tuple(r_) for r_ in data))


@dataclass(frozen=True)
class HomologyBasis:
    """A basis of H_r together with a way to read off coordinates of cycles."""

    degree: int
    field: Field
    betti: int
    n_chains: int
    cycle_reps: tuple  # chain vectors
    coord_matrix: Matrix = dc_field(repr=False)  # betti x n_chains

    def coordinates(self, cycle: Sequence) -> tuple:
        """Coordinates of the class of ``cycle`` (which must be a cycle)."""
        return self.coord_matrix.apply(cycle)


def homology_basis(k: SimplicialComplex, r: int, field: Field) -> HomologyBasis:
    n = len(k.cells(r))
    if n == 0:
        return HomologyBasis(r, field, 0, 0, (), Matrix.zeros(field, 0, 0))
    if r == 0:
        cycles = Subspace.full(field, n)
    else:
        cycles = kernel(boundary_matrix(k, r, field))
    if k.cells(r + 1):
        bounds = image(boundary_matrix(k, r + 1, field))
    else:
        bounds = Subspace.zero(field, n)
    reps = quotient_basis(cycles, bounds)
    # coordinates w.r.t. [boundaries | reps]; keep the reps block
    m = Matrix.from_columns(field, list(bounds.vectors) + reps, n)
    inv = left_inverse(m)
    coord = Matrix(field, len(reps), n, inv.data[bounds.rank:])
    return HomologyBasis(r, field, len(reps), n, tuple(reps), coord)


def betti_numbers(k: SimplicialComplex, field: Field) -> list[int]:
    """Betti numbers in degrees 0..dim via rank-nullity (no basis construction)."""
    out = []
    for r in range(k.dim + 1):
        n = len(k.cells(r))
        rk_r = rank(boundary_matrix(k, r, field)) if r >= 1 else 0
        rk_up = rank(boundary_matrix(k, r + 1, field)) if k.cells(r + 1) else 0
        out.append(n - rk_r - rk_up)
    return out


def _full_subcomplex(k: SimplicialComplex, keep) -> tuple[SimplicialComplex, tuple[int, ...]]:
    relabel = tuple(v for v in range(k.n_vertices) if keep(v))
    new = {old: i for i, old in enumerate(relabel)}
    simplices = [tuple(new[v] for v in s) for s in k.all_simplices() if all(v in new for v in s)]
    return SimplicialComplex.from_simplices(len(relabel), simplices), relabel


def sublevel_subcomplex(k: SimplicialComplex, f: Sequence[Fraction], a) -> tuple[SimplicialComplex, tuple[int, ...]]:
    """Full subcomplex on ``{v : f(v) <= a}`` plus the new-to-old vertex map."""
    a = Fraction(a)
    return _full_subcomplex(k, lambda v: f[v] <= a)


def superlevel_subcomplex(k: SimplicialComplex, f: Sequence[Fraction], b) -> tuple[SimplicialComplex, tuple[int, ...]]:
    """Full subcomplex on ``{v : f(v) >= b}`` plus the new-to-old vertex map."""
    b = Fraction(b)
    return _full_subcomplex(k, lambda v: f[v] >= b)


def _permutation_sign(seq: Sequence[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def induced_homology_map(
    sub: SimplicialComplex,
    relabel: Sequence[int],
    whole: SimplicialComplex,
    r: int,
    field: Field,
    sub_basis: HomologyBasis | None = None,
    whole_basis: HomologyBasis | None = None,
) -> Matrix:
    """Matrix of H_r(sub) -> H_r(whole) in the two homology bases."""
    if len(relabel) != sub.n_vertices or len(set(relabel)) != len(relabel):
        raise ValueError("relabeling is not injective on the vertices of sub")
    if sub_basis is None:
        sub_basis = homology_basis(sub, r, field)
    if whole_basis is None:
        whole_basis = homology_basis(whole, r, field)
    cells = sub.cells(r)
    target = []
    for s in cells:
        image_s = tuple(relabel[v] for v in s)
        sign = _permutation_sign(image_s)
        img = tuple(sorted(image_s))
        idx = whole.index(img)
        if idx is None:
            raise ValueError(f"simplex {list(s)} does not map to a simplex of the ambient complex")
        target.append((idx, field.one if sign > 0 else field.neg(field.one)))
    columns = []
    for rep in sub_basis.cycle_reps:
        chain = [field.zero] * whole_basis.n_chains
        for x, (idx, sgn) in zip(rep, target):
            if x:
                chain[idx] = field.add(chain[idx], field.mul(x, sgn))
        columns.append(whole_basis.coordinates(chain) if whole_basis.betti else ())
    return Matrix.from_columns(field, columns, whole_basis.betti)


@dataclass(frozen=True)
class CriticalGrid:
    """Sorted distinct vertex values with one sentinel on each side."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("critical grid of an empty complex")
        if any(self.values[i] >= self.values[i + 1] for i in range(len(self.values) - 1)):
            raise ValueError("grid values must be strictly increasing")

    @property
    def low(self) -> Fraction:
        return self.values[0] - 1

    @property
    def high(self) -> Fraction:
        return self.values[-1] + 1

    @property
    def extended(self) -> tuple:
        return (self.low, *self.values, self.high)

    @property
    def min_gap(self) -> Fraction | None:
        """Smallest gap between consecutive values; ``None`` for a one-point grid."""
        if len(self.values) < 2:
            return None
        return min(b - a for a, b in zip(self.values, self.values[1:]))

    def __len__(self):
        return len(self.values)


def critical_grid(k: SimplicialComplex, f: Sequence[Fraction]) -> CriticalGrid:
    if k.n_vertices == 0:
        raise ValueError("critical grid of an empty complex")
    return CriticalGrid(tuple(sorted(set(Fraction(x) for x in f[: k.n_vertices]))))


def image_rank_at(k: SimplicialComplex, f, t, r: int, field: Field, *, upper: bool, whole_basis=None) -> int:
    """dim of the image of H_r(sublevel or superlevel at t) in H_r(k)."""
    sub, relabel = (superlevel_subcomplex if upper else sublevel_subcomplex)(k, f, t)
    m = induced_homology_map(sub, relabel, k, r, field, whole_basis=whole_basis)
    if m.rows == 0 or m.cols == 0:
        return 0
    return rank(m)


def detect_homological_CR(k: SimplicialComplex, f, r: int, field: Field) -> list[Fraction]:
    """Grid values where the sublevel image grows (upward) or the superlevel image grows (downward)."""
    grid = critical_grid(k, f)
    hb = homology_basis(k, r, field)
    ext = grid.extended
    lower = [image_rank_at(k, f, t, r, field, upper=False, whole_basis=hb) for t in ext]
    upper = [image_rank_at(k, f, t, r, field, upper=True, whole_basis=hb) for t in ext]
    out = []
    for i in range(1, len(ext) - 1):
        if lower[i] > lower[i - 1] or upper[i] > upper[i + 1]:
            out.append(ext[i])
    return out
