"""Bi-filtered image subspaces of H_r(X) and the refined Betti configurations.

For a PL function on a finite complex all the subspaces only change at vertex
values, so everything is evaluated on the critical grid extended by one
sentinel on each side (empty sublevel below, empty superlevel above).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .complex import (
    CriticalGrid,
    HomologyBasis,
    SimplicialComplex,
    boundary_matrix,
    critical_grid,
    homology_basis,
    induced_homology_map,
    sublevel_subcomplex,
    superlevel_subcomplex,
)
from .configspace import Configuration
from .field import Field, format_rational
from .linalg import Matrix, Subspace, image, intersect, kernel, orth_complement, quotient_basis, sum_


class OffGrid(ValueError):
    pass


class StabilizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Box:
    """The half-open rectangle ``(a_lo, a] x [b, b_hi)``."""

    a_lo: Fraction
    a: Fraction
    b: Fraction
    b_hi: Fraction

    def __post_init__(self):
        if not (self.a_lo < self.a and self.b < self.b_hi):
            raise ValueError(f"degenerate box {self}")

    def contains(self, x, y) -> bool:
        return self.a_lo < x <= self.a and self.b <= y < self.b_hi

    def __str__(self):
        f = format_rational
        return f"({f(self.a_lo)}, {f(self.a)}] x [{f(self.b)}, {f(self.b_hi)})"


def sublevel_image(k, f, t, r, field, whole_basis: HomologyBasis) -> Subspace:
    """Image of H_r of the sublevel at ``t`` inside H_r(k)."""
    sub, relabel = sublevel_subcomplex(k, f, t)
    return image(induced_homology_map(sub, relabel, k, r, field, whole_basis=whole_basis))


def superlevel_image(k, f, t, r, field, whole_basis: HomologyBasis) -> Subspace:
    sub, relabel = superlevel_subcomplex(k, f, t)
    return image(induced_homology_map(sub, relabel, k, r, field, whole_basis=whole_basis))


@dataclass(frozen=True, eq=False)
class ImageTable:
    """Sublevel and superlevel images over the extended grid, in H_r(X) coordinates."""

    degree: int
    field: Field
    grid: CriticalGrid
    basis: HomologyBasis
    I_sub: tuple  # indexed like grid.extended
    I_super: tuple

    @property
    def ambient_dim(self) -> int:
        return self.basis.betti

    @cached_property
    def _pos(self) -> dict:
        return {c: i for i, c in enumerate(self.grid.extended)}

    def position(self, value) -> int:
        try:
            return self._pos[Fraction(value)]
        except (KeyError, TypeError):
            raise OffGrid(f"{value!r} is not a grid or sentinel value") from None

    @cached_property
    def _F(self) -> dict:
        return {}

    def F_at(self, i: int, j: int) -> Subspace:
        """F at extended-grid positions (i, j)."""
        key = (i, j)
        cache = self._F
        if key not in cache:
            cache[key] = intersect(self.I_sub[i], self.I_super[j])
        return cache[key]

    @cached_property
    def F_dims(self) -> list[list[int]]:
        n = len(self.grid.extended)
        return [[self.F_at(i, j).rank for j in range(n)] for i in range(n)]

    @cached_property
    def _S(self) -> dict:
        return {}

    def S_at(self, i: int, j: int) -> Subspace:
        """I_sub[i] + I_super[j]."""
        key = (i, j)
        if key not in self._S:
            self._S[key] = sum_(self.I_sub[i], self.I_super[j])
        return self._S[key]


@lru_cache(maxsize=32)
def _chain_data(k: SimplicialComplex, field: Field):
    """Boundary matrices (as column lists) and homology bases of ``k``, per degree."""
    bases = [homology_basis(k, r, field) for r in range(k.dim + 1)]
    boundary_cols = [None] + [boundary_matrix(k, r, field).columns() for r in range(1, k.dim + 1)]
    return bases, boundary_cols


def _cycle_image(k, keep, r, field, hb, boundary_cols) -> Subspace:
    """Image in H_r(k) of the cycles of the full subcomplex on vertices ``keep``.

    Boundaries of the subcomplex are boundaries of ``k``, so this is the
    image of its homology.
    """
    n_r = len(k.cells(r))
    idx = [i for i, s in enumerate(k.cells(r)) if all(v in keep for v in s)]
    if not idx or hb.betti == 0:
        return Subspace.zero(field, hb.betti)
    if r == 0:
        local = [[field.one if t == c else field.zero for t in range(len(idx))] for c in range(len(idx))]
    else:
        n_rows = len(k.cells(r - 1))
        sub = Matrix.from_columns(field, [boundary_cols[r][i] for i in idx], n_rows)
        local = kernel(sub).vectors
    vecs = []
    for z in local:
        chain = [field.zero] * n_r
        for x, i in zip(z, idx):
            chain[i] = x
        vecs.append(hb.coordinates(chain))
    return Subspace.span(field, hb.betti, vecs)


def build_image_tables(k: SimplicialComplex, f: Sequence[Fraction], field: Field) -> list[ImageTable]:
    """Image tables for every degree 0..dim(k)."""
    return list(_image_tables(k, tuple(Fraction(x) for x in f), field))


@lru_cache(maxsize=64)
def _image_tables(k: SimplicialComplex, f: tuple, field: Field) -> tuple:
    grid = critical_grid(k, f)
    bases, boundary_cols = _chain_data(k, field)
    ext = grid.extended
    out = []
    lows = [frozenset(v for v in range(k.n_vertices) if f[v] <= c) for c in ext]
    highs = [frozenset(v for v in range(k.n_vertices) if f[v] >= c) for c in ext]
    for r, hb in enumerate(bases):
        I_sub = tuple(_cycle_image(k, keep, r, field, hb, boundary_cols) for keep in lows)
        I_super = tuple(_cycle_image(k, keep, r, field, hb, boundary_cols) for keep in highs)
        out.append(ImageTable(r, field, grid, hb, I_sub, I_super))
    return tuple(out)


def build_image_table(k: SimplicialComplex, f: Sequence[Fraction], r: int, field: Field) -> ImageTable:
    if r <= k.dim:
        return build_image_tables(k, f, field)[r]
    grid = critical_grid(k, f)
    hb = homology_basis(k, r, field)
    zeros = (Subspace.zero(field, 0),) * len(grid.extended)
    return ImageTable(r, field, grid, hb, zeros, zeros)


def compute_F(table: ImageTable, a, b) -> Subspace:
    return table.F_at(table.position(a), table.position(b))


def _box_positions(table: ImageTable, box: Box):
    return (table.position(box.a_lo), table.position(box.a),
            table.position(box.b), table.position(box.b_hi))


def F_box_dim_at(table: ImageTable, i_lo: int, i: int, j: int, j_hi: int) -> int:
    d = table.F_dims
    return d[i][j] + d[i_lo][j_hi] - d[i_lo][j] - d[i][j_hi]


def compute_F_box_dim(table: ImageTable, box: Box) -> int:
    """dim F(a,b) / (F(a',b) + F(a,b')) by inclusion-exclusion."""
    return F_box_dim_at(table, *_box_positions(table, box))


def G_box_dim_at(table: ImageTable, i_lo: int, i: int, j: int, j_hi: int) -> int:
    top = intersect(table.S_at(i_lo, j), table.S_at(i, j_hi))
    bottom = table.S_at(i_lo, j_hi)
    return len(quotient_basis(top, bottom))


def compute_G_box_dim(table: ImageTable, box: Box) -> int:
    """dim of ((I_a' + I^b) cap (I_a + I^b')) / (I_a' + I^b')."""
    return G_box_dim_at(table, *_box_positions(table, box))


def delta_from_table(table: ImageTable) -> Configuration:
    ext = table.grid.extended
    entries = {}
    for i in range(1, len(ext) - 1):
        for j in range(1, len(ext) - 1):
            m = F_box_dim_at(table, i - 1, i, j, j + 1)
            if m < 0:
                raise ArithmeticError(f"negative box dimension at {(ext[i], ext[j])}")
            if m:
                entries[(ext[i], ext[j])] = m
    return Configuration(entries)


def compute_delta(k: SimplicialComplex, f, r: int, field: Field) -> Configuration:
    """The refined Betti configuration in degree ``r``."""
    return delta_from_table(build_image_table(k, f, r, field))


@dataclass(frozen=True)
class VectorConfiguration:
    """Representative vectors (H_r coordinates) at each support point."""

    entries: dict  # (a, b) -> tuple of vectors

    def dims(self) -> Configuration:
        return Configuration({p: len(v) for p, v in self.entries.items()})

    def all_vectors(self) -> list[tuple]:
        return [v for p in sorted(self.entries) for v in self.entries[p]]


def _F_prime(table: ImageTable, i: int, j: int) -> Subspace:
    return sum_(table.F_at(i - 1, j), table.F_at(i, j + 1))


def hat_delta_from_table(table: ImageTable) -> VectorConfiguration:
    ext = table.grid.extended
    entries = {}
    for i in range(1, len(ext) - 1):
        for j in range(1, len(ext) - 1):
            reps = quotient_basis(table.F_at(i, j), _F_prime(table, i, j))
            if reps:
                entries[(ext[i], ext[j])] = tuple(reps)
    return VectorConfiguration(entries)


def compute_hat_delta(k: SimplicialComplex, f, r: int, field: Field) -> VectorConfiguration:
    return hat_delta_from_table(build_image_table(k, f, r, field))


@dataclass(frozen=True)
class OrthoConfiguration:
    """Mutually orthogonal subspaces of H_r(X) indexed by support points."""

    entries: dict  # (a, b) -> Subspace

    def dims(self) -> Configuration:
        return Configuration({p: s.rank for p, s in self.entries.items()})


def ortho_from_table(table: ImageTable) -> OrthoConfiguration:
    if not table.field.is_rational:
        raise ValueError("the orthogonal refinement needs the rational field")
    ext = table.grid.extended
    entries = {}
    for i in range(1, len(ext) - 1):
        for j in range(1, len(ext) - 1):
            F = table.F_at(i, j)
            H = orth_complement(_F_prime(table, i, j), F)
            if H.rank:
                entries[(ext[i], ext[j])] = H
    return OrthoConfiguration(entries)


def compute_ortho_delta(k: SimplicialComplex, f, r: int, field: Field) -> OrthoConfiguration:
    if not field.is_rational:
        raise ValueError("the orthogonal refinement needs the rational field")
    return ortho_from_table(build_image_table(k, f, r, field))


# --- independent oracle: the shrinking-box limit ------------------------------


def oracle_delta_stabilization(k: SimplicialComplex, f, r: int, field: Field, point, n_scales: int = 4) -> int:
    """delta at ``point`` as the stable value of dim F(B(a, b; eps)) as eps shrinks.

    Every F here is recomputed from sublevel/superlevel complexes at the
    actual (off-grid) parameters; the grid table is not consulted.
    """
    a, b = (Fraction(x) for x in point)
    grid = critical_grid(k, f)
    gap = grid.min_gap if grid.min_gap is not None else Fraction(2)
    hb = homology_basis(k, r, field)
    cache = {}

    def I_lo(t):
        if ("lo", t) not in cache:
            cache["lo", t] = sublevel_image(k, f, t, r, field, hb)
        return cache["lo", t]

    def I_hi(t):
        if ("hi", t) not in cache:
            cache["hi", t] = superlevel_image(k, f, t, r, field, hb)
        return cache["hi", t]

    def Fdim(x, y):
        return intersect(I_lo(x), I_hi(y)).rank

    values = []
    eps = gap / 2
    for _ in range(n_scales):
        v = Fdim(a, b) + Fdim(a - eps, b + eps) - Fdim(a - eps, b) - Fdim(a, b + eps)
        values.append(v)
        eps /= 2
    if len(set(values)) != 1:
        raise StabilizationError(f"box dimensions did not stabilize at {point}: {values}")
    return values[0]
