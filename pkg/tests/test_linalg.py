import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import from_mask, set_dim, set_sum, span_set, to_mask
from refbetti.field import QQ, PrimeField
from refbetti.linalg import (
    DimensionMismatch,
    Matrix,
    NotContained,
    Subspace,
    dot,
    image,
    intersect,
    kernel,
    left_inverse,
    orth_complement,
    quotient_basis,
    rank,
    rref,
    sum_,
)

GF2, GF3, GF5 = PrimeField(2), PrimeField(3), PrimeField(5)


def random_subspace(rng, field, n, max_gens=None):
    k = rng.randint(0, max_gens if max_gens is not None else n)
    vals = range(field.p) if not field.is_rational else range(-3, 4)
    return Subspace.span(field, n, [[rng.choice(vals) for _ in range(n)] for _ in range(k)])


def as_set(s: Subspace) -> frozenset:
    return span_set(to_mask(v) for v in s.vectors)


# --- exhaustive GF(2) comparisons ------------------------------------------------


def test_gf2_operations_match_enumeration():
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randint(1, 4)
        u, v = random_subspace(rng, GF2, n), random_subspace(rng, GF2, n)
        su, sv = as_set(u), as_set(v)
        assert as_set(sum_(u, v)) == set_sum(su, sv)
        assert as_set(intersect(u, v)) == su & sv
        w = intersect(u, v)
        reps = quotient_basis(u, w)
        assert len(reps) == set_dim(su) - set_dim(su & sv)
        assert span_set([to_mask(r) for r in reps] + [to_mask(x) for x in w.vectors]) == su


def test_gf2_rank_matches_enumeration():
    rng = random.Random(7)
    for _ in range(100):
        rows = [[rng.randint(0, 1) for _ in range(4)] for _ in range(rng.randint(1, 5))]
        assert rank(Matrix.from_rows(GF2, rows)) == set_dim(span_set(to_mask(r) for r in rows))


def test_gf2_kernel_matches_enumeration():
    rng = random.Random(11)
    for _ in range(60):
        cols = rng.randint(1, 5)
        rows = [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rng.randint(1, 4))]
        m = Matrix.from_rows(GF2, rows)
        brute = {x for x in range(1 << cols)
                 if all(sum(a * b for a, b in zip(r, from_mask(x, cols))) % 2 == 0 for r in rows)}
        assert as_set(kernel(m)) == brute


# --- property tests over Q and GF(p) -------------------------------------------

small = st.integers(-3, 3)


@st.composite
def matrices(draw, field=QQ, max_dim=5):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    data = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix.from_rows(field, data)


@st.composite
def subspace_pairs(draw, field=QQ):
    n = draw(st.integers(1, 5))
    vec = st.lists(small, min_size=n, max_size=n)
    u = Subspace.span(field, n, draw(st.lists(vec, max_size=n)))
    v = Subspace.span(field, n, draw(st.lists(vec, max_size=n)))
    return u, v


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel(m).rank == m.cols


@given(matrices(field=GF5))
def test_rank_nullity_gf5(m):
    assert rank(m) + kernel(m).rank == m.cols


@given(matrices())
def test_kernel_vectors_are_annihilated(m):
    for v in kernel(m).vectors:
        assert not any(m.apply(v))


@given(matrices())
def test_rref_is_idempotent_and_rank_transposes(m):
    r1, piv, k = rref(m)
    r2, piv2, k2 = rref(r1)
    assert r1 == r2 and piv == piv2 and k == k2
    assert rank(m.T) == k


@given(subspace_pairs())
def test_dimension_formula(pair):
    u, v = pair
    assert sum_(u, v).rank + intersect(u, v).rank == u.rank + v.rank


@given(subspace_pairs(field=GF3))
def test_dimension_formula_gf3(pair):
    u, v = pair
    assert sum_(u, v).rank + intersect(u, v).rank == u.rank + v.rank


@given(subspace_pairs())
def test_containments(pair):
    u, v = pair
    i, s = intersect(u, v), sum_(u, v)
    assert i <= u and i <= v and u <= s and v <= s


@given(subspace_pairs())
def test_canonical_form_is_span_invariant(pair):
    u, v = pair
    assert sum_(u, v) == sum_(v, u)
    assert intersect(u, v) == intersect(v, u)
    assert Subspace.span(QQ, u.ambient_dim, list(reversed(u.vectors)) + list(u.vectors)) == u


@given(subspace_pairs())
def test_quotient_basis_properties(pair):
    u, v = pair
    big = sum_(u, v)
    reps = quotient_basis(big, u)
    assert len(reps) == big.rank - u.rank
    assert all(big.contains_vector(r) for r in reps)
    assert Subspace.span(QQ, big.ambient_dim, list(u.vectors) + reps) == big


def test_quotient_basis_requires_containment():
    u = Subspace.span(QQ, 2, [[1, 0]])
    v = Subspace.span(QQ, 2, [[0, 1]])
    with pytest.raises(NotContained):
        quotient_basis(u, v)


@given(subspace_pairs())
def test_orth_complement(pair):
    u, v = pair
    big = sum_(u, v)
    h = orth_complement(u, big)
    assert h.rank + u.rank == big.rank
    assert h <= big
    for x in h.vectors:
        for y in u.vectors:
            assert dot(QQ, x, y) == 0


def test_orth_complement_needs_rationals():
    with pytest.raises(ValueError):
        orth_complement(Subspace.zero(GF2, 2), Subspace.full(GF2, 2))


def test_left_inverse():
    m = Matrix.from_rows(QQ, [[1, 2], [3, 4], [5, 6]])
    L = left_inverse(m)
    assert L @ m == Matrix.identity(QQ, 2)
    with pytest.raises(ValueError):
        left_inverse(Matrix.from_rows(QQ, [[1, 2], [2, 4]]))


def test_image_is_column_space():
    m = Matrix.from_rows(QQ, [[1, 0, 1], [0, 1, 1]])
    assert image(m) == Subspace.full(QQ, 2)
    assert image(Matrix.zeros(QQ, 3, 2)).rank == 0


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        sum_(Subspace.zero(QQ, 2), Subspace.zero(QQ, 3))
    with pytest.raises(DimensionMismatch):
        Subspace.span(QQ, 2, [[1, 2, 3]])
    with pytest.raises(DimensionMismatch):
        intersect(Subspace.zero(QQ, 2), Subspace.zero(GF2, 2))


def test_exact_fractions_survive():
    u = Subspace.span(QQ, 2, [[Fraction(1, 3), Fraction(2, 7)]])
    assert u.vectors == ((Fraction(1), Fraction(6, 7)),)
