"""Brute-force reference implementations used by the tests.

Nothing here imports the linear algebra of the package: GF(2) vectors are
bitmask ints and subspaces are explicit sets of their elements.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


# --- GF(2) subspaces as explicit sets ----------------------------------------


def to_mask(v) -> int:
    return sum(1 << i for i, x in enumerate(v) if x % 2)


def from_mask(m: int, n: int) -> tuple:
    return tuple((m >> i) & 1 for i in range(n))


def span_set(gens) -> frozenset:
    out = {0}
    for g in gens:
        if g not in out:
            out |= {x ^ g for x in out}
    return frozenset(out)


def set_dim(s) -> int:
    d = int(math.log2(len(s)))
    assert 1 << d == len(s)
    return d


def set_sum(u, v) -> frozenset:
    return frozenset(x ^ y for x in u for y in v)


# --- GF(2) homology of a small complex by enumeration --------------------------


def _boundary_masks(k, r):
    """Boundary of each r-cell as a bitmask over the (r-1)-cells."""
    if r == 0:
        return [0] * len(k.cells(0))
    idx = {s: i for i, s in enumerate(k.cells(r - 1))}
    out = []
    for s in k.cells(r):
        m = 0
        for i in range(len(s)):
            m ^= 1 << idx[s[:i] + s[i + 1:]]
        out.append(m)
    return out


def cycles_set(k, r, keep=None) -> frozenset:
    """All r-cycles supported on simplices with every vertex in ``keep`` (bitmasks over k's r-cells)."""
    cells = k.cells(r)
    bnd = _boundary_masks(k, r)
    allowed = [i for i, s in enumerate(cells) if keep is None or all(v in keep for v in s)]
    out = set()
    for bits in range(1 << len(allowed)):
        chain, b = 0, 0
        for j, i in enumerate(allowed):
            if (bits >> j) & 1:
                chain |= 1 << i
                b ^= bnd[i]
        if b == 0:
            out.add(chain)
    return frozenset(out)


def boundaries_set(k, r) -> frozenset:
    if r + 1 > k.dim:
        return frozenset({0})
    return span_set(_boundary_masks(k, r + 1))


def betti_gf2(k, r) -> int:
    return set_dim(cycles_set(k, r)) - set_dim(boundaries_set(k, r))


def components(n_vertices: int, edges) -> int:
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(x) for x in range(n_vertices)})


def euler_characteristic(k) -> int:
    return sum((-1) ** d * len(k.cells(d)) for d in range(k.dim + 1))


def delta_gf2(k, f, r) -> dict:
    """delta_r over GF(2) from explicit cycle sets and the grid formula."""
    vals = sorted(set(Fraction(x) for x in f))
    ext = [vals[0] - 1, *vals, vals[-1] + 1]
    B = boundaries_set(k, r)
    dB = set_dim(B)
    lo = [set_sum(cycles_set(k, r, {v for v in range(k.n_vertices) if f[v] <= c}), B) for c in ext]
    hi = [set_sum(cycles_set(k, r, {v for v in range(k.n_vertices) if f[v] >= c}), B) for c in ext]

    def F(i, j):
        return set_dim(lo[i] & hi[j]) - dB

    out = {}
    for i in range(1, len(ext) - 1):
        for j in range(1, len(ext) - 1):
            m = F(i, j) + F(i - 1, j + 1) - F(i - 1, j) - F(i, j + 1)
            if m:
                out[(ext[i], ext[j])] = m
    return out


# --- matchings ----------------------------------------------------------------


def brute_bottleneck(p1, p2) -> Fraction:
    """Minimum over all bijections of the max L-infinity distance."""
    assert len(p1) == len(p2)
    if not p1:
        return Fraction(0)
    best = None
    for perm in itertools.permutations(range(len(p2))):
        cost = max(max(abs(a[0] - p2[j][0]), abs(a[1] - p2[j][1])) for a, j in zip(p1, perm))
        best = cost if best is None else min(best, cost)
    return best


def brute_max_matching(adj, n_right) -> int:
    n_left = len(adj)
    best = 0
    for size in range(min(n_left, n_right), 0, -1):
        for lefts in itertools.combinations(range(n_left), size):
            for rights in itertools.permutations(range(n_right), size):
                if all(r in adj[u] for u, r in zip(lefts, rights)):
                    return size
    return best


# --- complexes ------------------------------------------------------------------


def barycentric_facets(k):
    """Facets of the barycentric subdivision; new vertices are indexed by simplices."""
    simplices = list(k.all_simplices())
    index = {s: i for i, s in enumerate(simplices)}
    facets = set()
    maximal = [s for s in simplices if not any(set(s) < set(t) for t in simplices)]
    for top in maximal:
        for order in itertools.permutations(top):
            chain = tuple(sorted(index[tuple(sorted(order[:i]))] for i in range(1, len(order) + 1)))
            facets.add(chain)
    return len(simplices), sorted(facets)


def link_edges(k, v):
    """Edges of the link of vertex ``v`` in a 2-complex."""
    return [tuple(x for x in t if x != v) for t in k.cells(2) if v in t]
