"""Finite configurations of plane points: polynomials and the bottleneck metric."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .field import format_rational


@dataclass(frozen=True, order=True)
class PlanePoint:
    a: Fraction
    b: Fraction

    def __iter__(self):
        return iter((self.a, self.b))


class Configuration(Mapping):
    """Map from plane points ``(a, b)`` to positive multiplicities."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict = {}
        for (a, b), m in items:
            if not isinstance(m, int) or m < 0:
                raise ValueError(f"multiplicity must be a non-negative int, got {m!r}")
            if m:
                key = (Fraction(a), Fraction(b))
                acc[key] = acc.get(key, 0) + m
        self._entries = dict(sorted(acc.items()))

    def __getitem__(self, key):
        a, b = key
        return self._entries.get((Fraction(a), Fraction(b)), 0)

    def __contains__(self, key):
        return self[key] > 0

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if isinstance(other, Configuration):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self == Configuration(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    @property
    def total(self) -> int:
        return sum(self._entries.values())

    def points(self) -> list[tuple[Fraction, Fraction]]:
        """Support expanded with multiplicity, lexicographically sorted."""
        return [p for p, m in self._entries.items() for _ in range(m)]

    def transpose(self) -> "Configuration":
        return Configuration({(b, a): m for (a, b), m in self._entries.items()})

    def max_multiplicity(self) -> int:
        return max(self._entries.values(), default=0)

    def __repr__(self):
        body = ", ".join(f"({format_rational(a)}, {format_rational(b)}): {m}" for (a, b), m in self._entries.items())
        return f"Configuration({{{body}}})"


def support_mass(c: Configuration) -> tuple[list[PlanePoint], int]:
    return [PlanePoint(a, b) for a, b in c], c.total


# --- Gaussian rationals and monic polynomials -------------------------------

GaussianRational = tuple  # (re, im), both Fractions


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gsub(x, y):
    return (x[0] - y[0], x[1] - y[1])


@dataclass(frozen=True)
class MonicPolynomial:
    """Coefficients from the constant term upward; the last one is 1."""

    coefficients: tuple

    def __post_init__(self):
        if not self.coefficients or self.coefficients[-1] != (1, 0):
            raise ValueError("polynomial is not monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def times_linear(self, root) -> "MonicPolynomial":
        """Multiply by ``(z - root)``."""
        c = self.coefficients
        out = [(Fraction(0), Fraction(0))] * (len(c) + 1)
        for i, ci in enumerate(c):
            out[i + 1] = (out[i + 1][0] + ci[0], out[i + 1][1] + ci[1])
            out[i] = _gsub(out[i], _gmul(ci, root))
        return MonicPolynomial(tuple(out))

    def divide_linear(self, root) -> tuple["MonicPolynomial", GaussianRational]:
        """Synthetic division by ``(z - root)``: quotient and remainder."""
        c = self.coefficients
        if len(c) == 1:
            raise ValueError("cannot divide a constant polynomial")
        q = [None] * (len(c) - 1)
        carry = (Fraction(0), Fraction(0))
        for i in range(len(c) - 1, 0, -1):
            carry = (c[i][0] + carry[0], c[i][1] + carry[1])
            q[i - 1] = carry
            carry = _gmul(carry, root)
        rem = (c[0][0] + carry[0], c[0][1] + carry[1])
        return MonicPolynomial(tuple(q)), rem

    def evaluate(self, z) -> GaussianRational:
        acc = (Fraction(0), Fraction(0))
        for coef in reversed(self.coefficients):
            acc = _gmul(acc, z)
            acc = (acc[0] + coef[0], acc[1] + coef[1])
        return acc


ONE = MonicPolynomial(((Fraction(1), Fraction(0)),))


def to_polynomial(c: Configuration) -> MonicPolynomial:
    """prod (z - (a + i b))^mult over the support."""
    p = ONE
    for a, b in c.points():
        p = p.times_linear((a, b))
    return p


def has_root_multiset(p: MonicPolynomial, c: Configuration) -> bool:
    """Exact check that dividing out every point of ``c`` leaves 1 with zero remainders."""
    if p.degree != c.total:
        return False
    for a, b in c.points():
        p, rem = p.divide_linear((a, b))
        if rem != (0, 0):
            return False
    return p == ONE


# --- bottleneck matching -----------------------------------------------------


class MassMismatch(ValueError):
    pass


def linf(p, q) -> Fraction:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def hopcroft_karp(adj: list[list[int]], n_right: int) -> list[int]:
    """Maximum matching of a bipartite graph; returns ``match_left`` (-1 if unmatched)."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    inf = n_left + 1

    while True:
        dist = [inf] * n_left
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            break

        def augment(u):
            for v in adj[u]:
                w = match_r[v]
                if w == -1 or (dist[w] == dist[u] + 1 and augment(w)):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = inf
            return False

        for u in range(n_left):
            if match_l[u] == -1:
                augment(u)
    return match_l


@dataclass(frozen=True)
class MatchingResult:
    distance: Fraction
    witness: tuple  # ((p, q), ...) matched points, p from the first configuration


def bottleneck_distance(c1: Configuration, c2: Configuration) -> MatchingResult:
    """Min over bijections of the max L-infinity distance between matched points."""
    if c1.total != c2.total:
        raise MassMismatch(f"total masses differ: {c1.total} vs {c2.total}")
    left, right = c1.points(), c2.points()
    if not left:
        return MatchingResult(Fraction(0), ())
    dist = [[linf(p, q) for q in right] for p in left]
    thresholds = sorted({d for row in dist for d in row})

    def matching_at(t):
        adj = [[j for j, d in enumerate(row) if d <= t] for row in dist]
        m = hopcroft_karp(adj, len(right))
        return m if all(j >= 0 for j in m) else None

    lo, hi = 0, len(thresholds) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if matching_at(thresholds[mid]) is None:
            lo = mid + 1
        else:
            hi = mid
    best = matching_at(thresholds[lo])
    witness = tuple((left[i], right[j]) for i, j in enumerate(best))
    return MatchingResult(thresholds[lo], witness)
