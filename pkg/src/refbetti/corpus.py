"""Small triangulations with fixed vertex functions, used by tests and the acceptance run."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complex import SimplicialComplex


@dataclass(frozen=True)
class CorpusItem:
    name: str
    complex: SimplicialComplex
    functions: dict  # label -> tuple of Fractions
    closed_manifold: bool = False
    manifold_dim: int | None = None
    orientable: bool | None = None  # over Q; every closed manifold is GF(2)-orientable
    betti_q: tuple = ()
    betti_gf2: tuple = ()
    meta: dict = field(default_factory=dict)


def _vals(*xs) -> tuple:
    return tuple(Fraction(x) for x in xs)


def circle():
    return SimplicialComplex.closure(3, [(0, 1), (0, 2), (1, 2)])


def interval():
    return SimplicialComplex.closure(3, [(0, 1), (1, 2)])


def two_points():
    return SimplicialComplex.from_simplices(2, [(0,), (1,)])


def wedge_of_circles():
    # two triangles glued at vertex 0
    return SimplicialComplex.closure(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def sphere():
    return SimplicialComplex.closure(4, [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)])


def torus7():
    """Moebius-Csaszar 7-vertex torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex.closure(7, tris)


def rp2_6():
    """Six-vertex projective plane (hemi-icosahedron)."""
    tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
            (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
    return SimplicialComplex.closure(6, tris)


def klein_grid(n: int = 3):
    """Klein bottle from an n x n grid: columns wrap plainly, rows wrap with a flip."""

    def vid(i, j):
        # i: column (plain wrap), j: row; crossing the top edge flips i
        if j == n:
            i, j = (-i) % n, 0
        return (i % n) + n * j

    tris = []
    for i in range(n):
        for j in range(n):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i, j + 1), vid(i + 1, j + 1)
            tris.append((a, b, d))
            tris.append((a, c, d))
    return SimplicialComplex.closure(n * n, tris)


def items() -> list[CorpusItem]:
    return [
        CorpusItem("circle", circle(), {"height": _vals(0, 1, 2), "constant": _vals(1, 1, 1)},
                   True, 1, True, (1, 1), (1, 1)),
        CorpusItem("interval", interval(), {"height": _vals(0, 2, 1), "monotone": _vals("0.5", 1, "3/2")},
                   betti_q=(1, 0), betti_gf2=(1, 0)),
        CorpusItem("two_points", two_points(), {"height": _vals(0, 1), "constant": _vals(0, 0)},
                   betti_q=(2,), betti_gf2=(2,)),
        CorpusItem("wedge", wedge_of_circles(), {"loops": _vals(0, 1, 3, 2, "5/2")},
                   betti_q=(1, 2), betti_gf2=(1, 2)),
        CorpusItem("sphere", sphere(), {"height": _vals(0, 1, 2, 3), "tilted": _vals("1/2", 3, "-1", 2)},
                   True, 2, True, (1, 0, 1), (1, 0, 1)),
        CorpusItem("torus", torus7(), {"generic": _vals(0, 5, 2, 6, 1, 4, 3),
                                       "coarse": _vals(0, 1, 1, 2, 0, 2, 1)},
                   True, 2, True, (1, 2, 1), (1, 2, 1)),
        CorpusItem("rp2", rp2_6(), {"generic": _vals(0, 3, 1, 5, 2, 4)},
                   True, 2, False, (1, 0, 0), (1, 1, 1)),
        CorpusItem("klein", klein_grid(3), {"generic": _vals(0, 4, 7, 2, 8, 5, 6, 1, 3)},
                   True, 2, False, (1, 1, 0), (1, 2, 1)),
    ]


def by_name(name: str) -> CorpusItem:
    for it in items():
        if it.name == name:
            return it
    raise KeyError(name)
