"""Executable checks of the structural properties of the refined configurations.

Each ``verify_*`` function returns a :class:`VerificationReport`; a failed
report always carries at least one witness that reproduces the failure.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .complex import (
    SimplicialComplex,
    betti_numbers,
    critical_grid,
    detect_homological_CR,
)
from .configspace import Configuration, bottleneck_distance, has_root_multiset, to_polynomial
from .field import Field, format_rational
from .linalg import Matrix, dot, rank
from .persistence import (
    F_box_dim_at,
    G_box_dim_at,
    ImageTable,
    build_image_table,
    build_image_tables,
    delta_from_table,
    hat_delta_from_table,
    oracle_delta_stabilization,
    ortho_from_table,
)

DENOM = 1000


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PerturbationSpec:
    epsilon: Fraction
    trials: int = 100
    seed: int = 0

    def __post_init__(self):
        if Fraction(self.epsilon) < 0:
            raise ValueError("epsilon must be non-negative")
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))


@dataclass
class VerificationReport:
    check: str
    passed: bool
    witnesses: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)
    elapsed: float = dc_field(default=0.0, compare=False)

    def __post_init__(self):
        if not self.passed and not self.witnesses:
            raise ValueError("a failing report needs a witness")

    def to_json(self, timings: bool = False) -> dict:
        out = {"check": self.check, "passed": self.passed,
               "witnesses": _jsonable(self.witnesses), "details": _jsonable(self.details)}
        if timings:
            out["elapsed_s"] = round(self.elapsed, 4)
        return out


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = time.perf_counter() - t0
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _degrees(k: SimplicialComplex) -> range:
    return range(k.dim + 1)


def _tables(k, f, field) -> list[ImageTable]:
    return build_image_tables(k, f, field)


def default_epsilon(k, f) -> Fraction:
    """A quarter of the smallest gap between distinct vertex values (1/4 for a constant map)."""
    gap = critical_grid(k, f).min_gap
    return (gap if gap is not None else Fraction(1)) / 4


def perturb(f: Sequence[Fraction], epsilon: Fraction, rng: random.Random) -> tuple:
    """Shift every vertex value by a rational strictly inside (-epsilon, epsilon)."""
    return tuple(Fraction(x) + epsilon * Fraction(rng.randint(-(DENOM - 1), DENOM - 1), DENOM) for x in f)


def perturb_distinct(f: Sequence[Fraction], scale: Fraction, rng: random.Random) -> tuple:
    """Pairwise-distinct values, each moved by less than ``scale``.

    With ``scale`` at most half the smallest gap of ``f`` no two vertices can
    collide after the shift.
    """
    shifts = rng.sample(range(-(DENOM - 1), DENOM), len(f))
    g = tuple(Fraction(x) + scale * Fraction(s, DENOM) for x, s in zip(f, shifts))
    assert len(set(g)) == len(g)
    return g


def sup_distance(f, g) -> Fraction:
    """sup |f - g| of two PL maps on the same triangulation (attained at a vertex)."""
    return max((abs(Fraction(x) - Fraction(y)) for x, y in zip(f, g)), default=Fraction(0))


def _pt(p):
    return [format_rational(p[0]), format_rational(p[1])]


@_timed
def verify_total_mass(k, f, field: Field) -> VerificationReport:
    betti = betti_numbers(k, field)
    witnesses, masses = [], {}
    for r, table in enumerate(_tables(k, f, field)):
        mass = delta_from_table(table).total
        masses[r] = mass
        if mass != betti[r]:
            witnesses.append({"degree": r, "mass": mass, "betti": betti[r]})
    return VerificationReport("mass", not witnesses, witnesses, {"mass": masses, "betti": betti})


@_timed
def verify_critical_support(k, f, field: Field) -> VerificationReport:
    witnesses = []
    for r in _degrees(k):
        table = build_image_table(k, f, r, field)
        cr = set(detect_homological_CR(k, f, r, field))
        for (a, b) in delta_from_table(table):
            if a not in cr or b not in cr:
                witnesses.append({"degree": r, "point": _pt((a, b)), "critical": sorted(map(format_rational, cr))})
    return VerificationReport("critical-support", not witnesses, witnesses)


@_timed
def verify_stability(k, f, spec: PerturbationSpec, field: Field) -> VerificationReport:
    """Bottleneck distance of the configurations is at most twice the sup distance."""
    base = [delta_from_table(t) for t in _tables(k, f, field)]
    rng = random.Random(spec.seed)
    witnesses, worst = [], Fraction(0)
    for trial in range(spec.trials):
        g = perturb(f, spec.epsilon, rng)
        shift = sup_distance(f, g)
        for r, tg in enumerate(_tables(k, g, field)):
            dg = delta_from_table(tg)
            res = bottleneck_distance(base[r], dg)
            if shift:
                worst = max(worst, res.distance / shift)
            if res.distance > 2 * shift:
                witnesses.append({"trial": trial, "degree": r, "g": list(g),
                                  "distance": res.distance, "shift": shift})
    return VerificationReport("stability", not witnesses, witnesses,
                              {"trials": spec.trials, "epsilon": spec.epsilon, "max_ratio": worst})


def _square_contains(center, radius, x) -> bool:
    a, b = center
    if radius == 0:
        # the half-open square degenerates; read it as the point itself
        return (a, b) == tuple(x)
    return a - radius < x[0] <= a + radius and b - radius <= x[1] < b + radius


@_timed
def verify_local_stability(k, f, spec: PerturbationSpec, field: Field) -> VerificationReport:
    """Perturbed support sits in the 2*eps squares around the original one, mass per square preserved."""
    grid = critical_grid(k, f)
    eps = spec.epsilon
    if grid.min_gap is not None and not eps < grid.min_gap / 3:
        raise PreconditionError(
            f"epsilon={format_rational(eps)} is not below a third of the grid gap {format_rational(grid.min_gap)}")
    base = [delta_from_table(t) for t in _tables(k, f, field)]
    rng = random.Random(spec.seed)
    witnesses = []
    for trial in range(spec.trials):
        g = perturb(f, eps, rng)
        for r, tg in enumerate(_tables(k, g, field)):
            dg = delta_from_table(tg)
            for x in dg:
                if not any(_square_contains(c, 2 * eps, x) for c in base[r]):
                    witnesses.append({"trial": trial, "degree": r, "g": list(g), "stray": _pt(x)})
            for a in grid.values:
                for b in grid.values:
                    mass = sum(m for x, m in dg.items() if _square_contains((a, b), 2 * eps, x))
                    if mass != base[r][a, b]:
                        witnesses.append({"trial": trial, "degree": r, "g": list(g), "square": _pt((a, b)),
                                          "mass": mass, "expected": base[r][a, b]})
    return VerificationReport("local-stability", not witnesses, witnesses,
                              {"trials": spec.trials, "epsilon": eps})


@_timed
def verify_duality(k, f, field: Field, *, n: int, closed_manifold: bool = True,
                   orientable: bool | None = None) -> VerificationReport:
    """delta_r(a, b) = delta_{n-r}(b, a), with the representative counts transposing too.

    Also compares dim F_r(a, b) with dim H_{n-r} / (I_b + I^a) at regular values.
    """
    if not closed_manifold:
        raise PreconditionError("duality needs a closed manifold")
    if field.is_rational and orientable is False:
        raise PreconditionError("the manifold is not orientable over Q")
    if k.dim != n:
        raise PreconditionError(f"complex has dimension {k.dim}, expected {n}")
    tables = _tables(k, f, field)
    deltas = [delta_from_table(t) for t in tables]
    hats = [hat_delta_from_table(t).dims() for t in tables]
    witnesses = []
    for r in range(n + 1):
        if deltas[r] != deltas[n - r].transpose():
            witnesses.append({"degree": r, "delta": str(deltas[r]), "dual": str(deltas[n - r])})
        if hats[r] != hats[n - r].transpose():
            witnesses.append({"degree": r, "hat_dims": str(hats[r]), "dual": str(hats[n - r])})
    # regular values: midpoints of the extended grid
    ext = tables[0].grid.extended
    n_ext = len(ext)
    for r in range(n + 1):
        t_r, t_d = tables[r], tables[n - r]
        for i in range(n_ext - 1):
            for j in range(n_ext - 1):
                # a, b strictly between ext[i], ext[i+1] and ext[j], ext[j+1]
                F_dim = t_r.F_at(i, j + 1).rank
                G_dim = t_d.ambient_dim - t_d.S_at(j, i + 1).rank
                if F_dim != G_dim:
                    witnesses.append({"degree": r, "cell": [i, j], "F": F_dim, "G_dual": G_dim})
    return VerificationReport("duality", not witnesses, witnesses)


@_timed
def verify_genericity(k, f, spec: PerturbationSpec, field: Field) -> VerificationReport:
    """After perturbing to pairwise-distinct vertex values every multiplicity is 1."""
    grid = critical_grid(k, f)
    scale = (grid.min_gap if grid.min_gap is not None else Fraction(1)) / 4
    witnesses, per_trial = [], []
    for trial in range(spec.trials):
        seed = spec.seed + trial
        g = perturb_distinct(f, scale, random.Random(seed))
        mults = []
        for r, tg in enumerate(_tables(k, g, field)):
            d = delta_from_table(tg)
            mults.append(d.max_multiplicity())
            for x, m in d.items():
                if m > 1:
                    witnesses.append({"seed": seed, "degree": r, "g": list(g), "point": _pt(x), "multiplicity": m})
        per_trial.append(mults)
    return VerificationReport("genericity", not witnesses, witnesses, {"max_multiplicity": per_trial})


def _box_law_witnesses(table: ImageTable, delta: Configuration) -> tuple[list, int]:
    ext = table.grid.extended
    n = len(ext)
    # prefix sums of delta over grid positions for box counting
    mass = [[0] * n for _ in range(n)]
    for (a, b), m in delta.items():
        mass[table.position(a)][table.position(b)] += m
    witnesses, boxes = [], 0
    for i_lo in range(n):
        for i in range(i_lo + 1, n):
            for j in range(n):
                for j_hi in range(j + 1, n):
                    boxes += 1
                    fb = F_box_dim_at(table, i_lo, i, j, j_hi)
                    count = sum(mass[x][y] for x in range(i_lo + 1, i + 1) for y in range(j, j_hi))
                    corners = [format_rational(ext[t]) for t in (i_lo, i, j, j_hi)]
                    if fb != count:
                        witnesses.append({"law": "box-count", "degree": table.degree, "box": corners,
                                          "F": fb, "count": count})
                    for mid in range(i_lo + 1, i):
                        s = F_box_dim_at(table, i_lo, mid, j, j_hi) + F_box_dim_at(table, mid, i, j, j_hi)
                        if s != fb:
                            witnesses.append({"law": "split-a", "degree": table.degree, "box": corners,
                                              "at": format_rational(ext[mid]), "F": fb, "sum": s})
                    for mid in range(j + 1, j_hi):
                        s = F_box_dim_at(table, i_lo, i, j, mid) + F_box_dim_at(table, i_lo, i, mid, j_hi)
                        if s != fb:
                            witnesses.append({"law": "split-b", "degree": table.degree, "box": corners,
                                              "at": format_rational(ext[mid]), "F": fb, "sum": s})
                    gb = G_box_dim_at(table, i_lo, i, j, j_hi)
                    if gb != fb:
                        witnesses.append({"law": "F=G", "degree": table.degree, "box": corners, "F": fb, "G": gb})
    return witnesses, boxes


@_timed
def verify_box_laws(k, f, field: Field) -> VerificationReport:
    witnesses, boxes = [], 0
    for table in _tables(k, f, field):
        w, b = _box_law_witnesses(table, delta_from_table(table))
        witnesses += w
        boxes += b
    return VerificationReport("box-laws", not witnesses, witnesses, {"boxes": boxes})


@_timed
def verify_direct_sum(k, f, field: Field) -> VerificationReport:
    """Representatives form a basis of H_r; over Q the orthogonal pieces are orthogonal and fill H_r."""
    witnesses = []
    for table in _tables(k, f, field):
        r, n = table.degree, table.ambient_dim
        hat = hat_delta_from_table(table)
        vecs = hat.all_vectors()
        if hat.dims() != delta_from_table(table):
            witnesses.append({"degree": r, "issue": "representative counts differ from delta"})
        if len(vecs) != n or (n and rank(Matrix.from_columns(field, vecs, n)) != n):
            witnesses.append({"degree": r, "issue": "representatives are not a basis", "count": len(vecs), "betti": n})
        if field.is_rational:
            ortho = ortho_from_table(table)
            if sum(s.rank for s in ortho.entries.values()) != n:
                witnesses.append({"degree": r, "issue": "orthogonal dimensions do not sum to betti"})
            pts = sorted(ortho.entries)
            for x in range(len(pts)):
                for y in range(x + 1, len(pts)):
                    for u in ortho.entries[pts[x]].vectors:
                        for v in ortho.entries[pts[y]].vectors:
                            if dot(field, u, v) != 0:
                                witnesses.append({"degree": r, "issue": "non-orthogonal",
                                                  "points": [_pt(pts[x]), _pt(pts[y])]})
    return VerificationReport("direct-sum", not witnesses, witnesses)


@_timed
def verify_oracle(k, f, field: Field) -> VerificationReport:
    """Grid formula against the shrinking-box limit at every grid point."""
    witnesses = []
    vals = critical_grid(k, f).values
    for table in _tables(k, f, field):
        delta = delta_from_table(table)
        for a in vals:
            for b in vals:
                o = oracle_delta_stabilization(k, f, table.degree, field, (a, b))
                if o != delta[a, b]:
                    witnesses.append({"degree": table.degree, "point": _pt((a, b)), "grid": delta[a, b], "oracle": o})
    return VerificationReport("oracle", not witnesses, witnesses)


@_timed
def verify_polynomial(k, f, field: Field) -> VerificationReport:
    betti = betti_numbers(k, field)
    witnesses = []
    for table in _tables(k, f, field):
        d = delta_from_table(table)
        p = to_polynomial(d)
        if p.degree != betti[table.degree]:
            witnesses.append({"degree": table.degree, "poly_degree": p.degree, "betti": betti[table.degree]})
        if not has_root_multiset(p, d):
            witnesses.append({"degree": table.degree, "issue": "root multiset does not reproduce the polynomial"})
    return VerificationReport("polynomial", not witnesses, witnesses)


CHECKS = ("mass", "critical-support", "stability", "local-stability", "duality", "box-laws",
          "genericity", "direct-sum", "oracle", "polynomial")


def run_check(name: str, k, f, field: Field, *, spec: PerturbationSpec | None = None,
              meta: dict | None = None) -> VerificationReport:
    meta = meta or {}
    if spec is None:
        spec = PerturbationSpec(default_epsilon(k, f), 100, 0)
    if name == "mass":
        return verify_total_mass(k, f, field)
    if name == "critical-support":
        return verify_critical_support(k, f, field)
    if name == "stability":
        return verify_stability(k, f, spec, field)
    if name == "local-stability":
        return verify_local_stability(k, f, spec, field)
    if name == "duality":
        return verify_duality(k, f, field, n=meta.get("dimension", k.dim),
                              closed_manifold=bool(meta.get("closed_manifold")),
                              orientable=meta.get("orientable"))
    if name == "box-laws":
        return verify_box_laws(k, f, field)
    if name == "genericity":
        return verify_genericity(k, f, spec, field)
    if name == "direct-sum":
        return verify_direct_sum(k, f, field)
    if name == "oracle":
        return verify_oracle(k, f, field)
    if name == "polynomial":
        return verify_polynomial(k, f, field)
    raise KeyError(f"unknown check {name!r}")
