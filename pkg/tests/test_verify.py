import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import components
from refbetti import corpus
from refbetti.complex import as_values
from refbetti.configspace import Configuration
from refbetti.field import QQ, PrimeField
from refbetti.persistence import compute_delta, oracle_delta_stabilization
from refbetti.verify import (
    CHECKS,
    PerturbationSpec,
    PreconditionError,
    VerificationReport,
    default_epsilon,
    perturb,
    perturb_distinct,
    run_check,
    sup_distance,
    verify_box_laws,
    verify_critical_support,
    verify_direct_sum,
    verify_duality,
    verify_genericity,
    verify_local_stability,
    verify_oracle,
    verify_polynomial,
    verify_stability,
    verify_total_mass,
)

GF2 = PrimeField(2)


def item_f(name, label=None):
    it = corpus.by_name(name)
    return it, it.complex, it.functions[label] if label else next(iter(it.functions.values()))


def test_failing_report_needs_witness():
    with pytest.raises(ValueError):
        VerificationReport("x", False)
    assert VerificationReport("x", True).passed


def test_perturbation_spec():
    s = PerturbationSpec("1/4", 3, 1)
    assert s.epsilon == Fraction(1, 4)
    with pytest.raises(ValueError):
        PerturbationSpec(-1)


@given(st.lists(st.fractions(max_denominator=10), min_size=1, max_size=8),
       st.fractions(min_value=Fraction(1, 100), max_value=2), st.integers(0, 10**6))
def test_perturb_is_strictly_inside(f, eps, seed):
    g = perturb(f, eps, random.Random(seed))
    assert sup_distance(f, g) < eps
    assert perturb(f, eps, random.Random(seed)) == g


@given(st.lists(st.integers(0, 3).map(Fraction), min_size=1, max_size=9), st.integers(0, 10**6))
def test_perturb_distinct(f, seed):
    scale = Fraction(1, 4)
    g = perturb_distinct(f, scale, random.Random(seed))
    assert len(set(g)) == len(g)
    assert sup_distance(f, g) < scale
    # order of originally distinct values is kept
    for i in range(len(f)):
        for j in range(len(f)):
            if f[i] < f[j]:
                assert g[i] < g[j]


def test_default_epsilon():
    _, k, f = item_f("circle", "height")
    assert default_epsilon(k, f) == Fraction(1, 4)
    _, k, f = item_f("circle", "constant")
    assert default_epsilon(k, f) == Fraction(1, 4)
    _, k, f = item_f("interval", "monotone")
    assert default_epsilon(k, f) == Fraction(1, 8)


# --- individual checks ---------------------------------------------------------------


@pytest.mark.parametrize("name", ["circle", "torus", "two_points", "klein"])
def test_total_mass(name):
    _, k, f = item_f(name)
    for field in (QQ, GF2):
        rep = verify_total_mass(k, f, field)
        assert rep.passed, rep.witnesses


def test_total_mass_catches_a_broken_configuration(monkeypatch):
    import refbetti.verify as V

    real = V.delta_from_table

    def drop_one(table):
        d = real(table)
        return Configuration(list(d.items())[1:])

    monkeypatch.setattr(V, "delta_from_table", drop_one)
    _, k, f = item_f("torus", "generic")
    rep = verify_total_mass(k, f, QQ)
    assert not rep.passed and rep.witnesses[0]["degree"] == 0


def test_critical_support():
    for name in ("circle", "wedge", "torus"):
        _, k, f = item_f(name)
        assert verify_critical_support(k, f, QQ).passed


def test_stability_zero_epsilon():
    _, k, f = item_f("torus", "generic")
    rep = verify_stability(k, f, PerturbationSpec(0, 5, 0), QQ)
    assert rep.passed and rep.details["max_ratio"] == 0


def test_stability_torus():
    _, k, f = item_f("torus", "generic")
    rep = verify_stability(k, f, PerturbationSpec(default_epsilon(k, f), 20, 0), QQ)
    assert rep.passed
    assert rep.details["max_ratio"] <= 2


def test_local_stability_precondition():
    _, k, f = item_f("circle", "height")
    with pytest.raises(PreconditionError):
        verify_local_stability(k, f, PerturbationSpec(Fraction(1, 3), 1, 0), QQ)
    assert verify_local_stability(k, f, PerturbationSpec(0, 2, 0), QQ).passed


def test_local_stability_single_vertex_shift():
    """Shift one vertex of the circle by eps/2: the mass stays in its 2*eps square."""
    k, f = corpus.circle(), as_values([0, 1, 2])
    eps = Fraction(1, 4)
    g = (f[0], f[1], f[2] + eps / 2)
    for r in (0, 1):
        df, dg = compute_delta(k, f, r, QQ), compute_delta(k, g, r, QQ)
        ((a, b), m), = df.items()
        assert sum(mm for (x, y), mm in dg.items()
                   if a - 2 * eps < x <= a + 2 * eps and b - 2 * eps <= y < b + 2 * eps) == m


def test_local_stability_runs():
    _, k, f = item_f("wedge")
    assert verify_local_stability(k, f, PerturbationSpec(default_epsilon(k, f), 10, 3), GF2).passed


@pytest.mark.parametrize("name,field", [("circle", QQ), ("sphere", QQ), ("torus", QQ), ("torus", GF2),
                                        ("rp2", GF2), ("klein", GF2)])
def test_duality(name, field):
    it = corpus.by_name(name)
    for f in it.functions.values():
        rep = verify_duality(it.complex, f, field, n=it.manifold_dim, closed_manifold=True,
                             orientable=it.orientable)
        assert rep.passed, rep.witnesses


def test_duality_preconditions():
    it = corpus.by_name("rp2")
    with pytest.raises(PreconditionError):
        verify_duality(it.complex, it.functions["generic"], QQ, n=2, orientable=False)
    _, k, f = item_f("interval")
    with pytest.raises(PreconditionError):
        verify_duality(k, f, QQ, n=1, closed_manifold=False)
    _, k, f = item_f("circle")
    with pytest.raises(PreconditionError):
        verify_duality(k, f, QQ, n=2)


def test_duality_fails_without_orientability():
    """Over Q the Klein bottle has H_1 of rank 1 but H_1-dual data does not transpose."""
    it = corpus.by_name("klein")
    rep = verify_duality(it.complex, it.functions["generic"], QQ, n=2, closed_manifold=True, orientable=None)
    assert not rep.passed and rep.witnesses


def test_genericity_passes_on_generic_inputs():
    _, k, f = item_f("circle", "constant")
    assert verify_genericity(k, f, PerturbationSpec(Fraction(1, 4), 10, 0), QQ).passed
    _, k, f = item_f("torus", "generic")
    assert verify_genericity(k, f, PerturbationSpec(Fraction(1, 4), 5, 0), QQ).passed


def test_genericity_finds_monkey_saddle_on_coarse_torus():
    """Distinct vertex values do not force multiplicity one on a fixed triangulation.

    When ties are broken so that a vertex has three lower-link components, two
    independent 1-cycles are born and die at the same pair of values.
    """
    _, k, f = item_f("torus", "coarse")
    rep = verify_genericity(k, f, PerturbationSpec(Fraction(1, 4), 3, 0), QQ)
    assert not rep.passed
    w = rep.witnesses[0]
    g = tuple(Fraction(x) for x in w["g"])
    assert len(set(g)) == 7
    a, b = (Fraction(x) for x in w["point"])
    # independent recomputation through the shrinking-box oracle
    assert oracle_delta_stabilization(k, g, w["degree"], QQ, (a, b)) == 2
    # the saddle vertex: its lower link has three components
    saddle = [v for v in range(7) if g[v] in (a, b)]
    counts = []
    for v in saddle:
        link = [tuple(x for x in t if x != v) for t in k.cells(2) if v in t]
        lower = sorted({x for e in link for x in e if g[x] < g[v]})
        pos = {x: i for i, x in enumerate(lower)}
        edges = [(pos[x], pos[y]) for x, y in link if x in pos and y in pos]
        counts.append(components(len(lower), edges))
    assert 3 in counts
    # the witness reproduces in isolation
    again = verify_genericity(k, f, PerturbationSpec(Fraction(1, 4), 1, w["seed"]), QQ)
    assert not again.passed


@pytest.mark.parametrize("name", ["circle", "two_points", "torus", "rp2"])
def test_box_laws(name):
    _, k, f = item_f(name)
    rep = verify_box_laws(k, f, GF2)
    assert rep.passed, rep.witnesses[:3]
    assert rep.details["boxes"] > 0


def test_direct_sum_oracle_polynomial():
    for name in ("circle", "wedge", "sphere"):
        _, k, f = item_f(name)
        for check in (verify_direct_sum, verify_oracle, verify_polynomial):
            assert check(k, f, QQ).passed


def test_run_check_dispatch_and_determinism():
    it, k, f = item_f("torus", "generic")
    meta = {"closed_manifold": True, "dimension": 2, "orientable": True}
    spec = PerturbationSpec(default_epsilon(k, f), 5, 7)
    for name in CHECKS:
        a = run_check(name, k, f, QQ, spec=spec, meta=meta)
        b = run_check(name, k, f, QQ, spec=spec, meta=meta)
        assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    with pytest.raises(KeyError):
        run_check("nope", k, f, QQ)
