from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from refbetti.field import QQ, PrimeField, format_rational, is_prime, make_field, parse_rational

PRIMES = [2, 3, 5, 7, 11, 101]


def test_is_prime_matches_trial_division():
    for n in range(-3, 200):
        expected = n >= 2 and all(n % d for d in range(2, n))
        assert is_prime(n) == expected


@pytest.mark.parametrize("text,value", [
    ("1/3", Fraction(1, 3)),
    ("0.25", Fraction(1, 4)),
    ("0.1", Fraction(1, 10)),
    ("-2", Fraction(-2)),
    (" 6/4 ", Fraction(3, 2)),
    (7, Fraction(7)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", [0.1, True, "", "abc", "1/0", None, [1]])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_lowest_terms():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-4, 2)) == "-2"
    assert format_rational(Fraction(0)) == "0"


@given(st.fractions())
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@given(st.integers(-10**6, 10**6), st.integers(0, 6))
def test_decimal_strings_parse_exactly(n, places):
    # decimal text built from digits, no float involved
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(places + 1, "0")
    text = sign + (digits[:-places] + "." + digits[-places:] if places else digits)
    assert parse_rational(text) == Fraction(n, 10**places)


@pytest.mark.parametrize("p", PRIMES)
def test_prime_field_inverses(p):
    F = PrimeField(p)
    for a in range(1, p if p < 50 else 50):
        assert F.mul(a, F.inv(a)) == 1


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_prime_field_axioms(p, a, b, c):
    F = PrimeField(p)
    a, b, c = F(a), F(b), F(c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(a, b) == F.add(a, F.neg(b))


def test_prime_field_coerces_fractions():
    F = PrimeField(5)
    assert F(Fraction(1, 2)) == 3
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 5))


@pytest.mark.parametrize("spec,expected", [
    ("Q", QQ), ("GF(2)", PrimeField(2)), (5, PrimeField(5)),
    ({"kind": "prime", "p": 3}, PrimeField(3)), ({"kind": "rationals"}, QQ), (QQ, QQ),
])
def test_make_field(spec, expected):
    assert make_field(spec) == expected


@pytest.mark.parametrize("spec", [4, "GF(4)", {"kind": "prime", "p": 1}, "R", {"kind": "reals"}])
def test_make_field_rejects(spec):
    with pytest.raises(ValueError):
        make_field(spec)


def test_rationals_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        QQ.inv(Fraction(0))
