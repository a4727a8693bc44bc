"""Exact coefficient fields: prime fields GF(p) and the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _egcd_inverse(a: int, p: int) -> int:
    # extended Euclid; a is nonzero mod p
    r0, r1 = a % p, p
    s0, s1 = 1, 0
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ZeroDivisionError(f"{a} is not invertible mod {p}")
    return s0 % p


def parse_rational(text) -> Fraction:
    """Parse ``"1/3"``, ``"0.25"``, ``"-2"`` (or an int/Fraction) exactly.

    Floats are rejected: they have already lost exactness.
    """
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"refusing float {text!r}; pass the value as a string")
    if not isinstance(text, str):
        raise ValueError(f"cannot parse {text!r} as a rational")
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r} as a rational") from exc


def format_rational(x: Fraction) -> str:
    """Lowest-terms ``num/den`` (or a bare integer)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p={self.p!r} is not prime")
        if self.p >= 2**31:
            raise ValueError("p must be below 2**31")

    kind = "prime"
    is_rational = False

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def __call__(self, x) -> int:
        x = Fraction(x) if not isinstance(x, int) else x
        if isinstance(x, int):
            return x % self.p
        den = x.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
        return (x.numerator * _egcd_inverse(den, self.p)) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return _egcd_inverse(a, self.p)

    def format(self, a) -> str:
        return str(a)

    def parse(self, text):
        return self(parse_rational(text))

    def __str__(self):
        return f"GF({self.p})"

    def to_json(self):
        return {"kind": "prime", "p": self.p}


@dataclass(frozen=True)
class Rationals:
    kind = "rationals"
    is_rational = True

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return 1 / Fraction(a)

    def format(self, a) -> str:
        return format_rational(a)

    def parse(self, text):
        return parse_rational(text)

    def __str__(self):
        return "Q"

    def to_json(self):
        return {"kind": "rationals"}


QQ = Rationals()
Field = PrimeField | Rationals


def make_field(spec) -> Field:
    """Build a field from ``"Q"``, ``"GF(5)"``, an int prime, a dict, or a field."""
    if isinstance(spec, (PrimeField, Rationals)):
        return spec
    if isinstance(spec, bool):
        raise ValueError(f"bad field spec {spec!r}")
    if isinstance(spec, int):
        return PrimeField(spec)
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind in ("rationals", "Q"):
            return QQ
        if kind in ("prime", "GF"):
            p = spec.get("p")
            if not isinstance(p, int) or isinstance(p, bool):
                raise ValueError(f"prime field needs an integer p, got {p!r}")
            return PrimeField(p)
        raise ValueError(f"unknown field kind {kind!r}")
    if isinstance(spec, str):
        s = spec.strip().upper().replace(" ", "")
        if s in ("Q", "QQ", "RATIONALS"):
            return QQ
        for prefix in ("GF(", "F("):
            if s.startswith(prefix) and s.endswith(")"):
                return PrimeField(int(s[len(prefix):-1]))
        if s.startswith("GF") and s[2:].isdigit():
            return PrimeField(int(s[2:]))
    raise ValueError(f"bad field spec {spec!r}")
