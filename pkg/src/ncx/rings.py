"""Exact coefficient rings.

Three rings are supported, and every piece of linear algebra in this package
reduces to arithmetic in one of them:

* ``PrimeField(p)``        -- GF(p), elements are ints in ``[0, p)``;
* ``RationalField()``      -- Q, elements are ``fractions.Fraction``;
* ``TruncatedPolynomials(p, m)`` -- GF(p)[x]/(x^m), elements are coefficient
  tuples of length exactly ``m`` (index t holds the coefficient of x^t).

The truncated-polynomial ring is not a field; matrix computations over it are
performed on the ground field GF(p) after linearization (see ``matrices``).
``TruncatedPolynomials(p, 1)`` behaves identically to ``PrimeField(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n: int) -> bool:
    # Deterministic Miller-Rabin; the chosen bases are exact far beyond 2^31.
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """GF(p) for a prime p < 2**31."""

    p: int

    kind = "prime_field"
    is_field = True
    ground_dim = 1

    def __post_init__(self):
        if not (2 <= self.p < 2**31):
            raise ValueError(f"p must satisfy 2 <= p < 2**31, got {self.p}")
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")

    def zero(self):
        return 0

    def one(self):
        return 1

    def normalize(self, v):
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise ValueError(f"denominator of {v} is divisible by {self.p}")
            return v.numerator * pow(v.denominator, -1, self.p) % self.p
        return int(v) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def random(self, rng):
        return rng.randrange(self.p)

    def ground_field(self):
        return self

    def coords(self, a):
        return (a,)

    def from_coords(self, coords):
        return coords[0]

    def element_to_json(self, a):
        return a

    def element_from_json(self, v):
        if not isinstance(v, int):
            raise ValueError(f"expected integer entry over GF({self.p}), got {v!r}")
        return v % self.p

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class RationalField:
    """The rational numbers with exact Fraction arithmetic."""

    kind = "rationals"
    is_field = True
    ground_dim = 1

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def normalize(self, v):
        return Fraction(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def random(self, rng):
        return Fraction(rng.randint(-3, 3), rng.choice((1, 1, 1, 2, 3)))

    def ground_field(self):
        return self

    def coords(self, a):
        return (a,)

    def from_coords(self, coords):
        return coords[0]

    def element_to_json(self, a):
        return [a.numerator, a.denominator]

    def element_from_json(self, v):
        if isinstance(v, int):
            return Fraction(v)
        if (
            isinstance(v, list)
            and len(v) == 2
            and all(isinstance(c, int) for c in v)
        ):
            if v[1] == 0:
                raise ValueError("zero denominator in rational entry")
            return Fraction(v[0], v[1])
        raise ValueError(f"expected integer or [num, den] rational entry, got {v!r}")

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class TruncatedPolynomials:
    """GF(p)[x]/(x^m): nilpotent truncated polynomials over a prime field.

    Elements are tuples of length exactly ``m``; multiplication drops every
    term of degree >= m (the defining relation x^m = 0).
    """

    p: int
    m: int

    kind = "truncated_poly"
    is_field = False

    def __post_init__(self):
        PrimeField(self.p)  # reuse the primality / size checks
        if self.m < 1:
            raise ValueError(f"truncation order must be >= 1, got {self.m}")

    @property
    def ground_dim(self):
        return self.m

    def zero(self):
        return (0,) * self.m

    def one(self):
        return (1,) + (0,) * (self.m - 1)

    def gen(self):
        """The class of x (zero when m == 1)."""
        if self.m == 1:
            return (0,)
        return (0, 1) + (0,) * (self.m - 2)

    def normalize(self, v):
        p, m = self.p, self.m
        if isinstance(v, int):
            return (v % p,) + (0,) * (m - 1)
        coeffs = [int(c) % p for c in v]
        if len(coeffs) < m:
            coeffs += [0] * (m - len(coeffs))
        return tuple(coeffs[:m])

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        p, m = self.p, self.m
        out = [0] * m
        for i, ai in enumerate(a):
            if ai:
                for j in range(m - i):
                    bj = b[j]
                    if bj:
                        out[i + j] = (out[i + j] + ai * bj) % p
        return tuple(out)

    def is_zero(self, a):
        return not any(a)

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.m))

    def ground_field(self):
        return PrimeField(self.p)

    def coords(self, a):
        return a

    def from_coords(self, coords):
        return tuple(coords)

    def element_to_json(self, a):
        return list(a)

    def element_from_json(self, v):
        if not (isinstance(v, list) and all(isinstance(c, int) for c in v)):
            raise ValueError(f"expected coefficient array entry, got {v!r}")
        if len(v) != self.m:
            raise ValueError(
                f"coefficient array must have length {self.m}, got {len(v)}"
            )
        return tuple(c % self.p for c in v)

    def __str__(self):
        return f"GF({self.p})[x]/(x^{self.m})"


def ring_to_json(ring):
    if ring.kind == "prime_field":
        return {"kind": "prime_field", "p": ring.p}
    if ring.kind == "rationals":
        return {"kind": "rationals"}
    return {"kind": "truncated_poly", "p": ring.p, "m": ring.m}


def ring_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"ring descriptor must be an object with 'kind', got {obj!r}")
    kind = obj["kind"]
    if kind == "prime_field":
        return PrimeField(int(obj["p"]))
    if kind == "rationals":
        return RationalField()
    if kind == "truncated_poly":
        return TruncatedPolynomials(int(obj["p"]), int(obj["m"]))
    raise ValueError(f"unknown ring kind {kind!r}")


GF2 = PrimeField(2)
GF3 = PrimeField(3)
QQ = RationalField()
