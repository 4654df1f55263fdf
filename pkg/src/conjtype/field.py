"""Exact arithmetic in GF(p) and GF(p^m).

Prime-field elements are plain ints in ``range(p)``.  Extension-field
elements are tuples of ``m`` coefficients (constant term first) reduced
modulo a monic irreducible polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

__all__ = [
    "FieldError",
    "PrimeField",
    "ExtField",
    "is_prime",
    "is_irreducible",
    "DEFAULT_MODULI",
]


class FieldError(ValueError):
    """Raised for invalid field parameters or undefined field operations."""


# Lexicographically smallest monic irreducible (by integer value of the
# coefficient vector, constant term first) for every p^m <= 3**6, m >= 2.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 1, 0, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 1, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (5, 4): (2, 0, 0, 0, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (2, 0, 0, 1),
    (11, 2): (1, 0, 1),
    (13, 2): (2, 0, 1),
    (17, 2): (3, 0, 1),
    (19, 2): (1, 0, 1),
    (23, 2): (1, 0, 1),
}

MAX_FIELD_ORDER = 3**10


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise FieldError(f"p={self.p!r} is not a prime")

    @property
    def order(self) -> int:
        return self.p

    def __call__(self, x: int) -> int:
        return x % self.p

    def elements(self) -> range:
        return range(self.p)

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def neg(self, x: int) -> int:
        return -x % self.p

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return pow(x, -1, self.p)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def _require_odd(self, what: str) -> None:
        if self.p == 2:
            raise FieldError(f"{what} is unsupported for p = 2 (every element is a square)")

    def is_square(self, x: int) -> bool:
        """Euler's criterion; zero counts as a square."""
        self._require_odd("is_square")
        x %= self.p
        return x == 0 or pow(x, (self.p - 1) // 2, self.p) == 1

    @cached_property
    def squares(self) -> frozenset[int]:
        return frozenset(y * y % self.p for y in range(self.p))

    def smallest_nonsquare(self) -> int:
        self._require_odd("smallest_nonsquare")
        for x in range(2, self.p):
            if not self.is_square(x):
                return x
        raise AssertionError("unreachable for odd p")

    def sqrt(self, x: int) -> int:
        """Smallest y with y*y == x, by exhaustive search."""
        x %= self.p
        for y in range(self.p):
            if y * y % self.p == x:
                return y
        raise FieldError(f"{x} is not a square mod {self.p}")

    @cached_property
    def inverse_table(self) -> tuple[int, ...]:
        """``inverse_table[x]`` is 1/x; entry 0 is 0 as a sentinel."""
        return (0,) + tuple(pow(x, -1, self.p) for x in range(1, self.p))


# -- polynomials over GF(p), coefficient lists constant term first ----------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    lead_inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    _trim(a)
    while len(a) - 1 >= dm:
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _polymul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _polysub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _polygcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def _polypowmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(base, m, p)
    while e:
        if e & 1:
            result = _polymod(_polymul(result, base, p), m, p)
        base = _polymod(_polymul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility of a polynomial over GF(p).

    Degree <= 3 uses root-freeness; higher degrees use
    gcd(f, x^(p^k) - x) == 1 for k <= deg/2.
    """
    f = _trim([c % p for c in f])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if m <= 3:
        for x in range(p):
            if sum(c * pow(x, i, p) for i, c in enumerate(f)) % p == 0:
                return False
        return True
    xpow = [0, 1]
    for _ in range(m // 2):
        xpow = _polypowmod(xpow, p, f, p)
        g = _polygcd(f, _polysub(xpow, [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


@dataclass(frozen=True)
class ExtField:
    """GF(p^m) as GF(p)[x] / (modulus).

    ``modulus`` is a monic coefficient tuple of length m+1, constant term
    first.  When omitted, the built-in default table is used.
    """

    p: int
    m: int
    modulus: tuple[int, ...] = dc_field(default=())

    def __post_init__(self):
        base = PrimeField(self.p)
        if self.m < 1:
            raise FieldError("extension degree must be >= 1")
        if self.p**self.m > MAX_FIELD_ORDER:
            raise FieldError(f"GF({self.p}^{self.m}) exceeds the supported size {MAX_FIELD_ORDER}")
        modulus = tuple(self.modulus)
        if not modulus:
            if self.m == 1:
                modulus = (0, 1)
            elif (self.p, self.m) in DEFAULT_MODULI:
                modulus = DEFAULT_MODULI[(self.p, self.m)]
            else:
                modulus = _search_irreducible(self.p, self.m)
        modulus = tuple(c % base.p for c in modulus)
        if len(modulus) != self.m + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {self.m}")
        if not is_irreducible(modulus, self.p):
            raise FieldError(f"modulus {modulus} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", modulus)

    @property
    def base(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.m

    @property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.m - 1)

    def element(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        red = _polymod(list(coeffs), self.modulus, self.p)
        return tuple(red) + (0,) * (self.m - len(red))

    def gen(self) -> tuple[int, ...]:
        """The class of x."""
        return self.element([0, 1])

    def elements(self) -> Iterator[tuple[int, ...]]:
        for coeffs in product(range(self.p), repeat=self.m):
            yield tuple(reversed(coeffs))

    def add(self, x, y):
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple((a - b) % self.p for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a % self.p for a in x)

    def mul(self, x, y):
        return self.element(_polymul(x, y, self.p))

    def pow(self, x, e: int):
        result = self.one
        base = tuple(x)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, x):
        if not any(x):
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(x, self.order - 2)


def _search_irreducible(p: int, m: int) -> tuple[int, ...]:
    for val in range(p**m):
        f = [(val // p**i) % p for i in range(m)] + [1]
        if f[0] and is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial found for ({p}, {m})")
