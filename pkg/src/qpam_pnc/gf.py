"""Prime-field arithmetic GF(q) for the NC-mapping algebra.

Field elements are plain ints in ``[0, q)``; the modulus travels with the
call (or with a :class:`PrimeField` instance) rather than with each element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


class ConfigurationError(ValueError):
    """Invalid modulus, element, or experiment configuration."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def check_modulus(q: int) -> int:
    """Validate that ``q`` is an odd prime and return it as an int."""
    if isinstance(q, bool) or int(q) != q:
        raise ConfigurationError(f"q must be an integer, got {q!r}")
    q = int(q)
    if q < 3 or not is_prime(q):
        raise ConfigurationError(f"q must be an odd prime >= 3, got {q}")
    return q


def check_element(a: int, q: int) -> int:
    if int(a) != a or not 0 <= a < q:
        raise ConfigurationError(f"{a!r} is not an element of GF({q})")
    return int(a)


def gf_add(a: int, b: int, q: int) -> int:
    return (check_element(a, q) + check_element(b, q)) % q


def gf_sub(a: int, b: int, q: int) -> int:
    return (check_element(a, q) - check_element(b, q)) % q


def gf_mul(a: int, b: int, q: int) -> int:
    return (check_element(a, q) * check_element(b, q)) % q


def gf_neg(a: int, q: int) -> int:
    return (-check_element(a, q)) % q


class Bezout(NamedTuple):
    g: int
    x: int
    y: int


def bezout(a: int, b: int) -> Bezout:
    """Return ``(g, x, y)`` with ``g = gcd(a, b)`` and ``a*x + b*y = g``.

    Among the infinitely many solutions the one with ``0 < x <= |b/g|`` is
    returned (when ``b != 0``). For ``a, b > 0`` and ``g < min(a, b)`` this
    is the pair with ``0 < x < b/g`` and ``-a/g < y < 0``.

    >>> bezout(11, 9)
    Bezout(g=1, x=5, y=-6)
    """
    a, b = int(a), int(b)
    if a == 0 and b == 0:
        raise ValueError("bezout(0, 0) is undefined")
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    g, x, y = old_r, old_s, old_t
    if g < 0:
        g, x, y = -g, -x, -y
    if b != 0:
        step_x, step_y = abs(b) // g, (a // g) * (1 if b > 0 else -1)
        # shift along (x + k*b/g, y - k*a/g) until 0 < x <= |b/g|
        k = -((x - 1) // step_x)
        x, y = x + k * step_x, y - k * step_y
    return Bezout(g, x, y)


def gf_inv(a: int, q: int) -> int:
    """Multiplicative inverse via extended Euclid."""
    a = check_element(a, q)
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse in GF({q})")
    return bezout(a, q).x % q


@dataclass(frozen=True)
class PrimeField:
    """GF(q) with the modulus validated once."""

    q: int

    def __post_init__(self):
        check_modulus(self.q)

    def add(self, a, b):
        return gf_add(a, b, self.q)

    def sub(self, a, b):
        return gf_sub(a, b, self.q)

    def mul(self, a, b):
        return gf_mul(a, b, self.q)

    def neg(self, a):
        return gf_neg(a, self.q)

    def inv(self, a):
        return gf_inv(a, self.q)

    def elements(self):
        return range(self.q)

    def nonzero(self):
        return range(1, self.q)
