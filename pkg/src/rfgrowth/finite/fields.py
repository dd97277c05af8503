"""Finite fields F_q, q = p^t, with elements encoded as integers 0..q-1.

An element ``c_0 + c_1 x + ... + c_{t-1} x^{t-1}`` of F_p[x]/(f) is stored
as ``sum c_i p^i``.  The modulus ``f`` is the least irreducible monic
polynomial of degree ``t``, where polynomials are compared by the integer
encoding of their non-leading coefficients.
"""

from __future__ import annotations

import functools
import itertools

from ..errors import InputError

TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int):
    """Return ``(p, t)`` with ``q == p**t``, or ``None``."""
    if q < 2:
        return None
    p = next(f for f in itertools.count(2) if q % f == 0)
    t = 0
    while q % p == 0:
        q //= p
        t += 1
    return (p, t) if q == 1 else None


def is_prime_power(q: int) -> bool:
    return prime_power(q) is not None


def prime_powers_up_to(n: int) -> list:
    return [q for q in range(2, n + 1) if is_prime_power(q)]


def primes_up_to(n: int) -> list:
    return [k for k in range(2, n + 1) if is_prime(k)]


def factorint(n: int) -> dict:
    out, f = {}, 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# polynomials over F_p as coefficient lists, lowest degree first

def _poly_divmod(a, b, p):
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        quot[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
    return quot, a


def _monic_polys(p, d):
    for code in range(p ** d):
        coeffs = [(code // p ** i) % p for i in range(d)]
        yield coeffs + [1]


def is_irreducible(poly, p) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    t = len(poly) - 1
    for d in range(1, t // 2 + 1):
        for f in _monic_polys(p, d):
            _, r = _poly_divmod(poly, f, p)
            if not any(r):
                return False
    return True


def least_irreducible(p: int, t: int) -> tuple:
    for f in _monic_polys(p, t):
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


class FiniteField:
    """Arithmetic in F_q.  Use :func:`GF` to get a cached instance."""

    def __init__(self, q: int):
        pt = prime_power(q)
        if pt is None:
            raise InputError(f"{q} is not a prime power")
        self.q = q
        self.p, self.t = pt
        self.modulus = least_irreducible(self.p, self.t) if self.t > 1 else (0, 1)
        self._mul = self._add = None
        if self.t > 1 and q <= TABLE_LIMIT:
            self._add = [[self._poly_add(a, b) for b in range(q)] for a in range(q)]
            self._mul = [[self._poly_mul(a, b) for b in range(q)] for a in range(q)]
        self._inv = {}

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __reduce__(self):
        return (GF, (self.q,))

    def _digits(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.t)]

    def _encode(self, coeffs):
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    def _poly_add(self, a, b):
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _poly_mul(self, a, b):
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.t - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        _, r = _poly_divmod(prod, list(self.modulus), self.p)
        r = (r + [0] * self.t)[: self.t]
        return self._encode(r)

    def add(self, a, b):
        if self.t == 1:
            return (a + b) % self.p
        return self._add[a][b] if self._add else self._poly_add(a, b)

    def neg(self, a):
        if self.t == 1:
            return -a % self.p
        return self._encode([-c % self.p for c in self._digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.t == 1:
            return a * b % self.p
        return self._mul[a][b] if self._mul else self._poly_mul(a, b)

    def pow(self, a, k):
        if self.t == 1:
            return pow(a, k, self.p)
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        if self.t == 1:
            return pow(a, self.p - 2, self.p)
        if a not in self._inv:
            self._inv[a] = self.pow(a, self.q - 2)
        return self._inv[a]

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def primitive_element(self) -> int:
        n = self.q - 1
        for g in range(1, self.q):
            if all(self.pow(g, n // f) != 1 for f in factorint(n)):
                return g
        raise AssertionError("unreachable")

    def add_table(self):
        return [[self.add(a, b) for b in range(self.q)] for a in range(self.q)]

    def mul_table(self):
        return [[self.mul(a, b) for b in range(self.q)] for a in range(self.q)]


@functools.lru_cache(maxsize=None)
def GF(q: int) -> FiniteField:
    return FiniteField(q)

