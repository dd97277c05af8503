"""Concrete finite group elements.

All element types are immutable, hashable values supporting ``*`` (the group
operation), ``inverse()`` and ``is_identity()``.  Permutations compose left to
right: ``(g * h)(x) = h(g(x))``.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass

from ..errors import InputError, ResourceError
from .fields import GF, FiniteField

DEFAULT_ORDER_CAP = 10**6


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InputError(f"{self.images} is not a permutation")

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n, cycles):
        img = list(range(n))
        for c in cycles:
            for i, x in enumerate(c):
                img[x] = c[(i + 1) % len(c)]
        return cls(tuple(img))

    @property
    def degree(self):
        return len(self.images)

    def __mul__(self, other):
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self):
        seen, out = set(), []
        for i in range(len(self.images)):
            if i in seen:
                continue
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j)
                j = self.images[j]
            out.append(tuple(c))
        return out

    def cycle_type(self):
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def sign(self):
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def __str__(self):
        cs = [c for c in self.cycles() if len(c) > 1]
        if not cs:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cs)


@dataclass(frozen=True)
class Residue:
    """An element of the additive group Z/m, written multiplicatively."""

    value: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.value < self.modulus:
            raise InputError(f"{self.value} is not reduced mod {self.modulus}")

    def __mul__(self, other):
        return Residue((self.value + other.value) % self.modulus, self.modulus)

    def inverse(self):
        return Residue(-self.value % self.modulus, self.modulus)

    def is_identity(self):
        return self.value == 0

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Matrix:
    field: FiniteField
    rows: tuple

    def __post_init__(self):
        n = len(self.rows)
        if n == 0 or any(len(r) != n for r in self.rows):
            raise InputError("matrix must be square and nonempty")
        if any(not 0 <= x < self.field.q for r in self.rows for x in r):
            raise InputError(f"matrix entries must lie in 0..{self.field.q - 1}")

    @classmethod
    def identity(cls, field, n):
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, field, n, c):
        return cls(field, tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def n(self):
        return len(self.rows)

    def __mul__(self, other):
        if other.field != self.field or other.n != self.n:
            raise InputError("matrix product over mismatched fields or sizes")
        F, n = self.field, self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                s = 0
                for x, y in zip(r, c):
                    if x and y:
                        s = F.add(s, F.mul(x, y))
                row.append(s)
            out.append(tuple(row))
        return Matrix(F, tuple(out))

    def _echelon(self, augment):
        F, n = self.field, self.n
        a = [list(r) + (list(e) if augment else []) for r, e in zip(self.rows, Matrix.identity(F, n).rows)]
        det = 1
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                return 0, None
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = F.neg(det)
            det = F.mul(det, a[col][col])
            inv = F.inv(a[col][col])
            a[col] = [F.mul(inv, x) for x in a[col]]
            for i in range(n):
                if i != col and a[i][col]:
                    f = a[i][col]
                    a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[col])]
        return det, a

    def det(self):
        return self._echelon(False)[0]

    def inverse(self):
        det, a = self._echelon(True)
        if not det:
            raise InputError("singular matrix has no inverse")
        return Matrix(self.field, tuple(tuple(r[self.n:]) for r in a))

    def is_identity(self):
        return all(x == (i == j) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def __str__(self):
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in self.rows) + "]"


def is_scalar(m: Matrix) -> bool:
    """True iff ``m = c I`` for some nonzero ``c``."""
    c = m.rows[0][0]
    return c != 0 and all(x == (c if i == j else 0) for i, r in enumerate(m.rows) for j, x in enumerate(r))


@dataclass(frozen=True)
class ProjectiveClass:
    """A matrix modulo nonzero scalars, stored with first nonzero entry 1."""

    matrix: Matrix

    @classmethod
    def of(cls, m: Matrix) -> "ProjectiveClass":
        F = m.field
        lead = next(x for r in m.rows for x in r if x)
        if lead != 1:
            inv = F.inv(lead)
            m = Matrix(F, tuple(tuple(F.mul(inv, x) for x in r) for r in m.rows))
        return cls(m)

    @property
    def field(self):
        return self.matrix.field

    @property
    def n(self):
        return self.matrix.n

    def __mul__(self, other):
        return ProjectiveClass.of(self.matrix * other.matrix)

    def inverse(self):
        return ProjectiveClass.of(self.matrix.inverse())

    def is_identity(self):
        return self.matrix.is_identity()

    def __str__(self):
        return "P" + str(self.matrix)


def element_order(g, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Least ``k >= 1`` with ``g^k = 1``, by repeated multiplication."""
    x, k = g, 1
    while not x.is_identity():
        x = x * g
        k += 1
        if k > cap:
            raise ResourceError(f"element order exceeds the cap {cap}")
    return k


def power(g, k: int):
    if k < 0:
        g, k = g.inverse(), -k
    out = None
    base = g
    while k:
        if k & 1:
            out = base if out is None else out * base
        base = base * base
        k >>= 1
    if out is None:
        out = g * g.inverse()
    return out


# --- text literals ----------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, n: int) -> Permutation:
    """Cycle notation on points 1..n, e.g. ``(1 2 3)(4 5)``, ``(123)`` or ``()``."""
    s = text.strip()
    if _CYCLE.sub("", s).strip():
        raise InputError(f"bad permutation literal {text!r}")
    cycles = []
    for body in _CYCLE.findall(s):
        body = body.strip()
        if not body:
            continue
        pts = re.split(r"[\s,]+", body) if re.search(r"[\s,]", body) else list(body)
        try:
            c = [int(x) - 1 for x in pts]
        except ValueError:
            raise InputError(f"bad permutation literal {text!r}") from None
        if any(not 0 <= x < n for x in c) or len(set(c)) != len(c):
            raise InputError(f"cycle {body!r} is not a cycle on 1..{n}")
        cycles.append(c)
    return Permutation.from_cycles(n, cycles)


def parse_matrix(text: str, q: int) -> Matrix:
    """Row-major literal ``[[0,1],[1,1]]``; entries are field-element codes."""
    try:
        rows = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError):
        raise InputError(f"bad matrix literal {text!r}") from None
    if isinstance(rows, int):
        rows = [[rows]]
    if not isinstance(rows, (list, tuple)) or not all(isinstance(r, (list, tuple)) for r in rows):
        raise InputError(f"bad matrix literal {text!r}")
    return Matrix(GF(q), tuple(tuple(int(x) for x in r) for r in rows))


def lcm_all(xs) -> int:
    out = 1
    for x in xs:
        out = math.lcm(out, x)
    return out
