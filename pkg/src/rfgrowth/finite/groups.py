"""Catalog descriptors for finite target groups.

A :class:`TargetGroup` is a descriptor such as ``GL(2,3)`` or ``Alt(5)``.
It knows its exact order from the classical formulas, can list generators,
and can be *realized*: closed under multiplication into an indexed element
list with right-multiplication maps, from which a Cayley table is built on
demand.  Maximal element orders come from closed forms where available and
from exhaustive scans otherwise.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError, InputError, ResourceError
from .elements import (Matrix, Permutation, ProjectiveClass, Residue, element_order,
                       lcm_all)
from .fields import GF, is_prime, is_prime_power, primes_up_to

KINDS = ("Cyclic", "Dihedral", "Alt", "Sym", "GL", "SL", "PSL", "PGL")
MATRIX_KINDS = ("GL", "SL", "PSL", "PGL")
DEFAULT_SCAN_BUDGET = 10**6
CAYLEY_LIMIT = 6000
MATRIX_ENUM_LIMIT = 4 * 10**6


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def sl_order(n: int, q: int) -> int:
    return gl_order(n, q) // (q - 1)


def psl_order(n: int, q: int) -> int:
    return sl_order(n, q) // math.gcd(n, q - 1)


@dataclass(frozen=True)
class TargetGroup:
    kind: str
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(int(x) for x in self.params))
        k, ps = self.kind, self.params
        if k not in KINDS:
            raise InputError(f"unsupported group kind {k!r}")
        if k in MATRIX_KINDS:
            if len(ps) != 2 or ps[0] < 1 or not is_prime_power(ps[1]):
                raise InputError(f"{k} needs (n >= 1, prime power q), got {ps}")
        elif len(ps) != 1 or ps[0] < 1 or (k == "Dihedral" and ps[0] < 2):
            raise InputError(f"bad parameters {ps} for {k}")

    # construction helpers
    @classmethod
    def cyclic(cls, m):
        return cls("Cyclic", (m,))

    @classmethod
    def dihedral(cls, m):
        return cls("Dihedral", (m,))

    @classmethod
    def alt(cls, n):
        return cls("Alt", (n,))

    @classmethod
    def sym(cls, n):
        return cls("Sym", (n,))

    @classmethod
    def gl(cls, n, q):
        return cls("GL", (n, q))

    @classmethod
    def sl(cls, n, q):
        return cls("SL", (n, q))

    @classmethod
    def psl(cls, n, q):
        return cls("PSL", (n, q))

    @classmethod
    def pgl(cls, n, q):
        return cls("PGL", (n, q))

    @property
    def descriptor(self) -> str:
        return f"{self.kind}({','.join(map(str, self.params))})"

    def __str__(self):
        return self.descriptor

    @property
    def n(self):
        return self.params[0]

    @property
    def q(self) -> Optional[int]:
        return self.params[1] if self.kind in MATRIX_KINDS else None

    @property
    def order(self) -> int:
        k, ps = self.kind, self.params
        if k == "Cyclic":
            return ps[0]
        if k == "Dihedral":
            return 2 * ps[0]
        if k == "Sym":
            return math.factorial(ps[0])
        if k == "Alt":
            return max(math.factorial(ps[0]) // 2, 1)
        n, q = ps
        if k == "GL":
            return gl_order(n, q)
        if k == "SL":
            return sl_order(n, q)
        if k == "PGL":
            return gl_order(n, q) // (q - 1)
        return psl_order(n, q)

    @property
    def is_simple(self) -> bool:
        k = self.kind
        if k == "Cyclic":
            return is_prime(self.n)
        if k == "Alt":
            return self.n >= 5
        if k == "PSL":
            return self.n >= 2 and (self.n, self.q) not in ((2, 2), (2, 3))
        return False

    @property
    def is_abelian(self) -> bool:
        k, n = self.kind, self.n
        if k == "Cyclic":
            return True
        if k == "Dihedral":
            return n == 2
        if k == "Sym":
            return n <= 2
        if k == "Alt":
            return n <= 3
        return n == 1

    @property
    def tags(self) -> frozenset:
        t = {"ALL"}
        if self.kind == "GL":
            t.add("GL")
        if self.is_simple:
            t.add("SIMPLE")
        return frozenset(t)

    @property
    def is_projective(self) -> bool:
        return self.kind in ("PSL", "PGL")

    def sort_key(self):
        """Catalog order: by order, then kind, then field size, then rank."""
        ps = (self.params[1], self.params[0]) if self.kind in MATRIX_KINDS else self.params
        return (self.order, KINDS.index(self.kind), ps)

    @property
    def field(self):
        return GF(self.q) if self.kind in MATRIX_KINDS else None

    def identity(self):
        k = self.kind
        if k == "Cyclic":
            return Residue(0, self.n)
        if k in ("Sym", "Alt"):
            return Permutation.identity(self.n)
        if k == "Dihedral":
            return Permutation.identity(4 if self.n == 2 else self.n)
        I = Matrix.identity(self.field, self.n)
        return ProjectiveClass.of(I) if self.is_projective else I

    def generators(self) -> list:
        k, n = self.kind, self.n
        if k == "Cyclic":
            return [Residue(1 % n, n)]
        if k == "Dihedral":
            if n == 2:
                return [Permutation.from_cycles(4, [[0, 1], [2, 3]]),
                        Permutation.from_cycles(4, [[0, 2], [1, 3]])]
            return [Permutation(tuple((i + 1) % n for i in range(n))),
                    Permutation(tuple(-i % n for i in range(n)))]
        if k == "Sym":
            if n == 1:
                return [Permutation.identity(1)]
            return [Permutation.from_cycles(n, [[0, 1]]),
                    Permutation.from_cycles(n, [list(range(n))])]
        if k == "Alt":
            if n <= 2:
                return [Permutation.identity(n)]
            gens = [Permutation.from_cycles(n, [[0, 1, 2]])]
            if n >= 4:
                long = list(range(n)) if n % 2 else list(range(1, n))
                gens.append(Permutation.from_cycles(n, [long]))
            return gens
        F, q = self.field, self.q
        gens = []
        for i, j in itertools.permutations(range(n), 2):
            for e in range(F.t):
                c = F.p**e
                rows = [[int(a == b) for b in range(n)] for a in range(n)]
                rows[i][j] = c
                gens.append(Matrix(F, tuple(map(tuple, rows))))
        if k in ("GL", "PGL") and q > 2:
            rows = [[int(a == b) for b in range(n)] for a in range(n)]
            rows[0][0] = F.primitive_element()
            gens.append(Matrix(F, tuple(map(tuple, rows))))
        if not gens:
            gens = [Matrix.identity(F, n)]
        if self.is_projective:
            gens = [ProjectiveClass.of(g) for g in gens]
        return gens

    def contains(self, g) -> bool:
        k = self.kind
        if k == "Cyclic":
            return isinstance(g, Residue) and g.modulus == self.n
        if k in ("Sym", "Alt"):
            ok = isinstance(g, Permutation) and g.degree == self.n
            return ok and (k == "Sym" or g.sign() == 1)
        if k == "Dihedral":
            return g in realize(self).index
        if self.is_projective:
            if not isinstance(g, ProjectiveClass) or g.field != self.field or g.n != self.n:
                return False
            if k == "PSL":
                # some scalar multiple has determinant 1
                d = g.matrix.det()
                F = self.field
                return any(F.mul(F.pow(c, self.n), d) == 1 for c in F.units())
            return True
        if not isinstance(g, Matrix) or g.field != self.field or g.n != self.n:
            return False
        d = g.det()
        return d != 0 and (k == "GL" or d == 1)

    def realize(self) -> "ConcreteGroup":
        return realize(self)


_DESC = re.compile(r"\s*([A-Za-z]+)\s*\(\s*([0-9,\s]+)\)\s*\Z")
_ALIASES = {"c": "Cyclic", "cyclic": "Cyclic", "z": "Cyclic", "d": "Dihedral", "dihedral": "Dihedral",
            "alt": "Alt", "a": "Alt", "sym": "Sym", "s": "Sym", "gl": "GL", "sl": "SL",
            "psl": "PSL", "pgl": "PGL"}


def parse_target(text: str) -> TargetGroup:
    m = _DESC.match(text)
    if not m or m.group(1).lower() not in _ALIASES:
        raise InputError(f"cannot parse group descriptor {text!r}")
    params = tuple(int(x) for x in m.group(2).split(",") if x.strip())
    return TargetGroup(_ALIASES[m.group(1).lower()], params)


def parse_element(target: TargetGroup, text: str):
    """Parse an element literal for ``target`` (see the CLI docs for syntax)."""
    from .elements import parse_matrix, parse_permutation

    k = target.kind
    if k == "Cyclic":
        try:
            return Residue(int(text) % target.n, target.n)
        except ValueError:
            raise InputError(f"bad residue literal {text!r}") from None
    if k in ("Sym", "Alt", "Dihedral"):
        deg = 4 if (k == "Dihedral" and target.n == 2) else target.n
        g = parse_permutation(text, deg)
    else:
        g = parse_matrix(text, target.q)
        if g.n != target.n:
            raise InputError(f"expected a {target.n}x{target.n} matrix")
        if target.is_projective:
            g = ProjectiveClass.of(g)
    if not target.contains(g):
        raise InputError(f"{text!r} is not an element of {target}")
    return g


class ConcreteGroup:
    """A realized finite group: indexed elements, identity at index 0.

    ``right[s][x]`` is the index of ``elements[x] * gens[s]``; every element
    is reached from the identity by a BFS path recorded in ``parent``.
    """

    def __init__(self, target: TargetGroup):
        self.target = target
        gens = target.generators()
        e = target.identity()
        self.elements = [e]
        self.index = {e: 0}
        self.parent = [(-1, -1)]
        right = [[] for _ in gens]
        i = 0
        while i < len(self.elements):
            x = self.elements[i]
            for s, g in enumerate(gens):
                y = x * g
                j = self.index.get(y)
                if j is None:
                    j = len(self.elements)
                    self.index[y] = j
                    self.elements.append(y)
                    self.parent.append((i, s))
                right[s].append(j)
            i += 1
        if len(self.elements) != target.order:
            raise AssertionError(f"{target}: closure has {len(self.elements)} elements, "
                                 f"formula says {target.order}")
        self.right = [np.asarray(r, dtype=np.int64) for r in right]
        self._table = None
        self._inverse = None

    @property
    def order(self):
        return len(self.elements)

    def table(self) -> np.ndarray:
        """Cayley table ``T[x, y] = index(x * y)``."""
        if self._table is None:
            n = self.order
            if n > CAYLEY_LIMIT:
                raise ResourceError(f"Cayley table for {self.target} ({n} elements) "
                                    f"exceeds the limit {CAYLEY_LIMIT}")
            dtype = np.int16 if n < 2**15 else np.int32
            T = np.empty((n, n), dtype=dtype)
            T[:, 0] = np.arange(n)
            for y in range(1, n):
                par, s = self.parent[y]
                T[:, y] = self.right[s][T[:, par]]
            self._table = T
        return self._table

    def inverse(self) -> np.ndarray:
        if self._inverse is None:
            T = self.table()
            self._inverse = np.argmax(T == 0, axis=1)
        return self._inverse

    def conjugacy_representatives(self) -> list:
        """Least index in each conjugacy class, ascending."""
        T, inv = self.table(), self.inverse()
        seen = np.zeros(self.order, dtype=bool)
        reps = []
        hs = np.arange(self.order)
        for x in range(self.order):
            if seen[x]:
                continue
            reps.append(x)
            seen[T[T[inv[hs], x], hs]] = True
        return reps


@functools.lru_cache(maxsize=128)
def realize(target: TargetGroup) -> ConcreteGroup:
    return ConcreteGroup(target)


# --- maximal element orders -------------------------------------------------

def _landau_table(n: int, primes) -> list:
    """``best[s]`` = max lcm of distinct-prime prime powers with sum <= s."""
    best = [1] * (n + 1)
    for p in primes:
        new = best[:]
        pk = p
        while pk <= n:
            for s in range(pk, n + 1):
                cand = best[s - pk] * pk
                if cand > new[s]:
                    new[s] = cand
            pk *= p
        best = new
    return best


@functools.lru_cache(maxsize=32)
def _landau_tables(n: int):
    primes = primes_up_to(n)
    return _landau_table(n, primes), _landau_table(n, [p for p in primes if p > 2])


def max_order_sym(n: int) -> int:
    """Landau's function: max lcm over partitions of n."""
    return _landau_tables(n)[0][n] if n >= 1 else 1


def _alt_best(n, odd):
    best = odd[n]
    a = 2
    while a + 2 <= n:
        b = 2
        while b <= a and a + b <= n:
            best = max(best, a * odd[n - a - b])
            b *= 2
        a *= 2
    return best


def max_order_alt(n: int) -> int:
    """Max order of an even permutation of n points.

    An optimal cycle type can be taken to be odd prime powers on distinct
    primes plus either no even cycles or exactly two 2-power cycles
    ``2^a >= 2^b``; the second costs points but not order.
    """
    if n < 1:
        return 1
    return _alt_best(n, _landau_tables(n)[1])


def max_orders_alt_upto(N: int) -> list:
    """``[max_order_alt(n) for n in 0..N]`` from a single DP table."""
    odd = _landau_table(N, [p for p in primes_up_to(N) if p > 2])
    return [1] + [_alt_best(n, odd) for n in range(1, N + 1)]


def m1_exact(t: TargetGroup, budget: int = DEFAULT_SCAN_BUDGET) -> int:
    """Maximal element order, closed form where known, else an exhaustive scan."""
    k = t.kind
    if k == "GL":
        return t.q**t.n - 1
    if k == "Cyclic":
        return t.n
    if k == "Dihedral":
        return max(t.n, 2)
    if k == "Sym":
        return max_order_sym(t.n)
    if k == "Alt":
        return max_order_alt(t.n)
    if t.order > budget:
        raise ResourceError(f"|{t}| = {t.order} exceeds the scan budget {budget} and no closed form is known")
    return m1_scan(t, budget)


def m1_scan(t: TargetGroup, budget: int = DEFAULT_SCAN_BUDGET) -> int:
    return max(order_histogram(t, budget))


def order_histogram(t: TargetGroup, budget: int = DEFAULT_SCAN_BUDGET) -> dict:
    """Element order -> number of elements, by exhaustive scan."""
    if t.order > budget:
        raise ResourceError(f"|{t}| = {t.order} exceeds the scan budget {budget}")
    if t.kind in MATRIX_KINDS:
        return _matrix_order_histogram(t)
    G = realize(t)
    hist: dict = {}
    for g in G.elements:
        o = lcm_all(g.cycle_type()) if isinstance(g, Permutation) else element_order(g)
        hist[o] = hist.get(o, 0) + 1
    return hist


class _BatchField:
    """Vectorized F_q arithmetic on integer-coded numpy arrays."""

    def __init__(self, q):
        F = GF(q)
        self.q, self.p, self.prime = q, F.p, F.t == 1
        if not self.prime:
            self.add_t = np.array(F.add_table(), dtype=np.int64)
            self.mul_t = np.array(F.mul_table(), dtype=np.int64)
            self.neg_t = np.array([F.neg(a) for a in range(q)], dtype=np.int64)

    def add(self, a, b):
        return (a + b) % self.p if self.prime else self.add_t[a, b]

    def mul(self, a, b):
        return (a * b) % self.p if self.prime else self.mul_t[a, b]

    def neg(self, a):
        return (-a) % self.p if self.prime else self.neg_t[a]

    def matmul(self, A, B):
        if self.prime:
            return np.matmul(A, B) % self.p
        n = A.shape[1]
        C = np.zeros_like(A)
        for i in range(n):
            for k in range(n):
                acc = self.mul(A[:, i, 0], B[:, 0, k])
                for j in range(1, n):
                    acc = self.add(acc, self.mul(A[:, i, j], B[:, j, k]))
                C[:, i, k] = acc
        return C

    def det(self, A):
        n = A.shape[1]
        total = np.zeros(A.shape[0], dtype=np.int64)
        for perm in itertools.permutations(range(n)):
            term = A[:, 0, perm[0]]
            for i in range(1, n):
                term = self.mul(term, A[:, i, perm[i]])
            if Permutation(perm).sign() < 0:
                term = self.neg(term)
            total = self.add(total, term)
        return total


def _matrix_batch(t: TargetGroup) -> np.ndarray:
    n, q = t.n, t.q
    count = q ** (n * n)
    if count > MATRIX_ENUM_LIMIT or n > 4:
        raise ResourceError(f"enumerating all {n}x{n} matrices over F_{q} is over the limit")
    bf = _BatchField(q)
    idx = np.arange(count, dtype=np.int64)
    M = np.empty((count, n, n), dtype=np.int64)
    for k in range(n * n):
        M[:, k // n, k % n] = (idx // q**k) % q
    d = bf.det(M)
    keep = d != 0 if t.kind in ("GL", "PGL") else d == 1
    return M[keep]


def _matrix_order_histogram(t: TargetGroup) -> dict:
    n, q = t.n, t.q
    bf = _BatchField(q)
    G = _matrix_batch(t)
    projective = t.is_projective
    eye = np.eye(n, dtype=np.int64)
    off = ~np.eye(n, dtype=bool)
    orders = np.zeros(len(G), dtype=np.int64)
    active = np.arange(len(G))
    P = G.copy()
    k = 1
    while len(active):
        if projective:
            diag = P[:, np.arange(n), np.arange(n)]
            done = np.all(P[:, off] == 0, axis=1) & np.all(diag == diag[:, :1], axis=1)
        else:
            done = np.all(P == eye, axis=(1, 2))
        orders[active[done]] = k
        active, P = active[~done], P[~done]
        P = bf.matmul(P, G[active])
        k += 1
    hist: dict = {}
    vals, counts = np.unique(orders, return_counts=True)
    scalars = {"GL": 1, "SL": 1, "PGL": q - 1, "PSL": math.gcd(n, q - 1)}[t.kind]
    for v, c in zip(vals.tolist(), counts.tolist()):
        hist[v] = c // scalars
    return hist
