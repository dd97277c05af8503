"""Order, maximal-element-order and representation-dimension data for finite
simple groups, plus the log-ratio ``log|G| / log m1(G)`` and the rank
thresholds that follow from it.

Exponent bounds are stored as pairs ``(lo, hi)`` meaning ``q^lo < x < q^hi``.
Rows whose data is only asymptotic carry ``approx=True`` and are never used
for exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DomainError, PreconditionError, ResourceError
from .finite.fields import is_prime, prime_power
from .finite.groups import (DEFAULT_SCAN_BUDGET, TargetGroup, gl_order, m1_exact, max_order_alt,
                            max_orders_alt_upto, psl_order)

CLASSICAL = ("A", "2A", "B", "C", "D", "2D")
EXCEPTIONAL = ("E6", "E7", "E8", "F4", "G2", "2E6", "3D4", "2B2", "2G2", "2F4")
TAGS = ("Alt", "GLn") + CLASSICAL + EXCEPTIONAL + ("CyclicPrime", "Sporadic")
MIN_RANK = {"Alt": 5, "GLn": 1, "A": 1, "2A": 2, "B": 2, "C": 3, "D": 4, "2D": 4}
EXCEPTIONAL_BOUND = 248
SPORADIC_BOUND = 196883
# Massias: log g(n) <= 1.05313 sqrt(n log n) for Landau's function g
MASSIAS = 1.05313

# tag -> (order exponent, m1 exponent, r lo, r hi), all asymptotic
_TABLE = {
    "E6": (78, 6, 27, 27),
    "E7": (133, 7, 56, 56),
    "E8": (248, 8, 248, 248),
    "F4": (52, 4, 25, 26),
    "G2": (14, 2, 6, 7),
    "2E6": (78, 6, 27, 27),
    "3D4": (28, 4, 8, 8),
    "2B2": (5, 2, 4, 4),
    "2G2": (2, 2, 7, 7),
    "2F4": (26, 2, 26, 26),
}
_TWISTED_CHAR = {"2B2": 2, "2F4": 2, "2G2": 3}


@dataclass(frozen=True)
class FamilyId:
    tag: str
    n: Optional[int] = None
    q: Optional[int] = None

    def __post_init__(self):
        t, n, q = self.tag, self.n, self.q
        if t not in TAGS:
            raise DomainError(f"unknown family {t!r}; expected one of {', '.join(TAGS)}")
        if t in MIN_RANK:
            if n is None or n < MIN_RANK[t]:
                raise DomainError(f"family {t} needs n >= {MIN_RANK[t]}, got n={n}")
        elif n is not None:
            raise DomainError(f"family {t} takes no rank parameter")
        if t == "Alt":
            if q is not None:
                raise DomainError("family Alt takes no field parameter")
            return
        if t == "Sporadic":
            if q is not None:
                raise DomainError("family Sporadic takes no parameters")
            return
        if t == "CyclicPrime":
            if q is None or not is_prime(q):
                raise DomainError(f"CyclicPrime needs a prime q, got {q}")
            return
        if q is None:
            return
        pt = prime_power(q)
        if pt is None:
            raise DomainError(f"q={q} is not a prime power")
        if t in _TWISTED_CHAR:
            p, e = pt
            if p != _TWISTED_CHAR[t] or e % 2 == 0:
                raise DomainError(f"family {t} needs q = {_TWISTED_CHAR[t]}^(2j+1), got q={q}")

    @property
    def label(self):
        parts = [self.tag]
        if self.n is not None:
            parts.append(f"n={self.n}")
        if self.q is not None:
            parts.append(f"q={self.q}")
        return " ".join(parts)


@dataclass(frozen=True)
class Interval:
    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_closed: bool = True
    hi_closed: bool = True

    @classmethod
    def point(cls, x):
        return cls(Fraction(x), Fraction(x))

    @property
    def is_point(self):
        return self.lo is not None and self.lo == self.hi

    def contains(self, x) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    def to_json(self):
        def f(x):
            if x is None:
                return None
            return int(x) if x.denominator == 1 else float(x)
        return {"lo": f(self.lo), "hi": f(self.hi), "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}

    def __str__(self):
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        if self.is_point:
            return lo
        return f"{'[' if self.lo_closed else '('}{lo}, {hi}{']' if self.hi_closed else ')'}"


def _iv(lo, hi, lo_closed=True, hi_closed=True):
    conv = lambda x: None if x is None else Fraction(x)
    return Interval(conv(lo), conv(hi), lo_closed, hi_closed)


@dataclass(frozen=True)
class AtlasEntry:
    family: FamilyId
    name: str
    order: Optional[int]
    order_exponents: Optional[tuple]
    m1: Optional[int]
    m1_exponents: Optional[tuple]
    r: Optional[Interval]
    r_exceptions: tuple
    r_fl: Interval
    ratio_bounds: Interval
    approx: bool = False
    flags: tuple = ()

    def to_json(self) -> dict:
        return {
            "family": self.family.tag, "n": self.family.n, "q": self.family.q, "name": self.name,
            "order": self.order, "order_exponents": list(self.order_exponents) if self.order_exponents else None,
            "m1": self.m1, "m1_exponents": list(self.m1_exponents) if self.m1_exponents else None,
            "r": self.r.to_json() if self.r else None, "r_exceptions": [list(e) for e in self.r_exceptions],
            "r_fl": self.r_fl.to_json(), "ratio_bounds": self.ratio_bounds.to_json(),
            "approx": self.approx, "flags": list(self.flags),
        }


# --- exact orders -------------------------------------------------------------

def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def psu_order(m: int, q: int) -> int:
    """|PSU(m, q)|."""
    return q ** (m * (m - 1) // 2) * _prod(q**i - (-1) ** i for i in range(2, m + 1)) // math.gcd(m, q + 1)


def exact_order(f: FamilyId) -> Optional[int]:
    t, n, q = f.tag, f.n, f.q
    if t == "Alt":
        return math.factorial(n) // 2
    if t == "CyclicPrime":
        return q
    if q is None:
        return None
    if t == "GLn":
        return gl_order(n, q)
    if t == "A":
        return psl_order(n + 1, q)
    if t == "2A":
        return psu_order(n + 1, q)
    if t in ("B", "C"):
        return q ** (n * n) * _prod(q ** (2 * i) - 1 for i in range(1, n + 1)) // math.gcd(2, q - 1)
    if t in ("D", "2D"):
        s = 1 if t == "D" else -1
        top = q**n - s
        return q ** (n * (n - 1)) * top * _prod(q ** (2 * i) - 1 for i in range(1, n)) // math.gcd(4, q**n - s)
    if t == "G2":
        return q**6 * (q**6 - 1) * (q**2 - 1)
    if t == "F4":
        return q**24 * (q**12 - 1) * (q**8 - 1) * (q**6 - 1) * (q**2 - 1)
    if t == "E6":
        return q**36 * _prod(q**i - 1 for i in (2, 5, 6, 8, 9, 12)) // math.gcd(3, q - 1)
    if t == "2E6":
        return (q**36 * (q**12 - 1) * (q**9 + 1) * (q**8 - 1) * (q**6 - 1) * (q**5 + 1) * (q**2 - 1)
                // math.gcd(3, q + 1))
    if t == "E7":
        return q**63 * _prod(q**i - 1 for i in (2, 6, 8, 10, 12, 14, 18)) // math.gcd(2, q - 1)
    if t == "E8":
        return q**120 * _prod(q**i - 1 for i in (2, 8, 12, 14, 18, 20, 24, 30))
    if t == "3D4":
        return q**12 * (q**8 + q**4 + 1) * (q**6 - 1) * (q**2 - 1)
    if t == "2B2":
        return q**2 * (q**2 + 1) * (q - 1)
    if t == "2G2":
        return q**3 * (q**3 + 1) * (q - 1)
    if t == "2F4":
        return q**12 * (q**6 + 1) * (q**4 - 1) * (q**3 + 1) * (q - 1)
    return None


def exact_m1(f: FamilyId, budget: int = DEFAULT_SCAN_BUDGET) -> Optional[int]:
    """m1 where a closed form or an exhaustive scan is available, else None."""
    t, n, q = f.tag, f.n, f.q
    if t == "Alt":
        return max_order_alt(n)
    if t == "CyclicPrime":
        return q
    if q is None:
        return None
    if t == "GLn":
        return q**n - 1
    if t == "A":
        try:
            return m1_exact(TargetGroup.psl(n + 1, q), budget)
        except ResourceError:
            return None
    return None


# --- entries -----------------------------------------------------------------

_NAMES = {"A": "PSL({m},{q})", "2A": "PSU({m},{q})", "B": "POmega({m},{q})", "C": "PSp({m},{q})",
          "D": "POmega+({m},{q})", "2D": "POmega-({m},{q})"}


def _classical_data(t, n, q):
    """(order exps, m1 exps, r interval, exceptions, flags, matrix size)."""
    flags = ()
    if t == "A":
        order, m1, r_val, exc, m = (n * n - 3, n * n + 2 * n + 1), (n - 2, n + 2), n + 1, ((1, 4), (1, 5), (2, 2)), n + 1
    elif t == "2A":
        order, m1, r_val, exc, m = (n * n + 2 * n - 1, n * n + 2 * n + 1), (n - 4, n + 1), n + 1, ((3, 2),), n + 1
    elif t in ("B", "C"):
        order, m1, exc, m = (2 * n * n + n - 2, 2 * n * n + n + 1), (n - 2, n + 2), (), (2 * n + 1 if t == "B" else 2 * n)
        if t == "C":
            r_val = 2 * n
        elif q is None:
            r_val = None
        else:
            r_val = 2 * n + 1 if (q % 2 == 1 and n != 2) else 2 * n
    else:
        order, m1, r_val, m = (2 * n * n - n - 2, 2 * n * n - n + 1), (n - 2, n + 2), 2 * n, 2 * n
        exc = ((4, 2),) if t == "D" else ()
        if t == "D":
            flags = ("r exception list truncated at source; stored as (4,2)",)
    if r_val is None:
        r = _iv(2 * n, 2 * n + 1)
    elif q is not None and (n, q) in exc:
        r = _iv(2, r_val)  # exceptional pair: only the natural-module upper bound is known
    else:
        r = _iv(r_val, r_val)
    return order, m1, r, exc, flags, m


def atlas_entry(f: FamilyId) -> AtlasEntry:
    t, n, q = f.tag, f.n, f.q
    order = exact_order(f)
    if t == "Alt":
        r = _iv(n - 2, n - 2) if n >= 9 else _iv(2, n - 2)
        return AtlasEntry(f, f"Alt({n})", order, None, max_order_alt(n), None, r, (),
                          _iv(r.lo, r.hi**2), Interval(None, None), flags=("ratio constants unspecified",))
    if t == "GLn":
        hi = Fraction(n * n, n - 1) if n > 1 else None
        return AtlasEntry(f, f"GL({n},{q if q else 'q'})", order, (n * n - 1, n * n),
                          q**n - 1 if q else None, (n - 1, n + 1), None, (),
                          _iv(n - 2, n), _iv(n - 1, hi, True, False))
    if t in CLASSICAL:
        oe, me, r, exc, flags, m = _classical_data(t, n, q)
        lo = Fraction(oe[0], me[1])
        hi = Fraction(oe[1], me[0]) if me[0] > 0 else None
        name = _NAMES[t].format(m=m, q=q if q else "q")
        m1 = exact_m1(f) if q is not None else None
        return AtlasEntry(f, name, order, oe, m1, me, r, exc, _iv(r.lo, r.hi**2),
                          _iv(lo, hi, False, False), flags=flags)
    if t in _TABLE:
        oe, me, rlo, rhi = _TABLE[t]
        exc, flags, r = (), (), _iv(rlo, rhi)
        if t in ("2G2", "2F4"):
            exc = ((1, _TWISTED_CHAR[t] ** 3),)
            if q == _TWISTED_CHAR[t] ** 3:
                r = _iv(2, EXCEPTIONAL_BOUND)
        if t == "2G2":
            flags = ("order exponent 2 is as tabulated; the exact order grows like q^7",)
        return AtlasEntry(f, f"{t}({q if q else 'q'})", order, (oe, oe), None, (me, me), r, exc,
                          _iv(r.lo, r.hi**2), _iv(None, EXCEPTIONAL_BOUND), approx=True, flags=flags)
    if t == "CyclicPrime":
        return AtlasEntry(f, f"Z/{q}", q, (1, 1), q, (1, 1), _iv(1, 1), (), _iv(1, 1), _iv(1, 1))
    return AtlasEntry(f, "sporadic", None, None, None, None, _iv(2, SPORADIC_BOUND), (),
                      _iv(2, SPORADIC_BOUND**2), _iv(None, SPORADIC_BOUND),
                      flags=("constant bound only",))


# --- ratio -------------------------------------------------------------------

def ratio_at_least(order: int, m1: int, c: Fraction) -> bool:
    """Exact test of ``log order / log m1 >= c`` via ``order^b >= m1^a``."""
    c = Fraction(c)
    if c <= 0:
        return True
    return order**c.denominator >= m1**c.numerator


def ratio_in(order: int, m1: int, iv: Interval) -> bool:
    if iv.lo is not None:
        at_least = ratio_at_least(order, m1, iv.lo)
        equal = at_least and order**iv.lo.denominator == m1**iv.lo.numerator
        if not at_least or (equal and not iv.lo_closed):
            return False
    if iv.hi is not None:
        at_least = ratio_at_least(order, m1, iv.hi)
        equal = at_least and order**iv.hi.denominator == m1**iv.hi.numerator
        if at_least and not (equal and iv.hi_closed):
            return False
    return True


@dataclass(frozen=True)
class RatioReport:
    family: FamilyId
    value: Optional[float]
    exact: bool
    interval: Interval
    approx: bool
    passes: dict = field(default_factory=dict)

    @property
    def tag(self):
        return "exact" if self.exact else "interval"

    def to_json(self):
        return {"family": self.family.label, "value": self.value, "tag": self.tag,
                "interval": self.interval.to_json(), "approx": self.approx, "passes": dict(self.passes)}


def ratio(f: FamilyId, budget: int = DEFAULT_SCAN_BUDGET) -> RatioReport:
    e = atlas_entry(f)
    order = e.order
    m1 = e.m1 if e.m1 is not None else (exact_m1(f, budget) if order is not None else None)
    if order is None or m1 is None or m1 < 2:
        return RatioReport(f, None, False, e.ratio_bounds, e.approx)
    value = math.log(order) / math.log(m1)
    passes = {}
    if e.ratio_bounds.lo is not None or e.ratio_bounds.hi is not None:
        passes["ratio_bounds"] = ratio_in(order, m1, e.ratio_bounds)
    return RatioReport(f, value, True, e.ratio_bounds, e.approx, passes)


@dataclass(frozen=True)
class Check:
    name: str
    detail: str
    passed: bool


@dataclass(frozen=True)
class InequalityReport:
    family: FamilyId
    order: Optional[int]
    m1: Optional[int]
    checks: tuple

    @property
    def violations(self):
        return tuple(c for c in self.checks if not c.passed)

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {"family": self.family.label, "order": self.order, "m1": self.m1,
                "checks": [{"name": c.name, "detail": c.detail, "passed": c.passed} for c in self.checks]}


def _between(x, q, exps):
    lo, hi = exps
    return (lo < 0 or q**lo < x) and x < q**hi


def verify_family_inequalities(f: FamilyId, budget: int = DEFAULT_SCAN_BUDGET) -> InequalityReport:
    """Check exact values against the stored bounds.  Violations are reported, not raised."""
    e = atlas_entry(f)
    q = f.q
    order = e.order
    m1 = e.m1 if e.m1 is not None else exact_m1(f, budget)
    checks = []
    if order is not None and q is not None and e.order_exponents and not e.approx and f.tag != "CyclicPrime":
        lo, hi = e.order_exponents
        checks.append(Check("order", f"{q}^{lo} < {order} < {q}^{hi}", _between(order, q, (lo, hi))))
    if m1 is not None and q is not None and e.m1_exponents and not e.approx and f.tag != "CyclicPrime":
        lo, hi = e.m1_exponents
        checks.append(Check("m1", f"{q}^{lo} < {m1} < {q}^{hi}", _between(m1, q, (lo, hi))))
    if f.tag == "Alt":
        n = f.n
        # n! >= (n/e)^n, the explicit form used for threshold solving
        checks.append(Check("factorial", f"log({n}!) >= {n} log({n}/e)",
                            math.lgamma(n + 1) >= n * math.log(n / math.e)))
    if order is not None and m1 is not None and m1 >= 2 and (
            e.ratio_bounds.lo is not None or e.ratio_bounds.hi is not None) and not e.approx:
        checks.append(Check("ratio", f"log {order} / log {m1} in {e.ratio_bounds}",
                            ratio_in(order, m1, e.ratio_bounds)))
    if e.r is not None:
        checks.append(Check("r<=r_fl<=r^2", f"{e.r} / {e.r_fl}",
                            e.r.lo <= e.r_fl.lo and e.r_fl.hi <= e.r.hi**2))
    return InequalityReport(f, order, m1, tuple(checks))


# --- thresholds ---------------------------------------------------------------

def _ratio_lower(t, n) -> Fraction:
    if t == "A":
        return Fraction(n * n - 3, n + 2)
    if t == "2A":
        return Fraction(n * n + 2 * n - 1, n + 1)
    if t in ("B", "C"):
        return Fraction(2 * n * n + n - 2, n + 2)
    return Fraction(2 * n * n - n - 2, n + 2)


def _r_upper(t, n) -> int:
    return {"A": n + 1, "2A": n + 1, "B": 2 * n + 1, "C": 2 * n}.get(t, 2 * n)


def _alt_ratio_lower(n: int, m1: int) -> float:
    return (n * math.log(n / math.e) - math.log(2)) / math.log(m1)


def _alt_ratio_floor(n: int) -> float:
    """Lower bound on the Alt(n) ratio that is increasing in n."""
    return (n * math.log(n / math.e) - math.log(2)) / (MASSIAS * math.sqrt(n * math.log(n)))


@dataclass(frozen=True)
class ThresholdReport:
    C: Fraction
    R: int
    contributions: dict


def threshold_report(C, include_sporadic: bool = False, kind: str = "simple") -> ThresholdReport:
    C = Fraction(C)
    if C <= 0:
        raise DomainError("C must be positive")
    if kind == "GL":
        # n - 1 <= ratio, so ratio <= C forces n <= C + 1
        n = math.floor(C) + 1
        return ThresholdReport(C, n, {"GLn": n})
    if kind != "simple":
        raise DomainError(f"unknown threshold kind {kind!r}")
    contrib = {"CyclicPrime": 1, "exceptional": EXCEPTIONAL_BOUND}
    for t in CLASSICAL:
        n = MIN_RANK[t]
        best = None
        while _ratio_lower(t, n) <= C:
            best = n
            n += 1
        if best is not None:
            contrib[t] = _r_upper(t, best)
    # past the first n where the increasing floor exceeds C no Alt(n) qualifies
    stop = MIN_RANK["Alt"]
    while _alt_ratio_floor(stop) <= C:
        stop += 1
    m1s = max_orders_alt_upto(stop)
    best = None
    for n in range(MIN_RANK["Alt"], stop):
        if _alt_ratio_lower(n, m1s[n]) <= C:
            best = n
    if best is not None:
        contrib["Alt"] = best - 2
    if include_sporadic:
        contrib["Sporadic"] = SPORADIC_BOUND
    return ThresholdReport(C, max(contrib.values()), contrib)


def bounded_rank_threshold(C, include_sporadic: bool = False, kind: str = "simple") -> int:
    """Rank bound R(C): every group of the class with ratio <= C has (projective) rank <= R."""
    return threshold_report(C, include_sporadic, kind).R


# --- PSL embeddings -----------------------------------------------------------

_ALT_SMALL = {5: (2, 4), 6: (2, 9), 7: (4, 2), 8: (4, 2)}
_PSL_ISO = {(2, 5): (2, 4), (3, 2): (2, 7)}


def _smallest_prime_factor(n):
    return next(p for p in range(2, n + 1) if n % p == 0)


@dataclass(frozen=True)
class EmbeddingReport:
    group: TargetGroup
    psl_n: int
    psl_q: int
    psl_order: int
    group_order: int
    d1: Optional[int]
    d2: int
    D: int
    check: bool

    def to_json(self):
        return {"group": str(self.group), "psl": f"PSL({self.psl_n},{self.psl_q})",
                "psl_order": self.psl_order, "group_order": self.group_order,
                "D1": self.d1, "D2": self.d2, "D": self.D, "check": self.check}


def _least_exponent(target_order, base):
    d, acc = 1, base
    while acc < target_order:
        acc *= base
        d += 1
    return d


def psl_embedding_bookkeeping(g: TargetGroup, R: int) -> EmbeddingReport:
    """PSL(R', q) hosting ``g`` and an exponent ``D`` with ``|PSL| <= |g|^D``."""
    if not g.is_simple:
        raise PreconditionError(f"{g} is not simple")
    order = g.order
    d1 = None
    if g.kind == "Cyclic":
        dim, q = 2, g.n
    elif g.kind == "Alt":
        n = g.n
        dim, q = _ALT_SMALL.get(n, (n - 2, _smallest_prime_factor(n)))
        if dim > R:
            raise PreconditionError(f"no projective representation of {g} of dimension <= {R} is recorded")
        dim = R
    elif g.kind == "PSL":
        dim, q = g.n, g.q
        if dim > R and (g.n, g.q) in _PSL_ISO:
            dim, q = _PSL_ISO[(g.n, g.q)]
        if dim > R:
            raise PreconditionError(f"r({g}) = {dim} exceeds R = {R}")
        dim = R
    else:
        raise PreconditionError(f"{g} is outside the supported simple kinds")
    host = psl_order(dim, q)
    if g.kind == "Alt":
        d1 = _least_exponent(host, order)
    d2 = R * R
    D = max(d1 or 0, d2, 4)
    return EmbeddingReport(g, dim, q, host, order, d1, d2, D, host <= order**D)
