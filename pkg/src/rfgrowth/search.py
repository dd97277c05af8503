"""Detection of group elements in finite quotients.

Targets come from an ordered :class:`TargetCatalog`.  For each target the
search enumerates generator-image tuples over the Cayley table in numpy
chunks, keeps those satisfying every relator, and stops at the first tuple
that sends the element to a non-identity.  The first catalog group (in
order) with such a tuple gives the detection value.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InequalityViolation, InputError, ResourceError
from .finite.elements import element_order
from .finite.fields import is_prime, prime_powers_up_to
from .finite.groups import (DEFAULT_SCAN_BUDGET, TargetGroup, gl_order, m1_exact, psl_order,
                            realize)
from .finite.homs import Homomorphism, evaluate
from .words import Presentation, Word, ball, ball_in_generators, is_trivial

CLASSES = ("ALL", "GL", "SIMPLE")
DEFAULT_HOM_BUDGET = 2 * 10**7
CHUNK = 1 << 16
# every simple group of order below this is cyclic, alternating or PSL(n,q)
SIMPLE_COMPLETE_BELOW = 6048
# every group of order below this is cyclic, the Klein group or Sym(3)
ALL_COMPLETE_BELOW = 8


@dataclass(frozen=True)
class TargetCatalog:
    cls: str
    order_limit: int
    groups: tuple

    def __len__(self):
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)


def _matrix_params(limit, order_fn, n_min=1):
    out = []
    n = n_min
    while order_fn(n, 2) <= limit:
        for q in prime_powers_up_to(limit + 1):
            o = order_fn(n, q)
            if o > limit:
                break
            out.append((n, q))
        n += 1
    return out


def build_catalog(cls: str, order_limit: int) -> TargetCatalog:
    """Deterministic catalog of targets of order ``2 .. order_limit``."""
    cls = cls.upper()
    if cls not in CLASSES:
        raise InputError(f"unknown class {cls!r}; expected one of {', '.join(CLASSES)}")
    if order_limit < 2:
        raise InputError("order_limit must be at least 2")
    L = order_limit
    gs = []
    if cls == "GL":
        gs = [TargetGroup.gl(n, q) for n, q in _matrix_params(L, gl_order) if gl_order(n, q) > 1]
    elif cls == "SIMPLE":
        gs += [TargetGroup.cyclic(p) for p in range(2, L + 1) if is_prime(p)]
        n = 5
        while math.factorial(n) // 2 <= L:
            gs.append(TargetGroup.alt(n))
            n += 1
        gs += [TargetGroup.psl(n, q) for n, q in _matrix_params(L, psl_order, 2)
               if TargetGroup.psl(n, q).is_simple]
    else:
        gs += [TargetGroup.cyclic(m) for m in range(2, L + 1)]
        gs += [TargetGroup.dihedral(m) for m in range(2, L // 2 + 1)]
        n = 3
        while math.factorial(n) <= L:
            gs.append(TargetGroup.sym(n))
            n += 1
        n = 4
        while math.factorial(n) // 2 <= L:
            gs.append(TargetGroup.alt(n))
            n += 1
        gs += [TargetGroup.gl(n, q) for n, q in _matrix_params(L, gl_order) if gl_order(n, q) > 1]
        for n, q in _matrix_params(L, psl_order, 2):
            if q > 2 and TargetGroup.sl(n, q).order <= L:
                gs.append(TargetGroup.sl(n, q))
            if TargetGroup.psl(n, q).order > 1:
                gs.append(TargetGroup.psl(n, q))
            if q > 2 and TargetGroup.pgl(n, q).order <= L:
                gs.append(TargetGroup.pgl(n, q))
    gs = sorted(set(gs), key=lambda g: g.sort_key())
    return TargetCatalog(cls, L, tuple(gs))


# --- vectorized hom search ----------------------------------------------------

def _eval_words(T, inv, imgs, words):
    """Evaluate each word on a batch of image tuples; returns index arrays."""
    inv_imgs = [inv[g] for g in imgs]
    out = []
    for w in words:
        cur = np.zeros(len(imgs[0]), dtype=T.dtype)
        for x in w:
            cur = T[cur, imgs[x - 1] if x > 0 else inv_imgs[-x - 1]]
        out.append(cur)
    return out


class HomSearch:
    """Chunked enumeration of relator-satisfying image tuples into one group."""

    def __init__(self, p: Presentation, target: TargetGroup, prune: bool = False,
                 budget: int = DEFAULT_HOM_BUDGET):
        self.p, self.target = p, target
        self.G = realize(target)
        self.T = self.G.table()
        self.inv = self.G.inverse()
        N = self.G.order
        first = np.asarray(self.G.conjugacy_representatives() if prune else range(N), dtype=np.int64)
        self.first = first
        self.radix = [len(first)] + [N] * (p.rank - 1)
        self.total = math.prod(self.radix)
        if self.total > budget:
            raise ResourceError(f"{self.total} image tuples into {target} exceed the hom budget {budget}")

    def _chunks(self):
        for start in range(0, self.total, CHUNK):
            idx = np.arange(start, min(start + CHUNK, self.total), dtype=np.int64)
            digits = []
            for size in reversed(self.radix[1:]):
                digits.append(idx % size)
                idx = idx // size
            digits.append(self.first[idx])
            imgs = digits[::-1]
            ok = np.ones(len(imgs[0]), dtype=bool)
            for r in _eval_words(self.T, self.inv, imgs, self.p.relators):
                ok &= r == 0
            yield imgs, ok

    def homs(self):
        """Valid tuples as lists of element indices, in enumeration order."""
        for imgs, ok in self._chunks():
            for k in np.flatnonzero(ok):
                yield tuple(int(a[k]) for a in imgs)

    def find_detecting(self, w: Word):
        for imgs, ok in self._chunks():
            if not ok.any():
                continue
            (val,) = _eval_words(self.T, self.inv, imgs, [w])
            hit = np.flatnonzero(ok & (val != 0))
            if len(hit):
                k = hit[0]
                return tuple(int(a[k]) for a in imgs)
        return None

    def to_hom(self, tup) -> Homomorphism:
        return Homomorphism(self.p, self.target, tuple(self.G.elements[i] for i in tup))


def enumerate_homs(p: Presentation, g: TargetGroup, budget: int = DEFAULT_HOM_BUDGET):
    """Every homomorphism ``p -> g``, unpruned, in deterministic order."""
    hs = HomSearch(p, g, prune=False, budget=budget)
    for tup in hs.homs():
        yield hs.to_hom(tup)


def find_detecting_hom(p: Presentation, w: Word, g: TargetGroup, prune: bool = True,
                       budget: int = DEFAULT_HOM_BUDGET) -> Optional[Homomorphism]:
    hs = HomSearch(p, g, prune=prune, budget=budget)
    tup = hs.find_detecting(w)
    return None if tup is None else hs.to_hom(tup)


@dataclass(frozen=True)
class DetectionResult:
    word: Word
    order: int
    group: Optional[TargetGroup]
    witness: Optional[Homomorphism]
    exhausted: bool
    tag: str
    cls: str = "ALL"

    def to_json(self, alphabet=None):
        fmt = alphabet.format_word if alphabet else str
        return {"word": fmt(self.word), "value": self.order, "tag": self.tag, "class": self.cls,
                "witness_group": str(self.group) if self.group else None,
                "witness": self.witness.describe() if self.witness else None,
                "exhausted": self.exhausted}


def _detection_tag(p: Presentation, cat: TargetCatalog, value: int, exhausted: bool) -> str:
    if exhausted:
        return "lower-bound"
    if cat.cls == "GL":
        return "exact"
    if cat.cls == "SIMPLE":
        return "exact" if value <= SIMPLE_COMPLETE_BELOW else "upper-bound"
    # cyclic groups only have cyclic quotients, and Cyclic(d) is in the catalog for every d
    if p.rank == 1 or value <= ALL_COMPLETE_BELOW:
        return "exact"
    return "upper-bound"


def detect(w: Word, p: Presentation, cat: TargetCatalog, jobs: int = 1, prune: bool = True,
           budget: int = DEFAULT_HOM_BUDGET) -> DetectionResult:
    """Smallest catalog group admitting a hom that sends ``w`` to a non-identity."""
    if is_trivial(w, p):
        raise InputError("cannot detect the trivial element")
    groups = cat.groups

    def attempt(g):
        return find_detecting_hom(p, w, g, prune=prune, budget=budget)

    jobs = max(1, int(jobs))
    if jobs == 1:
        for g in groups:
            h = attempt(g)
            if h is not None:
                return DetectionResult(w, g.order, g, h, False, _detection_tag(p, cat, g.order, False), cat.cls)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for start in range(0, len(groups), jobs):
                window = groups[start:start + jobs]
                for g, h in zip(window, pool.map(attempt, window)):
                    if h is not None:
                        return DetectionResult(w, g.order, g, h, False,
                                               _detection_tag(p, cat, g.order, False), cat.cls)
    value = cat.order_limit + 1
    return DetectionResult(w, value, None, None, True, "lower-bound", cat.cls)


def verify_minimality(res: DetectionResult, p: Presentation, cat: TargetCatalog,
                      budget: int = DEFAULT_HOM_BUDGET) -> bool:
    """Unpruned re-scan: no strictly smaller catalog group detects the word."""
    if res.witness is not None and evaluate(res.witness, res.word).is_identity():
        return False
    for g in cat.groups:
        if g.order >= res.order:
            break
        if any(not evaluate(h, res.word).is_identity() for h in enumerate_homs(p, g, budget)):
            return False
    return True


# --- growth tables ------------------------------------------------------------

@dataclass(frozen=True)
class GrowthRow:
    m: int
    value: int
    argmax: Optional[Word]
    group: Optional[TargetGroup]
    exhausted: bool
    tag: str


@dataclass(frozen=True)
class GrowthTable:
    cls: str
    order_limit: int
    rows: tuple
    alphabet: object = field(default=None, compare=False)

    def values(self):
        return [r.value for r in self.rows]


def _combine_tags(tags):
    if "lower-bound" in tags:
        return "lower-bound"
    if "upper-bound" in tags:
        return "upper-bound"
    return "exact"


def growth(p: Presentation, M: int, cat: TargetCatalog, generators: Sequence[Word] = None,
           jobs: int = 1, ball_budget: int = None, hom_budget: int = DEFAULT_HOM_BUDGET,
           cache: dict = None) -> GrowthTable:
    """Rows ``m = 1..M``: the max detection value over the ball of radius m."""
    kw = {} if ball_budget is None else {"budget": ball_budget}
    if generators is None:
        B = ball(p, M, **kw)
    else:
        B = ball_in_generators(p, generators, M, **kw)
    cache = {} if cache is None else cache
    rows = []
    best, tags = None, []
    by_len = {}
    for length, w in B.with_norms():
        by_len.setdefault(length, []).append(w)
    for m in range(1, M + 1):
        for w in by_len.get(m, []):
            if w not in cache:
                cache[w] = detect(w, p, cat, jobs=jobs, budget=hom_budget)
            res = cache[w]
            tags.append(res.tag)
            if best is None or res.order > best.order:
                best = res
        if best is None:
            rows.append(GrowthRow(m, 1, None, None, False, "exact"))
        else:
            rows.append(GrowthRow(m, best.order, best.word, best.group, best.exhausted, _combine_tags(tags)))
    return GrowthTable(cat.cls, cat.order_limit, tuple(rows), p.alphabet)


@dataclass(frozen=True)
class ComparisonReport:
    radius: int
    tables: dict
    checks: tuple
    ok: bool


def compare_classes(p: Presentation, M: int, catalogs: Sequence[TargetCatalog], strict: bool = True,
                    jobs: int = 1) -> ComparisonReport:
    """Pointwise ``D_ALL <= D_GL`` and ``D_ALL <= D_SIMPLE`` on computed rows."""
    limits = {c.order_limit for c in catalogs}
    if len(limits) != 1:
        raise InputError("catalogs must share an order limit")
    tables = {c.cls: growth(p, M, c, jobs=jobs) for c in catalogs}
    checks = []
    if "ALL" in tables:
        for other in ("GL", "SIMPLE"):
            if other not in tables:
                continue
            for ra, ro in zip(tables["ALL"].rows, tables[other].rows):
                checks.append((ra.m, other, ra.value, ro.value, ra.value <= ro.value))
    ok = all(c[-1] for c in checks)
    if strict and not ok:
        bad = next(c for c in checks if not c[-1])
        raise InequalityViolation(f"D_ALL({bad[0]}) = {bad[2]} > D_{bad[1]}({bad[0]}) = {bad[3]}")
    return ComparisonReport(M, tables, tuple(checks), ok)


def dominates(f: Sequence[int], g: Sequence[int], C: int) -> bool:
    """``f(m) <= C g(C m)`` for every m where ``C m`` is in range (1-based).

    False when no m is in range, so a large C cannot pass vacuously.
    """
    if not f or C > len(g):
        return False
    return all(f[m - 1] <= C * g[C * m - 1] for m in range(1, len(f) + 1) if C * m <= len(g))


def domination_constant(f: Sequence[int], g: Sequence[int], cmax: int = 16) -> Optional[int]:
    """Least ``C <= cmax`` witnessing ``f <= g`` in the comparison calculus, or None."""
    for C in range(1, cmax + 1):
        if dominates(f, g, C):
            return C
    return None


# --- T_j experiment -----------------------------------------------------------

@dataclass(frozen=True)
class ExperimentRow:
    j: int
    t_size: int
    eta: Word
    eta_length: int
    fitted: float
    witnesses_ok: bool
    detection: DetectionResult
    group_order: Optional[int]
    m1: Optional[int]
    ratio: Optional[float]
    gamma0_image_order: Optional[int]
    order_ok: Optional[bool]


@dataclass(frozen=True)
class ExperimentCurve:
    rows: tuple
    truncated: bool
    c_hat: Optional[float]
    length_constant: int


def ratio_experiment(gamma: Word, gamma0: Word, jmax: int, kmax: int, p: Presentation,
                     cat: TargetCatalog, jobs: int = 1, hom_budget: int = DEFAULT_HOM_BUDGET,
                     scan_budget: int = DEFAULT_SCAN_BUDGET) -> ExperimentCurve:
    from .certify import build_tj, common_multiple, length_constant, verify_witness

    if cat.cls not in ("GL", "SIMPLE"):
        raise InputError("the experiment runs over the GL or SIMPLE class")
    rows, truncated = [], False
    g0 = max(len(gamma0), 1)
    for j in range(2, jmax + 1):
        tj = build_tj(gamma, gamma0, j, kmax, p)
        cm = common_multiple(tj.elements, kmax, p)
        ok = bool(verify_witness(cm))
        fitted = len(cm.word) / (g0 * j**3)
        res = detect(cm.word, p, cat, jobs=jobs, budget=hom_budget)
        if res.exhausted:
            rows.append(ExperimentRow(j, len(tj.elements), cm.word, len(cm.word), fitted, ok, res,
                                      None, None, None, None, None))
            truncated = True
            break
        G = res.group
        m1 = m1_exact(G, scan_budget)
        o = element_order(evaluate(res.witness, gamma0))
        r = math.log(G.order) / math.log(m1) if m1 > 1 else None
        rows.append(ExperimentRow(j, len(tj.elements), cm.word, len(cm.word), fitted, ok, res,
                                  G.order, m1, r, o, o >= j + 1))
    c_hat = max((r.fitted for r in rows), default=None)
    return ExperimentCurve(tuple(rows), truncated, c_hat, length_constant(kmax))

