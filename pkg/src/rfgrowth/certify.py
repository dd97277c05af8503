"""Common multiples in malabelian groups, with checkable witnesses.

A common multiple of a finite set T of nontrivial elements is a nontrivial
element lying in the normal closure of every member of T.  It is built by
pairing elements and taking commutators ``[mu^-1 x mu, y]``, with ``mu`` the
shortlex-least conjugator that keeps the commutator nontrivial.  Every step
is recorded as a product of conjugates so that membership in each normal
closure can be re-checked by free reduction alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ConstantViolation, InputError, SearchExhausted
from .finite.homs import Homomorphism, evaluate
from .words import (EMPTY, Presentation, Word, commutator, conjugate, is_trivial, reduce)


@dataclass(frozen=True)
class ConjugateProduct:
    """``prod_k c_k^-1 base^{s_k} c_k`` over ``factors = ((c_k, s_k), ...)``."""

    base: Word
    factors: tuple

    def value(self) -> Word:
        letters: list = []
        inv_base = self.base.inverse().letters
        for conj, sign in self.factors:
            letters += conj.inverse().letters
            letters += self.base.letters if sign > 0 else inv_base
            letters += conj.letters
        return reduce(letters)


@dataclass(frozen=True)
class CommonMultiple:
    word: Word
    t_set: tuple
    witnesses: tuple
    k_used: int = 0
    padded_size: int = 1
    conjugators: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class WitnessVerdict:
    ok: bool
    first_failure: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def commutes(u: Word, v: Word, p: Presentation) -> bool:
    if p.is_free:
        return (u * v) == (v * u)
    return is_trivial(commutator(u, v), p)


def _require_nontrivial(w: Word, p: Presentation, what: str):
    if is_trivial(w, p):
        raise InputError(f"{what} must be nontrivial")


def find_conjugator(gamma: Word, eta: Word, kmax: int, p: Presentation) -> Word:
    """Shortlex-least ``mu`` with ``|mu| <= kmax`` and ``[mu^-1 gamma mu, eta] != 1``."""
    _require_nontrivial(gamma, p, "gamma")
    _require_nontrivial(eta, p, "eta")
    for mu in p.alphabet.words_up_to(kmax):
        if not commutes(conjugate(gamma, mu), eta, p):
            return mu
    raise SearchExhausted(f"no conjugator of length <= {kmax} breaks commutation; "
                          f"the group may not be {kmax}-malabelian here")


def _compose(outer, inner):
    """Rewrite a product of conjugates of x, given x as a product of conjugates of gamma."""
    out = []
    for d, t in outer:
        seq = inner if t > 0 else reversed(inner)
        out += [(c * d, s * t) for c, s in seq]
    return out


def common_multiple(T: Sequence[Word], kmax: int, p: Presentation) -> CommonMultiple:
    """Nontrivial element in the intersection of the normal closures of ``T``.

    ``T`` is padded to a power of two by repeating its last element; pairs of
    consecutive elements are combined level by level until one remains.
    """
    T = tuple(T)
    if not T:
        raise InputError("T must contain at least one element")
    for w in T:
        _require_nontrivial(w, p, "every element of T")
    size = 1
    while size < len(T):
        size *= 2
    nodes = [(w, {i: [(EMPTY, 1)]}) for i, w in enumerate(T)]
    nodes += [(T[-1], {}) for _ in range(size - len(T))]
    k_used = 0
    mus = []
    while len(nodes) > 1:
        nxt = []
        for (x, wx), (y, wy) in zip(nodes[0::2], nodes[1::2]):
            mu = find_conjugator(x, y, kmax, p)
            k_used = max(k_used, len(mu))
            mus.append(mu)
            xc = conjugate(x, mu)
            c = commutator(xc, y)
            # [x^mu, y] = (x^-1)^mu (x)^(mu y)  =  (y^-1)^(x^mu) y
            in_x = [(mu, -1), (mu * y, 1)]
            in_y = [(xc, -1), (EMPTY, 1)]
            merged = {i: _compose(in_x, f) for i, f in wx.items()}
            merged.update({i: _compose(in_y, f) for i, f in wy.items() if i not in merged})
            nxt.append((c, merged))
        nodes = nxt
    eta, wmap = nodes[0]
    witnesses = tuple(ConjugateProduct(T[i], tuple(wmap[i])) for i in range(len(T)))
    return CommonMultiple(eta, T, witnesses, k_used, size, tuple(mus))


def verify_witness(cm: CommonMultiple) -> WitnessVerdict:
    if len(cm.witnesses) != len(cm.t_set):
        return WitnessVerdict(False, None, "witness count differs from |T|")
    for i, (g, wit) in enumerate(zip(cm.t_set, cm.witnesses)):
        if wit.base != g:
            return WitnessVerdict(False, i, "witness base differs from T element")
        if wit.value() != cm.word:
            return WitnessVerdict(False, i, "witness does not reduce to the common multiple")
    return WitnessVerdict(True)


@dataclass(frozen=True)
class TransferReport:
    status: str  # "pass", "vacuous" or "fail"
    failures: tuple = ()


def certificate_transfer_check(cm: CommonMultiple, h: Homomorphism) -> TransferReport:
    """If ``h`` detects the common multiple it must detect every element of T."""
    if evaluate(h, cm.word).is_identity():
        return TransferReport("vacuous")
    bad = tuple(i for i, g in enumerate(cm.t_set) if evaluate(h, g).is_identity())
    return TransferReport("fail" if bad else "pass", bad)


@dataclass(frozen=True)
class TjSet:
    gamma: Word
    gamma0: Word
    mu0: Word
    j: int
    elements: tuple


def build_tj(gamma: Word, gamma0: Word, j: int, kmax: int, p: Presentation) -> TjSet:
    """``{[mu0^-1 gamma mu0, gamma0], gamma0^2, ..., gamma0^j}``."""
    if j < 2:
        raise InputError("j must be at least 2")
    mu0 = find_conjugator(gamma, gamma0, kmax, p)
    first = commutator(conjugate(gamma, mu0), gamma0)
    elems = (first,) + tuple(gamma0**i for i in range(2, j + 1))
    for w in elems:
        _require_nontrivial(w, p, "T_j elements")
    return TjSet(gamma, gamma0, mu0, j, elems)


def length_constant(kmax: int) -> int:
    """Engineering constant C0 with |cm| <= C0 d t^2 for the pairing construction."""
    return 8 * (kmax + 1)


@dataclass(frozen=True)
class LcmAudit:
    d: int
    t: int
    length: int
    fitted: float
    c0: int
    bound: int


def lcm_length_audit(cm: CommonMultiple, kmax: int, T: Sequence[Word] = None) -> LcmAudit:
    T = tuple(T) if T is not None else cm.t_set
    d = max(len(w) for w in T)
    t = len(T)
    c0 = length_constant(kmax)
    audit = LcmAudit(d, t, len(cm.word), len(cm.word) / (d * t * t), c0, c0 * d * t * t)
    if audit.length > audit.bound:
        raise ConstantViolation(f"|cm| = {audit.length} exceeds C0*d*t^2 = {audit.bound}")
    return audit
