"""Finite-index subgroups of free groups and induced representations.

The subgroup is always the kernel of an explicit homomorphism to a finite
group, so membership is decided by evaluation.  Cosets are found by BFS in
letter order, which gives a prefix-closed (Schreier) transversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, MembershipError
from .finite.elements import Matrix, ProjectiveClass, is_scalar
from .finite.fields import GF
from .finite.groups import gl_order, psl_order
from .finite.homs import Homomorphism, evaluate
from .words import EMPTY, Alphabet, Presentation, Word, reduce


@dataclass(frozen=True)
class CosetStructure:
    ambient: Presentation
    hom: Homomorphism
    transversal: tuple  # Words, transversal[0] is the empty word
    table: tuple        # table[g][i] = coset of t_i * generator g
    images: tuple       # image element of each coset representative

    @property
    def index(self) -> int:
        return len(self.transversal)

    def coset_of(self, w: Word) -> int:
        i = 0
        for x in w:
            i = self.table[x - 1][i] if x > 0 else self._preimage(-x - 1, i)
        return i

    def _preimage(self, g, i):
        return self.table[g].index(i)


def coset_structure(p: Presentation, h: Homomorphism) -> CosetStructure:
    if not p.is_free:
        raise InputError("coset structures are built over free ambient groups only")
    letters = p.alphabet.letters()
    gens = {x: evaluate(h, Word((x,))) for x in letters}
    e = h.target.identity()
    reps, elems, index = [EMPTY], [e], {e: 0}
    i = 0
    while i < len(reps):
        for x in letters:
            y = elems[i] * gens[x]
            if y not in index:
                index[y] = len(reps)
                reps.append(reps[i] * Word((x,)))
                elems.append(y)
        i += 1
    table = tuple(tuple(index[elems[i] * gens[g + 1]] for i in range(len(reps))) for g in range(p.rank))
    return CosetStructure(p, h, tuple(reps), table, tuple(elems))


@dataclass(frozen=True)
class SchreierBasis:
    words: tuple
    slots: dict  # (coset, generator index) -> position in words

    def __len__(self):
        return len(self.words)


def schreier_basis(cs: CosetStructure) -> SchreierBasis:
    words, slots = [], {}
    for i, t in enumerate(cs.transversal):
        for g in range(cs.ambient.rank):
            j = cs.table[g][i]
            s = t * Word((g + 1,)) * cs.transversal[j].inverse()
            if s:
                slots[(i, g)] = len(words)
                words.append(s)
    return SchreierBasis(tuple(words), slots)


def schreier_generators(cs: CosetStructure) -> list:
    """Free basis ``t x (rep of t x)^-1`` of the subgroup; size ``1 + l(k-1)``."""
    return list(schreier_basis(cs).words)


def rewrite(cs: CosetStructure, w: Word, basis: SchreierBasis = None) -> Word:
    """Reidemeister-Schreier rewrite of ``w`` as a word in the Schreier generators (1-based)."""
    basis = basis or schreier_basis(cs)
    out, i = [], 0
    for x in w:
        if x > 0:
            g = x - 1
            k = basis.slots.get((i, g))
            if k is not None:
                out.append(k + 1)
            i = cs.table[g][i]
        else:
            g = -x - 1
            j = cs._preimage(g, i)
            k = basis.slots.get((j, g))
            if k is not None:
                out.append(-(k + 1))
            i = j
    if i != 0:
        raise MembershipError("word does not lie in the subgroup (kernel of the quotient map)")
    return reduce(out)


def schreier_alphabet(n: int) -> Alphabet:
    return Alphabet([f"s{i + 1}" for i in range(n)])


def _block_matrix(F, n, ell, blocks):
    """``blocks[(i, j)] = Matrix``; everything else zero."""
    rows = [[0] * (n * ell) for _ in range(n * ell)]
    for (i, j), M in blocks.items():
        for a in range(n):
            for b in range(n):
                rows[i * n + a][j * n + b] = M.rows[a][b]
    return Matrix(F, tuple(map(tuple, rows)))


@dataclass
class InducedRep:
    cs: CosetStructure
    basis: SchreierBasis
    base: tuple
    field: object
    n: int

    def __post_init__(self):
        self._gens = {}

    @property
    def dimension(self) -> int:
        return self.n * self.cs.index

    def base_value(self, w: Word) -> Matrix:
        """Base representation at ``w`` in the subgroup, via rewriting."""
        out = Matrix.identity(self.field, self.n)
        for x in rewrite(self.cs, w, self.basis):
            M = self.base[abs(x) - 1]
            out = out * (M if x > 0 else M.inverse())
        return out

    def generator_image(self, x: int) -> Matrix:
        if x not in self._gens:
            g = abs(x) - 1
            blocks = {}
            for i, t in enumerate(self.cs.transversal):
                j = self.cs.table[g][i] if x > 0 else self.cs._preimage(g, i)
                s = t * Word((x,)) * self.cs.transversal[j].inverse()
                blocks[(i, j)] = self.base_value(s)
            self._gens[x] = _block_matrix(self.field, self.n, self.cs.index, blocks)
        return self._gens[x]

    def image(self, w: Word) -> Matrix:
        out = Matrix.identity(self.field, self.dimension)
        for x in w:
            out = out * self.generator_image(x)
        return out

    def block(self, M: Matrix, i: int, j: int) -> Matrix:
        n = self.n
        return Matrix(self.field, tuple(tuple(M.rows[i * n + a][j * n + b] for b in range(n))
                                        for a in range(n)))


def induce(cs: CosetStructure, base: Sequence[Matrix]) -> InducedRep:
    """Induced representation; ``base[k]`` is the image of the k-th Schreier generator."""
    basis = schreier_basis(cs)
    base = tuple(base)
    if len(base) != len(basis):
        raise InputError(f"need {len(basis)} base matrices, got {len(base)}")
    if not base:
        raise InputError("base representation is empty")
    F, n = base[0].field, base[0].n
    for M in base:
        if M.field != F:
            raise InputError(f"base matrices over different fields: {F} and {M.field}")
        if M.n != n:
            raise InputError("base matrices have different sizes")
        if M.det() == 0:
            raise InputError("base matrices must be invertible")
    return InducedRep(cs, basis, base, F, n)


@dataclass(frozen=True)
class ProjectionReport:
    image: ProjectiveClass
    is_identity: bool
    psl_order: int
    bound: int
    bound_ok: bool


def psl_project(m: Matrix) -> ProjectionReport:
    """Image in PSL(n, q) with the size check ``|PSL(n,q)| <= q^(n^2)``."""
    if m.det() != 1:
        raise InputError("psl_project needs a determinant-one matrix")
    n, q = m.n, m.field.q
    cls = ProjectiveClass.of(m)
    order, bound = psl_order(n, q), q ** (n * n)
    ident = is_scalar(m)
    assert ident == cls.is_identity()
    return ProjectionReport(cls, ident, order, bound, order <= bound)


@dataclass(frozen=True)
class SizeCheck:
    n: int
    ell: int
    q: int
    induced_order: int
    bound: int
    ok: bool


def induced_size_check(n: int, ell: int, q: int) -> SizeCheck:
    """``|GL(n l, q)|`` against ``|GL(n, q)|^(2 l^2)``."""
    GF(q)  # validates q
    lhs = gl_order(n * ell, q)
    rhs = gl_order(n, q) ** (2 * ell * ell)
    return SizeCheck(n, ell, q, lhs, rhs, lhs <= rhs)


def size_grid(ns=range(2, 5), ells=range(2, 4), qs=(2, 3, 5)) -> list:
    return [induced_size_check(n, l, q) for n in ns for l in ells for q in qs]
