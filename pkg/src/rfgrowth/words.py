"""Free words, presentations and a desk-scale word problem.

Letters are encoded as nonzero integers: generator ``i`` (0-based) is ``i + 1``
and its formal inverse is ``-(i + 1)``.  Words are always freely reduced.
The shortlex order used for canonical representatives ranks letters as
``a < a^-1 < b < b^-1 < ...``.

Text grammar (round-trippable through :func:`format_word`)::

    word  := term*                 (terms may be separated by space, '*' or '.')
    term  := atom ('^' ['-'] INT)?
    atom  := NAME | INVNAME | '1' | '(' word ')' | '[' word ',' word ']'

``NAME`` is a generator name (a letter followed by optional digits); the
upper-cased name ``INVNAME`` denotes the inverse when it is not itself a
generator.  ``[u,v]`` is the commutator ``u^-1 v^-1 u v``.  A presentation file
holds two lines ``gens: a,b,c,d`` and ``rels: [a,b][c,d], ...``; a relator may
also be written as an equation ``u = v``.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InputError, ResourceError, UnsupportedPresentation

DEFAULT_BALL_BUDGET = 10**6
DEHN_LAMBDA = Fraction(1, 6)


def letter_rank(x: int) -> int:
    return 2 * (abs(x) - 1) + (x < 0)


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        ls = self.letters
        for u, v in zip(ls, ls[1:]):
            if u == -v:
                raise InputError(f"word {ls} is not freely reduced")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __bool__(self):
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return reduce(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return reduce(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def sort_key(self):
        return (len(self.letters), tuple(letter_rank(x) for x in self.letters))

    def exponent_sums(self, rank: int) -> tuple:
        sums = [0] * rank
        for x in self.letters:
            sums[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(sums)

    def __repr__(self):
        return f"Word({self.letters})"


EMPTY = Word(())


def reduce(letters: Iterable, alphabet: Optional["Alphabet"] = None) -> Word:
    """Freely reduce a letter sequence.

    With an alphabet, symbols may be given as strings (``'a'``, ``'A'``,
    ``'a^-1'``) or as integer letters; anything outside the alphabet raises
    :class:`InputError`.
    """
    stack: list = []
    for x in letters:
        if alphabet is not None:
            x = alphabet.letter(x)
        elif not isinstance(x, int) or x == 0:
            raise InputError(f"unknown symbol {x!r}")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return Word(tuple(stack))


def commutator(u: Word, v: Word) -> Word:
    return reduce(u.inverse().letters + v.inverse().letters + u.letters + v.letters)


def conjugate(u: Word, by: Word) -> Word:
    """``by^-1 u by``."""
    return reduce(by.inverse().letters + u.letters + by.letters)


def cyclic_reduce(w: Word) -> Word:
    ls = w.letters
    i, j = 0, len(ls)
    while j - i >= 2 and ls[i] == -ls[j - 1]:
        i += 1
        j -= 1
    return Word(ls[i:j])


def is_cyclically_reduced(w: Word) -> bool:
    return len(w) < 2 or w[0] != -w[-1]


class Alphabet:
    """Ordered generator names; inverses are formal."""

    _NAME = re.compile(r"[A-Za-z][0-9]*\Z")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if not names:
            raise InputError("alphabet must be nonempty")
        if len(set(names)) != len(names):
            raise InputError(f"duplicate generator names in {names}")
        for s in names:
            if not self._NAME.match(s):
                raise InputError(f"bad generator name {s!r}")
        self.names = names
        self._index = {s: i + 1 for i, s in enumerate(names)}
        for s in names:
            inv = s.upper()
            if inv != s and inv not in self._index:
                self._index.setdefault(inv, -self._index[s])

    @property
    def rank(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Alphabet({list(self.names)})"

    def letters(self) -> list:
        """All letters in shortlex rank order."""
        out = []
        for i in range(1, self.rank + 1):
            out += [i, -i]
        return out

    def letter(self, sym) -> int:
        if isinstance(sym, int) and not isinstance(sym, bool):
            if sym == 0 or abs(sym) > self.rank:
                raise InputError(f"letter {sym} outside alphabet of rank {self.rank}")
            return sym
        if isinstance(sym, str):
            s = sym.strip()
            if s.endswith("^-1") and s[:-3] in self.names:
                return -self._index[s[:-3]]
            if s in self._index:
                return self._index[s]
        raise InputError(f"unknown symbol {sym!r}")

    def symbol(self, x: int) -> str:
        name = self.names[abs(x) - 1]
        if x > 0:
            return name
        up = name.upper()
        return up if self._index.get(up) == x else name + "^-1"

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        parts = [self.symbol(x) for x in w]
        out = parts[0]
        for prev, cur in zip(parts, parts[1:]):
            # digits-suffixed names need a separator to stay unambiguous
            sep = "" if (not prev[-1].isdigit() and len(cur) == 1 and len(prev) == 1) else "*"
            out += sep + cur
        return out

    def parse_word(self, text: str) -> Word:
        return _WordParser(self, text).parse()

    def words_of_length(self, n: int) -> Iterator[Word]:
        """Reduced words of length exactly ``n`` in shortlex order."""
        letters = self.letters()

        def extend(prefix):
            if len(prefix) == n:
                yield Word(tuple(prefix))
                return
            for x in letters:
                if prefix and prefix[-1] == -x:
                    continue
                prefix.append(x)
                yield from extend(prefix)
                prefix.pop()

        yield from extend([])

    def words_up_to(self, n: int) -> Iterator[Word]:
        for k in range(n + 1):
            yield from self.words_of_length(k)


class _WordParser:
    def __init__(self, alphabet: Alphabet, text: str):
        self.a = alphabet
        self.s = text
        self.i = 0

    def error(self, msg):
        raise InputError(f"{msg} at position {self.i} in {self.s!r}")

    def skip(self):
        while self.i < len(self.s) and self.s[self.i] in " \t*.":
            self.i += 1

    def peek(self):
        self.skip()
        return self.s[self.i] if self.i < len(self.s) else ""

    def parse(self) -> Word:
        w = self.word()
        if self.peek():
            self.error("unexpected character")
        return reduce(w)

    def word(self) -> list:
        out: list = []
        while True:
            c = self.peek()
            if not c or c in ")],=":
                return out
            out += self.term()

    def term(self) -> list:
        base = self.atom()
        if self.peek() == "^":
            self.i += 1
            m = re.compile(r"\s*(-?\d+)").match(self.s, self.i)
            if not m:
                self.error("expected exponent")
            self.i = m.end()
            k = int(m.group(1))
            if k < 0:
                base = [-x for x in reversed(base)]
            base = base * abs(k)
        return base

    def atom(self) -> list:
        c = self.peek()
        if c == "(":
            self.i += 1
            inner = self.word()
            if self.peek() != ")":
                self.error("expected ')'")
            self.i += 1
            return inner
        if c == "[":
            self.i += 1
            u = self.word()
            if self.peek() != ",":
                self.error("expected ','")
            self.i += 1
            v = self.word()
            if self.peek() != "]":
                self.error("expected ']'")
            self.i += 1
            return [-x for x in reversed(u)] + [-x for x in reversed(v)] + u + v
        if c == "1":
            self.i += 1
            return []
        m = re.compile(r"[A-Za-z][0-9]*").match(self.s, self.i)
        if not m:
            self.error("expected generator")
        self.i = m.end()
        return [self.a.letter(m.group(0))]


@dataclass(frozen=True)
class SmallCancellationCertificate:
    """Proof that a presentation satisfies C'(lam).

    ``max_piece[k]`` is the longest piece found inside relator ``k``.
    """

    lam: Fraction
    max_piece: tuple
    relator_lengths: tuple
    piece_count: int

    def holds(self) -> bool:
        return all(p < self.lam * n for p, n in zip(self.max_piece, self.relator_lengths))


@dataclass(frozen=True)
class SmallCancellationFailure:
    lam: Fraction
    piece: Word
    relator_index: int
    relator_length: int

    def describe(self, alphabet: Alphabet) -> str:
        return (f"piece {alphabet.format_word(self.piece)!r} of length {len(self.piece)} "
                f">= {self.lam}*{self.relator_length} in relator {self.relator_index}")


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple = ()
    sc_certificate: Optional[SmallCancellationCertificate] = None

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(self.relators))
        for r in self.relators:
            if not r:
                raise InputError("relators must be nontrivial")
            if not is_cyclically_reduced(r):
                raise InputError(f"relator {r} is not cyclically reduced")
            if any(abs(x) > self.alphabet.rank for x in r):
                raise InputError(f"relator {r} uses letters outside the alphabet")
        cert = self.sc_certificate
        if cert is not None:
            if cert.relator_lengths != tuple(len(r) for r in self.relators) or not cert.holds():
                raise InputError("small-cancellation certificate does not match the relators")

    @classmethod
    def free(cls, names) -> "Presentation":
        if isinstance(names, int):
            names = "abcdefghijklmnopqrstuvwxyz"[:names] if names <= 26 else [f"x{i}" for i in range(names)]
        return cls(Alphabet(list(names)))

    @property
    def rank(self) -> int:
        return self.alphabet.rank

    @property
    def is_free(self) -> bool:
        return not self.relators

    def word(self, text: str) -> Word:
        return self.alphabet.parse_word(text)

    def with_certificate(self, lam=DEHN_LAMBDA) -> "Presentation":
        """Attach a C'(lam) certificate, or raise if the relators fail it."""
        res = check_small_cancellation(self, lam)
        if isinstance(res, SmallCancellationFailure):
            raise UnsupportedPresentation(f"not C'({lam}): {res.describe(self.alphabet)}")
        return Presentation(self.alphabet, self.relators, res)

    @property
    def supports_word_problem(self) -> bool:
        return self.is_free or (self.sc_certificate is not None and self.sc_certificate.lam <= DEHN_LAMBDA)


def parse_presentation(text: str) -> Presentation:
    gens = None
    rel_text = ""
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in ("gens", "rels"):
            raise InputError(f"bad presentation line {line!r}")
        if key == "gens":
            gens = [g.strip() for g in value.split(",") if g.strip()]
        else:
            rel_text += ("," if rel_text.strip() else "") + value
    if gens is None:
        raise InputError("presentation needs a 'gens:' line")
    alphabet = Alphabet(gens)
    relators = []
    for chunk in _split_top_level(rel_text):
        if not chunk.strip():
            continue
        lhs, eq, rhs = chunk.partition("=")
        w = alphabet.parse_word(lhs)
        if eq:
            w = w * alphabet.parse_word(rhs).inverse()
        w = cyclic_reduce(w)
        if w:
            relators.append(w)
    return Presentation(alphabet, tuple(relators))


def _split_top_level(text: str) -> list:
    parts, depth, cur = [], 0, ""
    for c in text:
        if c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
        if c == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += c
    parts.append(cur)
    return parts


def format_presentation(p: Presentation) -> str:
    rels = ", ".join(p.alphabet.format_word(r) for r in p.relators)
    return f"gens: {','.join(p.alphabet.names)}\nrels: {rels}\n"


# --- small cancellation -----------------------------------------------------

def _placements(relators):
    """Every (relator index, cyclic word) in the symmetrized set, one per placement."""
    out = []
    for k, r in enumerate(relators):
        for w in (r.letters, r.inverse().letters):
            for s in range(len(w)):
                out.append((k, w[s:] + w[:s]))
    return out


def check_small_cancellation(p: Presentation, lam=DEHN_LAMBDA):
    """Return a certificate if every piece is shorter than ``lam`` times its relator.

    A piece is a common prefix of two distinct placements in the symmetrized
    relator set (rotations of each relator and of its inverse).  Pieces are
    proper subwords, so their length is capped at the shorter relator minus one.
    On failure the longest violating piece is reported.
    """
    lam = Fraction(lam)
    places = _placements(p.relators)
    max_piece = [0] * len(p.relators)
    witness = [None] * len(p.relators)
    count = 0
    for (k1, w1), (k2, w2) in itertools.combinations(places, 2):
        cap = min(len(w1), len(w2)) - 1
        n = 0
        while n < cap and w1[n] == w2[n]:
            n += 1
        if n == 0:
            continue
        count += 1
        for k in (k1, k2):
            if n > max_piece[k]:
                max_piece[k] = n
                witness[k] = Word(w1[:n])
    lengths = tuple(len(r) for r in p.relators)
    worst = None
    for k, (m, n) in enumerate(zip(max_piece, lengths)):
        if m >= lam * n and (worst is None or m > max_piece[worst]):
            worst = k
    if worst is not None:
        return SmallCancellationFailure(lam, witness[worst], worst, lengths[worst])
    return SmallCancellationCertificate(lam, tuple(max_piece), lengths, count)


@functools.lru_cache(maxsize=64)
def _dehn_rules(relators: tuple):
    rules = {}
    for _, w in _placements(relators):
        n = len(w)
        for k in range(n // 2 + 1, n + 1):
            u = w[:k]
            repl = tuple(-x for x in reversed(w[k:]))
            if u not in rules or len(repl) < len(rules[u]):
                rules[u] = repl
    return rules, sorted({len(u) for u in rules}, reverse=True)


def dehn_reduce(w: Word, p: Presentation) -> Word:
    """Apply Dehn's algorithm until no subword exceeds half of a relator."""
    if not p.relators:
        return w
    rules, lengths = _dehn_rules(p.relators)
    letters = w.letters
    changed = True
    while changed and letters:
        changed = False
        for i in range(len(letters)):
            for k in lengths:
                u = letters[i:i + k]
                if len(u) == k and u in rules:
                    letters = reduce(letters[:i] + rules[u] + letters[i + k:]).letters
                    changed = True
                    break
            if changed:
                break
    return Word(letters)


def is_trivial(w: Word, p: Presentation) -> bool:
    if p.is_free:
        return not w
    if not p.supports_word_problem:
        raise UnsupportedPresentation(
            "word problem needs a free presentation or a C'(1/6) certificate")
    return not dehn_reduce(w, p)


def are_equal(u: Word, v: Word, p: Presentation) -> bool:
    return is_trivial(u * v.inverse(), p)


# --- balls ------------------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    radius: int
    elements: tuple = field(default=())
    # word-metric lengths when they differ from the letter count of the representative
    norms: tuple = field(default=())

    def __len__(self):
        return len(self.elements)

    def norm(self, i: int) -> int:
        return self.norms[i] if self.norms else len(self.elements[i])

    def with_norms(self):
        return [(self.norm(i), w) for i, w in enumerate(self.elements)]

    def up_to(self, m: int) -> list:
        return [w for k, w in self.with_norms() if k <= m]


def reduced_word_count(rank: int, m: int) -> int:
    """Number of nontrivial reduced words of length <= m: sum of 2k(2k-1)^(l-1)."""
    return sum(2 * rank * (2 * rank - 1) ** (l - 1) for l in range(1, m + 1))


def ball(p: Presentation, m: int, budget: int = DEFAULT_BALL_BUDGET) -> Ball:
    """Distinct nontrivial elements of word length <= m, shortlex-least representatives.

    Duplicates are found with pairwise ``is_trivial(u v^-1)`` tests; candidates
    are bucketed by exponent-sum vector first, since equal elements have equal
    abelianizations.
    """
    if not p.supports_word_problem:
        raise UnsupportedPresentation("ball enumeration needs a solvable word problem")
    n = reduced_word_count(p.rank, m)
    if n > budget:
        raise ResourceError(f"ball of radius {m} has {n} candidate words, over the budget {budget}")
    if p.is_free:
        return Ball(m, tuple(w for w in p.alphabet.words_up_to(m) if w))
    buckets: dict = {}
    kept = []
    for w in p.alphabet.words_up_to(m):
        if not w or is_trivial(w, p):
            continue
        key = w.exponent_sums(p.rank)
        reps = buckets.setdefault(key, [])
        if any(are_equal(w, r, p) for r in reps):
            continue
        reps.append(w)
        kept.append(w)
    return Ball(m, tuple(kept))


def ball_in_generators(p: Presentation, gens: Sequence[Word], m: int,
                       budget: int = DEFAULT_BALL_BUDGET) -> Ball:
    """Ball of radius ``m`` in the word metric of another generating list.

    Elements are returned as words over ``p``'s own alphabet (the image of the
    shortest word over ``gens``), deduplicated in the group.
    """
    aux = Presentation.free(len(gens))
    n = reduced_word_count(len(gens), m)
    if n > budget:
        raise ResourceError(f"ball of radius {m} has {n} candidate words, over the budget {budget}")
    seen, norms = [], []
    buckets: dict = {}
    for w in aux.alphabet.words_up_to(m):
        if not w:
            continue
        img = substitute(w, gens)
        if is_trivial(img, p):
            continue
        key = img.exponent_sums(p.rank)
        reps = buckets.setdefault(key, [])
        if any(are_equal(img, r, p) for r in reps):
            continue
        reps.append(img)
        seen.append(img)
        norms.append(len(w))
    return Ball(m, tuple(seen), tuple(norms))


def substitute(w: Word, images: Sequence[Word]) -> Word:
    out: list = []
    for x in w:
        img = images[abs(x) - 1]
        out += img.letters if x > 0 else img.inverse().letters
    return reduce(out)
