import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfgrowth.certify import (CommonMultiple, ConjugateProduct, build_tj, certificate_transfer_check,
                              common_multiple, find_conjugator, lcm_length_audit, length_constant,
                              verify_witness)
from rfgrowth.errors import ConstantViolation, InputError, SearchExhausted
from rfgrowth.finite import TargetGroup
from rfgrowth.finite.elements import element_order, parse_permutation
from rfgrowth.finite.groups import realize
from rfgrowth.finite.homs import Homomorphism, evaluate
from rfgrowth.search import build_catalog, enumerate_homs
from rfgrowth.words import EMPTY, Presentation, Word, commutator, conjugate, reduce

F2 = Presentation.free(2)
w = F2.word


def test_find_conjugator_examples():
    assert find_conjugator(w("a"), w("b"), 2, F2) == EMPTY
    assert find_conjugator(w("a"), w("a"), 2, F2) == w("b")
    assert find_conjugator(w("ab"), w("ab"), 2, F2) == w("a")


def test_find_conjugator_errors():
    with pytest.raises(InputError):
        find_conjugator(EMPTY, w("a"), 2, F2)
    with pytest.raises(SearchExhausted):
        # powers of a commute with a for every conjugator of length 0
        find_conjugator(w("a"), w("aa"), 0, F2)
    Z = Presentation.free(1)
    with pytest.raises(SearchExhausted):
        find_conjugator(Z.word("a"), Z.word("a"), 3, Z)


def _brute_conjugator(g, e, kmax):
    """Independent oracle: sort every reduced word by (length, letter rank) and test commutation."""
    order = {1: 0, -1: 1, 2: 2, -2: 3}
    cands = [EMPTY]
    frontier = [EMPTY]
    for _ in range(kmax):
        frontier = [u * Word((x,)) for u in frontier for x in (1, -1, 2, -2)
                    if not u or u[-1] != -x]
        cands += frontier
    cands.sort(key=lambda u: (len(u), [order[x] for x in u]))
    for mu in cands:
        c = reduce(mu.inverse().letters + g.letters + mu.letters)
        if (c * e) != (e * c):
            return mu
    return None


reduced_words = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=5).map(reduce).filter(bool)


@settings(max_examples=60, deadline=None)
@given(reduced_words, reduced_words)
def test_find_conjugator_matches_brute_force(g, e):
    expected = _brute_conjugator(g, e, 2)
    if expected is None:
        with pytest.raises(SearchExhausted):
            find_conjugator(g, e, 2, F2)
    else:
        assert find_conjugator(g, e, 2, F2) == expected


def test_common_multiple_single():
    cm = common_multiple([w("a")], 2, F2)
    assert cm.word == w("a")
    assert cm.witnesses[0].factors == ((EMPTY, 1),)
    assert verify_witness(cm)


def test_common_multiple_pair():
    cm = common_multiple([w("a"), w("b")], 2, F2)
    assert cm.word == w("ABab")
    assert cm.witnesses[0].factors == ((EMPTY, -1), (w("b"), 1))
    assert cm.witnesses[1].factors[0] == (w("a"), -1)
    assert verify_witness(cm)


def test_common_multiple_depth_two():
    T = [w("a"), w("b"), w("ab"), w("ba")]
    cm = common_multiple(T, 2, F2)
    assert cm.word and cm.padded_size == 4
    assert len(cm.witnesses) == 4 and verify_witness(cm)
    audit = lcm_length_audit(cm, 2)
    assert (audit.d, audit.t) == (2, 4)
    assert audit.length <= length_constant(2) * 2 * 16


def test_common_multiple_pads_with_last():
    cm = common_multiple([w("a"), w("b"), w("ab")], 2, F2)
    assert cm.padded_size == 4 and len(cm.witnesses) == 3
    assert verify_witness(cm)


def test_common_multiple_errors():
    with pytest.raises(InputError):
        common_multiple([], 2, F2)
    with pytest.raises(InputError):
        common_multiple([w("a"), EMPTY], 2, F2)


def test_tampering_breaks_verification():
    cm = common_multiple([w("a"), w("b"), w("ab"), w("ba")], 2, F2)
    wit = cm.witnesses[2]
    c, s = wit.factors[0]
    bumped = Word(c.letters + (1,)) if not c or c[-1] != -1 else Word(c.letters[:-1])
    bad = ConjugateProduct(wit.base, ((bumped, s),) + wit.factors[1:])
    tampered = CommonMultiple(cm.word, cm.t_set, cm.witnesses[:2] + (bad,) + cm.witnesses[3:])
    v = verify_witness(tampered)
    assert not v and v.first_failure == 2
    flipped = ConjugateProduct(wit.base, ((c, -s),) + wit.factors[1:])
    assert not verify_witness(CommonMultiple(cm.word, cm.t_set, cm.witnesses[:2] + (flipped,) + cm.witnesses[3:]))


def test_empty_factor_list():
    empty = ConjugateProduct(w("a"), ())
    assert not verify_witness(CommonMultiple(w("a"), (w("a"),), (empty,)))
    assert verify_witness(CommonMultiple(EMPTY, (w("a"),), (empty,)))


def test_transfer_alt5_example():
    A5 = TargetGroup.alt(5)
    cm = common_multiple([w("a"), w("b")], 2, F2)
    h = Homomorphism(F2, A5, (parse_permutation("(123)", 5), parse_permutation("(345)", 5)))
    assert certificate_transfer_check(cm, h).status == "pass"
    trivial_a = Homomorphism(F2, A5, (A5.identity(), parse_permutation("(345)", 5)))
    assert certificate_transfer_check(cm, trivial_a).status == "vacuous"


@pytest.mark.parametrize("target", [TargetGroup.sym(3), TargetGroup.alt(5)])
def test_transfer_exhaustive(target):
    cms = [common_multiple(T, 2, F2) for T in ([w("a"), w("b")], [w("a"), w("b"), w("ab"), w("ba")])]
    count = 0
    for h in enumerate_homs(F2, target):
        count += 1
        for cm in cms:
            assert certificate_transfer_check(cm, h).status in ("pass", "vacuous")
    assert count == target.order ** 2


def _table_eval(G, word, xs, ys):
    """Evaluate a word on every image pair at once using the Cayley table."""
    T, inv = G.table(), G.inverse()
    imgs = {1: xs, -1: inv[xs], 2: ys, -2: inv[ys]}
    cur = np.zeros(len(xs), dtype=np.int64)
    for x in word:
        cur = T[cur, imgs[x]]
    return cur


def test_transfer_over_small_catalog():
    rng = random.Random(7)
    Ts = [[w("a"), w("b")], [w("ab"), w("ba")], [w("a"), w("b"), w("ab")]]
    for _ in range(5):
        Ts.append([reduce([rng.choice([1, -1, 2, -2]) for _ in range(3)]) or w("a") for _ in range(4)])
    cms = [common_multiple(T, 2, F2) for T in Ts]
    for g in build_catalog("ALL", 60):
        G = realize(g)
        n = G.order
        xs, ys = np.repeat(np.arange(n), n), np.tile(np.arange(n), n)
        for cm in cms:
            hit = _table_eval(G, cm.word, xs, ys) != 0
            for t in cm.t_set:
                assert not np.any(hit & (_table_eval(G, t, xs, ys) == 0)), (g, t)


def _random_T(rng, d, t):
    out = []
    while len(out) < t:
        u = reduce([rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, d))])
        if u:
            out.append(u)
    return out


def test_length_audit_randomized():
    rng = random.Random(2024)
    for _ in range(100):
        T = _random_T(rng, 3, rng.randint(1, 8))
        cm = common_multiple(T, 2, F2)
        assert verify_witness(cm)
        audit = lcm_length_audit(cm, 2)
        assert audit.length <= audit.c0 * audit.d * audit.t ** 2


def test_length_audit_examples():
    cm = common_multiple([w("a"), w("b")], 2, F2)
    a = lcm_length_audit(cm, 1)
    assert (a.d, a.t, a.length, a.bound) == (1, 2, 4, 64)
    a = lcm_length_audit(common_multiple([w("a")], 1, F2), 1)
    assert a.length == 1 <= a.bound


def test_length_audit_flags_violation():
    cm = common_multiple([w("a"), w("b")], 2, F2)
    long = CommonMultiple(w("ab") ** 40, cm.t_set, cm.witnesses)
    with pytest.raises(ConstantViolation):
        lcm_length_audit(long, 0)


def test_build_tj_examples():
    tj = build_tj(w("a"), w("b"), 2, 2, F2)
    assert tj.mu0 == EMPTY and tj.elements == (commutator(w("a"), w("b")), w("bb"))
    tj = build_tj(w("a"), w("ab"), 3, 2, F2)
    assert tj.elements == (w("ABab"), w("abab"), w("ababab"))
    for j in range(2, 7):
        assert len(build_tj(w("a"), w("ab"), j, 2, F2).elements) == j
    with pytest.raises(InputError):
        build_tj(w("a"), w("b"), 1, 2, F2)


def test_tj_detection_forces_large_order():
    # any hom that detects the common multiple of T_j sends gamma0 to an element of order > j
    for j in (2, 3):
        tj = build_tj(w("a"), w("ab"), j, 2, F2)
        cm = common_multiple(tj.elements, 2, F2)
        for g in (TargetGroup.sym(3), TargetGroup.sym(4)):
            for h in enumerate_homs(F2, g):
                if not evaluate(h, cm.word).is_identity():
                    assert element_order(evaluate(h, w("ab"))) >= j + 1


def test_conjugate_product_value():
    cp = ConjugateProduct(w("a"), ((w("b"), 1), (EMPTY, -1)))
    assert cp.value() == reduce(conjugate(w("a"), w("b")).letters + (-1,))
