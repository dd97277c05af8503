import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfgrowth.certify import length_constant
from rfgrowth.errors import InequalityViolation, InputError, ResourceError
from rfgrowth.finite import TargetGroup
from rfgrowth.finite.elements import element_order
from rfgrowth.finite.homs import evaluate
from rfgrowth.search import (GrowthRow, GrowthTable, build_catalog, compare_classes, detect, dominates,
                             domination_constant, enumerate_homs, growth, ratio_experiment,
                             verify_minimality)
from rfgrowth.words import EMPTY, Presentation, commutator, parse_presentation

Z = Presentation.free(1)
F2 = Presentation.free(2)


def least_non_divisor(k):
    d = 2
    while k % d == 0:
        d += 1
    return d


def names(cat):
    return [str(g) for g in cat]


def test_gl_catalog_example():
    cat = build_catalog("GL", 10)
    orders = [g.order for g in cat]
    assert orders == sorted(orders) and min(orders) == 2
    assert [(g.n, g.q) for g in cat][:4] == [(1, 3), (1, 4), (1, 5), (2, 2)]
    assert {(g.n, g.q) for g in cat} == {(1, 3), (1, 4), (1, 5), (2, 2), (1, 7), (1, 8), (1, 9), (1, 11)}


def test_simple_catalog_example():
    cat = build_catalog("SIMPLE", 60)
    cyclic = [g.order for g in cat if g.kind == "Cyclic"]
    assert cyclic == [p for p in range(2, 60) if all(p % d for d in range(2, p))]
    top = [g for g in cat if g.order == 60]
    assert TargetGroup.alt(5) in top
    assert all(g.is_simple for g in cat)
    assert TargetGroup.psl(2, 2) not in cat.groups and TargetGroup.psl(2, 3) not in cat.groups


def test_all_catalog_contents():
    cat = build_catalog("ALL", 60)
    gs = set(cat.groups)
    for g in (TargetGroup.cyclic(7), TargetGroup.dihedral(5), TargetGroup.sym(4), TargetGroup.alt(5),
              TargetGroup.gl(2, 3), TargetGroup.psl(2, 5)):
        assert g in gs
    assert [g.order for g in cat] == sorted(g.order for g in cat)


@pytest.mark.parametrize("cls", ["ALL", "GL", "SIMPLE"])
def test_catalog_limit_prefix(cls):
    small, big = build_catalog(cls, 40), build_catalog(cls, 200)
    assert big.groups[:len(small)] == small.groups
    assert all(g.order > 40 for g in big.groups[len(small):])


def test_catalog_errors():
    with pytest.raises(InputError):
        build_catalog("ABELIAN", 10)
    with pytest.raises(InputError):
        build_catalog("GL", 1)


def test_enumerate_homs_counts():
    assert len(list(enumerate_homs(Z, TargetGroup.sym(3)))) == 6
    assert len(list(enumerate_homs(F2, TargetGroup.cyclic(2)))) == 4
    P = parse_presentation("gens: a\nrels: a^2")
    homs = list(enumerate_homs(P, TargetGroup.cyclic(4)))
    assert sorted(str(h.images[0]) for h in homs) == sorted(
        str(g) for g in TargetGroup.cyclic(4).realize().elements if element_order(g) <= 2)


def test_enumerate_homs_budget():
    with pytest.raises(ResourceError):
        list(enumerate_homs(F2, TargetGroup.sym(5), budget=100))


def test_detect_z_a6():
    a6 = Z.word("a^6")
    res = detect(a6, Z, build_catalog("GL", 200))
    assert res.order == 4 and res.group == TargetGroup.gl(1, 5) and res.tag == "exact"
    assert verify_minimality(res, Z, build_catalog("GL", 200))
    res = detect(a6, Z, build_catalog("SIMPLE", 200))
    assert res.order == 5 and res.group == TargetGroup.cyclic(5)
    assert not evaluate(res.witness, a6).is_identity()


def test_detect_commutator_simple():
    cat = build_catalog("SIMPLE", 100)
    res = detect(commutator(F2.word("a"), F2.word("b")), F2, cat)
    assert res.order == 60 and res.group.order == 60
    assert verify_minimality(res, F2, cat)


def test_detect_trivial_rejected():
    with pytest.raises(InputError):
        detect(EMPTY, Z, build_catalog("ALL", 10))


def test_detect_exhausted():
    res = detect(Z.word("a^12"), Z, build_catalog("ALL", 4))
    assert res.exhausted and res.order == 5 and res.tag == "lower-bound" and res.witness is None


def test_detect_prune_agrees_with_full_scan():
    cat = build_catalog("ALL", 24)
    for text in ("ab", "abAB", "aab", "abab", "aaBB"):
        u = F2.word(text)
        assert detect(u, F2, cat, prune=True).order == detect(u, F2, cat, prune=False).order


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 60))
def test_detect_z_oracle(k):
    res = detect(Z.word("a") ** k, Z, build_catalog("ALL", 200))
    assert res.order == least_non_divisor(k) and res.tag == "exact"


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 30), st.integers(2, 40), st.integers(40, 120))
def test_detect_limit_monotone(k, lo, hi):
    w = Z.word("a") ** k
    a = detect(w, Z, build_catalog("GL", lo))
    b = detect(w, Z, build_catalog("GL", hi))
    assert b.order <= a.order
    if not a.exhausted:
        assert a.order == b.order


def test_growth_z_oracle():
    table = growth(Z, 12, build_catalog("ALL", 200))
    expected = [max(least_non_divisor(k) for k in range(1, m + 1)) for m in range(1, 13)]
    assert table.values() == expected
    assert table.rows[5].value == 4 and table.rows[11].value == 5
    assert table.rows[11].argmax == Z.word("a^12")
    assert all(r.tag == "exact" for r in table.rows)
    for r in table.rows:
        assert len(r.argmax) <= r.m


def test_growth_monotone_f2():
    table = growth(F2, 3, build_catalog("GL", 200))
    v = table.values()
    assert v == sorted(v) and len(v) == 3


def test_growth_exhausted_marks_lower_bound():
    table = growth(Z, 12, build_catalog("ALL", 4))
    last = table.rows[-1]
    assert last.exhausted and last.tag == "lower-bound" and last.value == 5


def test_growth_deterministic_across_jobs():
    cat = build_catalog("SIMPLE", 60)
    assert growth(F2, 2, cat, jobs=1) == growth(F2, 2, cat, jobs=3)
    w = commutator(F2.word("a"), F2.word("b"))
    assert detect(w, F2, cat, jobs=1) == detect(w, F2, cat, jobs=4)


def test_compare_classes_z():
    cats = [build_catalog(c, 200) for c in ("ALL", "GL", "SIMPLE")]
    rep = compare_classes(Z, 12, cats)
    assert rep.ok
    assert (6, "GL", 4, 4, True) in rep.checks and (6, "SIMPLE", 4, 5, True) in rep.checks


def test_compare_classes_rejects_mixed_limits():
    with pytest.raises(InputError):
        compare_classes(Z, 3, [build_catalog("ALL", 10), build_catalog("GL", 20)])


def test_compare_contract_violation():
    # a table where ALL exceeds GL must raise
    import rfgrowth.search as search

    real = search.growth

    def fake(p, M, cat, **kw):
        t = real(p, M, cat, **kw)
        if cat.cls == "ALL":
            rows = tuple(GrowthRow(r.m, r.value + 100, r.argmax, r.group, r.exhausted, r.tag) for r in t.rows)
            return GrowthTable(t.cls, t.order_limit, rows, t.alphabet)
        return t

    search.growth = fake
    try:
        with pytest.raises(InequalityViolation):
            compare_classes(Z, 3, [build_catalog("ALL", 20), build_catalog("GL", 20)])
        assert not compare_classes(Z, 3, [build_catalog("ALL", 20), build_catalog("GL", 20)], strict=False).ok
    finally:
        search.growth = real


def test_dominates():
    assert dominates([1, 2, 3], [1, 2, 3], 1)
    assert not dominates([5, 5], [1, 1], 1)
    assert domination_constant([2, 4, 6, 8], [1, 2, 3, 4]) == 2
    assert domination_constant([100], [1], cmax=3) is None


def test_generating_set_robustness():
    cat = build_catalog("ALL", 24)
    ab = growth(F2, 4, cat).values()
    a_ab = growth(F2, 4, cat, generators=[F2.word("a"), F2.word("ab")]).values()
    c1, c2 = domination_constant(ab, a_ab), domination_constant(a_ab, ab)
    assert c1 is not None and c2 is not None
    assert dominates(ab, a_ab, c1) and dominates(a_ab, ab, c2)


def test_ratio_experiment_small():
    cat = build_catalog("GL", 200)
    curve = ratio_experiment(F2.word("a"), F2.word("ab"), 2, 2, F2, cat)
    (row,) = curve.rows
    assert row.j == 2 and row.t_size == 2 and row.witnesses_ok and row.eta_length > 0
    if not curve.truncated:
        assert row.order_ok and row.gamma0_image_order >= 3
        assert math.isfinite(row.ratio)
    assert curve.c_hat == row.fitted
    assert curve.length_constant == length_constant(2)


def test_ratio_experiment_requires_restricted_class():
    with pytest.raises(InputError):
        ratio_experiment(F2.word("a"), F2.word("ab"), 2, 2, F2, build_catalog("ALL", 20))
