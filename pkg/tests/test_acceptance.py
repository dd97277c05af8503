"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

The lines are also collected and repeated in the pytest terminal summary.
"""

import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from rfgrowth.atlas import FamilyId, Interval, bounded_rank_threshold, ratio, ratio_in, verify_family_inequalities
from rfgrowth.certify import (certificate_transfer_check, common_multiple, lcm_length_audit, verify_witness)
from rfgrowth.finite import GF, Homomorphism, Matrix, TargetGroup, evaluate, gl_order, m1_scan, parse_matrix
from rfgrowth.finite.elements import Residue, element_order
from rfgrowth.induction import coset_structure, induce, induced_size_check, schreier_generators, size_grid
from rfgrowth.search import (build_catalog, compare_classes, detect, enumerate_homs, growth,
                             ratio_experiment, verify_minimality)
from rfgrowth.words import EMPTY, Presentation, Word, commutator, conjugate, is_trivial, parse_presentation, reduce

Z = Presentation.free(1)
F2 = Presentation.free(2)


@contextmanager
def criterion(log, number, title, seconds):
    start = time.perf_counter()
    notes = []
    try:
        yield notes
        elapsed = time.perf_counter() - start
        assert elapsed < seconds, f"took {elapsed:.2f}s, budget {seconds}s"
    except BaseException as e:
        line = f"criterion {number} ({title}): FAIL {type(e).__name__}: {e}"
        print(line)
        log.append(line)
        raise
    elapsed = time.perf_counter() - start
    extra = f" [{'; '.join(notes)}]" if notes else ""
    line = f"criterion {number} ({title}): PASS in {elapsed:.2f}s{extra}"
    print(line)
    log.append(line)


def least_non_divisor(k):
    d = 2
    while k % d == 0:
        d += 1
    return d


def test_criterion_1_detection(acceptance_log):
    with criterion(acceptance_log, 1, "detection exactness", 60) as notes:
        a6 = Z.word("a^6")
        gl = build_catalog("GL", 200)
        res = detect(a6, Z, gl)
        assert (res.order, res.group) == (4, TargetGroup.gl(1, 5)) and res.tag == "exact"
        assert verify_minimality(res, Z, gl)
        simple = build_catalog("SIMPLE", 200)
        res = detect(a6, Z, simple)
        assert (res.order, res.group) == (5, TargetGroup.cyclic(5))
        assert verify_minimality(res, Z, simple)
        simple100 = build_catalog("SIMPLE", 100)
        res = detect(commutator(F2.word("a"), F2.word("b")), F2, simple100)
        assert res.order == 60 and not evaluate(res.witness, res.word).is_identity()
        assert verify_minimality(res, F2, simple100)
        notes.append(f"[a,b] detected by {res.group}")


def test_criterion_2_growth_oracle(acceptance_log):
    with criterion(acceptance_log, 2, "growth oracle", 60) as notes:
        cats = [build_catalog(c, 200) for c in ("ALL", "GL", "SIMPLE")]
        rep = compare_classes(Z, 12, cats)
        values = rep.tables["ALL"].values()
        oracle = [max(least_non_divisor(k) for k in range(1, m + 1)) for m in range(1, 13)]
        assert values == oracle
        assert values[5] == 4 and values[11] == 5
        assert values == sorted(values)
        assert rep.ok and all(c[-1] for c in rep.checks)
        notes.append(f"D_ALL = {values}")


def test_criterion_3_atlas_audit(acceptance_log):
    with criterion(acceptance_log, 3, "atlas audit", 60) as notes:
        scanned = 0
        for n in range(2, 6):
            for q in (3, 4, 5, 7, 8, 9):
                order = gl_order(n, q)
                assert q ** (n * n - 1) < order < q ** (n * n), (n, q)
                if order <= 10**6:
                    assert m1_scan(TargetGroup.gl(n, q), budget=10**6) == q**n - 1, (n, q)
                    scanned += 1
                band = Interval(Fraction(n - 1), Fraction(n * n, n - 1), True, False)
                assert ratio_in(order, q**n - 1, band), (n, q)
                rep = ratio(FamilyId("GLn", n, q))
                assert rep.exact and all(rep.passes.values())
        low = verify_family_inequalities(FamilyId("GLn", 2, 2))
        reported = [c.name for c in low.violations]
        notes.append(f"{scanned} m1 scans; GL(2,2) violations reported: {reported}")


def test_criterion_4_common_multiple(acceptance_log):
    with criterion(acceptance_log, 4, "common-multiple certification", 60) as notes:
        a, b = F2.word("a"), F2.word("b")
        cm = common_multiple([a, b], 2, F2)
        assert cm.word == commutator(a, b) and verify_witness(cm)
        for target in (TargetGroup.sym(3), TargetGroup.alt(5)):
            homs = 0
            for h in enumerate_homs(F2, target):
                homs += 1
                assert certificate_transfer_check(cm, h).status != "fail"
            assert homs == target.order ** 2
        rng = random.Random(20240601)
        worst = 0.0
        for _ in range(100):
            T = []
            t = rng.randint(1, 8)
            while len(T) < t:
                u = reduce([rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 3))])
                if u:
                    T.append(u)
            c = common_multiple(T, 2, F2)
            assert verify_witness(c)
            audit = lcm_length_audit(c, 2)
            assert audit.length <= 8 * (2 + 1) * audit.d * audit.t ** 2
            worst = max(worst, audit.fitted)
        notes.append(f"max fitted |cm|/(d t^2) = {worst:.3f}")


def test_criterion_5_tj_experiment(acceptance_log):
    with criterion(acceptance_log, 5, "T_j ratio experiment", 600) as notes:
        curve = ratio_experiment(F2.word("a"), F2.word("ab"), 4, 2, F2, build_catalog("GL", 2000))
        assert not curve.truncated and [r.j for r in curve.rows] == [2, 3, 4]
        c_hat = curve.c_hat
        for r in curve.rows:
            assert r.witnesses_ok
            assert r.eta_length <= c_hat * 2 * r.j**3
            assert r.order_ok and r.gamma0_image_order >= r.j + 1
            assert r.ratio is not None and math.isfinite(r.ratio)
        notes.append(f"C_hat = {c_hat:.3f}; ratios = {[round(r.ratio, 3) for r in curve.rows]}")


def test_criterion_6_induction(acceptance_log):
    with criterion(acceptance_log, 6, "induction suite", 60) as notes:
        w = F2.word
        cs = coset_structure(F2, Homomorphism(F2, TargetGroup.cyclic(2), (Residue(1, 2), Residue(0, 2))))
        gens = schreier_generators(cs)
        assert gens == [w("b"), w("aa"), w("abA")] and len(gens) == 1 + cs.index * (2 - 1)
        one, two = parse_matrix("[[1]]", 3), parse_matrix("[[2]]", 3)
        rep = induce(cs, [one, two, one])
        rng = random.Random(99)
        for _ in range(100):
            u = reduce([rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 8))])
            v = reduce([rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 8))])
            assert rep.image(u * v) == rep.image(u) * rep.image(v)
        # nontriviality on the subgroup: a^2 has base value 2, so its image is 2I
        assert rep.image(w("aa")) == Matrix.scalar(GF(3), 2, 2)
        for g in gens:
            if not rep.base_value(g).is_identity():
                assert not rep.image(g).is_identity()
        assert gl_order(4, 3) == 24261120 <= 48**8 and induced_size_check(2, 2, 3).ok
        grid = size_grid()
        assert all(c.ok for c in grid)
        notes.append(f"size grid {len(grid)} cases")


def test_criterion_7_small_cancellation(acceptance_log):
    with criterion(acceptance_log, 7, "small cancellation and Dehn", 60) as notes:
        S = parse_presentation("gens: a,b,c,d\nrels: [a,b][c,d]").with_certificate()
        cert = S.sc_certificate
        assert cert.holds() and max(cert.max_piece) == 1
        rel = S.relators[0]
        rng = random.Random(7)
        letters = [1, -1, 2, -2, 3, -3, 4, -4]
        trivial_words = []
        for _ in range(50):
            acc = EMPTY
            for _ in range(rng.randint(1, 3)):
                u = reduce([rng.choice(letters) for _ in range(rng.randint(0, 4))])
                r = rel if rng.random() < 0.5 else rel.inverse()
                acc = acc * conjugate(r, u)
            assert is_trivial(acc, S)
            trivial_words.append(acc)
        for x in (1, 2, 3, 4):
            assert not is_trivial(Word((x,)), S)
        sampled = 0
        for _ in range(2000):
            u = reduce([rng.choice(letters) for _ in range(rng.randint(1, 10))])
            if is_trivial(u, S):
                trivial_words.append(u)
            sampled += 1
        for k in range(len(rel)):
            trivial_words.append(reduce(rel.letters[k:] + rel.letters[:k]))
        for u in trivial_words:
            if is_trivial(u, S):
                assert u.exponent_sums(4) == (0, 0, 0, 0)
        notes.append(f"{len(trivial_words)} trivial words checked")


def test_criterion_8_threshold(acceptance_log):
    with criterion(acceptance_log, 8, "threshold coherence", 1) as notes:
        Cs = [1, 2, 5, 10, 50]
        Rs = [bounded_rank_threshold(c) for c in Cs]
        assert Rs == sorted(Rs)
        assert bounded_rank_threshold(10, kind="GL") == 11
        notes.append(f"R = {Rs}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
