import math
import random

import pytest

from dehnfill import measure
from dehnfill.errors import ZeroPolynomialError
from dehnfill.intpoly import UniIntPoly
from dehnfill.zfactor import cyclotomic_poly, factor_split

P = UniIntPoly.parse
LEHMER = P("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")
GOLDEN = (1 + math.sqrt(5)) / 2


def test_find_roots_examples():
    rs = measure.find_roots(P("x^2-1"))
    assert sorted(round(z.real, 12) for z, _ in rs.roots) == [-1.0, 1.0]
    assert rs.max_radius() <= 1e-12

    rs = measure.find_roots(P("x^2-x-1"))
    vals = sorted(z.real for z, _ in rs.roots)
    assert abs(vals[0] + 1 / GOLDEN) < 1e-10
    assert abs(vals[1] - GOLDEN) < 1e-10

    rs = measure.find_roots(LEHMER, tol=1e-12)
    assert rs.degree_accounted == 10
    big = [z for z, _ in rs.roots if abs(z.imag) < 1e-9 and z.real > 1]
    assert len(big) == 1
    assert abs(big[0].real - 1.176280818259917) < 1e-9


def test_find_roots_accounts_zero_roots():
    rs = measure.find_roots(P("x^3 - x^2"))
    assert rs.zero_multiplicity == 2
    assert rs.degree_accounted == 1


def test_root_clusters_sum_to_degree():
    rnd = random.Random(9)
    for _ in range(20):
        f = UniIntPoly([rnd.randrange(-9, 10) for _ in range(rnd.randrange(2, 12))] + [1])
        k, g = f.strip_zero_roots()
        from dehnfill.zfactor import squarefree_part

        sf = squarefree_part(g)
        rs = measure.find_roots(sf)
        assert sum(c for _, _, c in rs.clusters()) == sf.degree


def test_mahler_examples():
    assert measure.mahler(P("x-2")).value == pytest.approx(2.0, abs=1e-12)
    est = measure.mahler(P("x^2-x-1"))
    assert est.value == pytest.approx(GOLDEN, abs=1e-10)
    for n in (5, 8, 12, 30):
        est = measure.mahler(cyclotomic_poly(n))
        assert est.value == 1.0 and est.abs_error == 0.0
    est = measure.mahler(LEHMER, tol=1e-9)
    assert est.value == pytest.approx(1.176280818259917, abs=1e-9)
    with pytest.raises(ZeroPolynomialError):
        measure.mahler(UniIntPoly.zero())


def test_mahler_graeffe_examples():
    est = measure.mahler_graeffe(P("x-2"), 10)
    assert abs(est.value - 2.0) <= est.abs_error
    est = measure.mahler_graeffe(P("x^2-x-1"), 20)
    assert abs(est.value - 1.618034) <= 1e-5
    est = measure.mahler_graeffe(P("x+1"), 10)
    assert abs(est.value - 1.0) <= est.abs_error
    with pytest.raises(ValueError):
        measure.mahler_graeffe(P("x+1"), 65)


def test_mahler_methods_agree():
    est = measure.mahler(P("x^3-x-7"), method="both")
    assert est.method == "both"


def test_precision_floor_env(monkeypatch):
    monkeypatch.setenv("DEHNFILL_BITS", "200")
    rs = measure.find_roots(P("x^3 - x - 7"))
    assert rs.max_radius() < 1e-40


def test_mahler_of_constants():
    assert measure.mahler(UniIntPoly.constant(-3)).value == 3.0
    assert measure.mahler_graeffe(UniIntPoly.constant(5), 8).value == 5.0


def test_length_examples():
    assert measure.poly_length(P("x^2-x-1")) == 3
    # nine nonzero unit coefficients (x^8 and x^2 are absent)
    assert measure.poly_length(LEHMER) == 9
    assert measure.poly_length(UniIntPoly.zero()) == 0


def test_mahler_le_length():
    rnd = random.Random(12)
    for _ in range(40):
        f = UniIntPoly([rnd.randrange(-9, 10) for _ in range(rnd.randrange(1, 9))] + [rnd.randrange(1, 9)])
        est = measure.mahler(f, tol=1e-8)
        assert est.value - est.abs_error <= measure.poly_length(f) + 1e-9


def test_mahler_multiplicative():
    rnd = random.Random(4)
    for _ in range(25):
        f = UniIntPoly([rnd.randrange(-6, 7) for _ in range(rnd.randrange(1, 6))] + [rnd.randrange(1, 6)])
        g = UniIntPoly([rnd.randrange(-6, 7) for _ in range(rnd.randrange(1, 6))] + [rnd.randrange(1, 6)])
        ef, eg, efg = measure.mahler(f), measure.mahler(g), measure.mahler(f * g)
        tol = efg.abs_error + ef.value * eg.abs_error + eg.value * ef.abs_error
        assert abs(efg.value - ef.value * eg.value) <= tol + 1e-8 * efg.value


def test_kronecker_direction():
    # cyclotomic products have measure exactly 1
    from dehnfill.zfactor import is_cyclotomic_product

    for f in (P("t^6-1"), P("t^2+2t+1"), cyclotomic_poly(7) * cyclotomic_poly(9)):
        assert is_cyclotomic_product(f)
        assert measure.mahler(f).value == pytest.approx(1.0, abs=1e-10)


def test_cross_method_agreement_random():
    rnd = random.Random(77)
    for _ in range(200):
        f = UniIntPoly([rnd.randrange(-9, 10) for _ in range(rnd.randrange(2, 30))] + [rnd.randrange(1, 10)])
        a = measure.mahler(f, tol=1e-9)
        b = measure.mahler_graeffe(f, 12)
        assert abs(a.value - b.value) <= a.abs_error + b.abs_error


def test_lehmer_check():
    rep = measure.lehmer_check(factor_split(P("x^2-x-1")))
    assert rep.passed and rep.checked == 1
    rep = measure.lehmer_check(factor_split(P("x^4-1")))
    assert rep.passed and rep.checked == 0
    rep = measure.lehmer_check(factor_split(LEHMER))
    assert rep.passed and rep.checked == 1
    # an artificially high threshold must flag the golden ratio polynomial
    rep = measure.lehmer_check(factor_split(P("x^2-x-1")), c=2.0)
    assert not rep.passed
