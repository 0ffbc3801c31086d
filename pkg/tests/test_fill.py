import random
from fractions import Fraction
from math import gcd

import pytest

from dehnfill import bivar, fill
from dehnfill.errors import LeadingTieError


def test_specialize_examples():
    g = bivar.parse("l*m^2 - 1")
    fp = fill.specialize(g, (3, 2))
    assert fp.poly.to_text() == "t - 1"
    assert (fp.t_shift, fp.sign, fp.collision_flag) == (-1, -1, False)

    fp = fill.specialize(bivar.parse("l + m + 1"), (2, 1))
    assert fp.poly.to_text() == "t^3 + t + 1"

    fp = fill.specialize(g, (1, 0))
    assert fp.poly.to_text() == "t - 1"
    assert fp.t_shift == 0


def test_specialize_laurent_identity():
    rnd = random.Random(41)
    for _ in range(60):
        terms = {}
        for _ in range(rnd.randrange(1, 8)):
            terms[(rnd.randrange(-4, 5), rnd.randrange(-4, 5))] = rnd.randrange(-5, 6) or 1
        f = bivar.BivarLaurentPoly(terms)
        p, q = rnd.randrange(-9, 10), rnd.randrange(-9, 10)
        if (p, q) == (0, 0) or gcd(abs(p), abs(q)) != 1:
            continue
        p, q = fill.canonical_pair(p, q)
        fp = fill.specialize(f, (p, q))
        if fp.degenerate:
            continue
        # sign * t^shift * poly == sum of c * t^(-q i + p j), compared via dict
        raw = {}
        for (i, j), c in f.terms.items():
            e = -q * i + p * j
            raw[e] = raw.get(e, 0) + c
        raw = {e: c for e, c in raw.items() if c}
        built = {
            k + fp.t_shift: fp.sign * c
            for k, c in enumerate(fp.poly.coeffs)
            if c
        }
        assert built == raw


def test_collision_flag_iff_collision_slope():
    f = bivar.parse("l*m^2 - 1")
    assert fill.collision_slopes(f) == {Fraction(2)}
    for q in range(1, 7):
        for p in range(-12, 13):
            if gcd(abs(p), q) != 1:
                continue
            fp = fill.specialize(f, (p, q))
            assert fp.collision_flag == (Fraction(p, q) in {Fraction(2)})


def test_degenerate_specialization():
    f = bivar.parse("m^2 - 1")
    fp = fill.specialize(f, (1, 0))
    assert fp.degenerate and fp.collision_flag


def test_predict_leading_examples(figure_eight_polygon):
    corner, exponent = fill.predict_leading(figure_eight_polygon, (9, 2))
    assert (corner, exponent) == ((4, 2), 10)

    square = bivar.newton_polygon(bivar.parse("m*l + m + l + 1"))
    corner, exponent = fill.predict_leading(square, (1, 1))
    assert (corner, exponent) == ((0, 1), 1)

    with pytest.raises(LeadingTieError):
        fill.predict_leading(figure_eight_polygon, (4, 1))


def test_predict_matches_specialize_degree(figure_eight, figure_eight_polygon):
    cs = fill.collision_slopes(figure_eight)
    for q in range(1, 5):
        for p in range(1, 25):
            if gcd(p, q) != 1 or Fraction(p, q) in cs:
                continue
            fp = fill.specialize(figure_eight, (p, q))
            vals = [-q * i + p * j for (i, j) in figure_eight_polygon.corners]
            assert fp.poly.degree == max(vals) - min(vals)
            corner, exponent = fill.predict_leading(figure_eight_polygon, (p, q))
            assert exponent == fp.poly.degree + fp.t_shift
            assert fp.leading_coeff == figure_eight.coeff(*corner)


def test_collision_slopes_examples(figure_eight):
    assert fill.collision_slopes(bivar.parse("m^3*l^2")) == set()
    assert Fraction(4) in fill.collision_slopes(figure_eight)


def test_sector_transform_edge_matrix(figure_eight, figure_eight_polygon):
    trs = fill.sector_transform(figure_eight, figure_eight_polygon)
    assert trs[0].matrix == ((1, 0), (0, 1))
    top = trs[1]
    assert top.edge_slope == 4
    # slope 4/1: (a, b) = (4, 1), minimal (r, s) = (0, 1)
    assert top.matrix == ((0, 1), (-1, 4))
    assert top.map_pair(9, 2) == (2, -1)
    for t in trs:
        (a, b), (c, d) = t.matrix
        assert a * d - b * c in (1, -1)


def test_sector_transform_identity_for_dominant(figure_eight, figure_eight_polygon):
    trs = fill.sector_transform(figure_eight, figure_eight_polygon)
    slope = fill.classify_slope(figure_eight_polygon, 9, 2)
    assert slope.sector.kind == "above_top"
    assert fill.transform_for_sector(trs, slope) is trs[0]


def test_specialize_transform_compatibility(figure_eight, figure_eight_polygon):
    rnd = random.Random(3)
    trs = fill.sector_transform(figure_eight, figure_eight_polygon)
    checked = 0
    for _ in range(60):
        p, q = rnd.randrange(-30, 31), rnd.randrange(-30, 31)
        if (p, q) == (0, 0) or gcd(abs(p), abs(q)) != 1:
            continue
        direct = fill.specialize(figure_eight, (p, q))
        if direct.degenerate:
            continue
        for t in trs[1:]:
            pp, qq = t.map_pair(*fill.canonical_pair(p, q))
            if (pp, qq) == (0, 0):
                continue
            other = fill.specialize(t.transformed, (pp, qq))
            assert direct.poly == other.poly or direct.poly == other.poly.reverse()
            checked += 1
    assert checked > 50


def test_classify_slope(figure_eight_polygon):
    s = fill.classify_slope(figure_eight_polygon, 9, 2)
    assert s.sector.kind == "above_top"
    s = fill.classify_slope(figure_eight_polygon, 7, 2)
    assert s.sector.kind == "between" and s.sector.edge_index == 1
    s = fill.classify_slope(figure_eight_polygon, -9, 2)
    assert s.sector.kind == "below_all"
    s = fill.classify_slope(figure_eight_polygon, 1, 0)
    assert s.sector.kind == "axis"


def test_canonical_pair():
    assert fill.canonical_pair(-3, 2) == (3, -2)
    assert fill.canonical_pair(0, -1) == (0, 1)
    assert fill.canonical_pair(5, -7) == (5, -7)


def test_filling_slope_validation():
    with pytest.raises(ValueError):
        fill.FillingSlope(2, 4)
    with pytest.raises(ValueError):
        fill.FillingSlope(0, 0)
