import json
import random
from pathlib import Path

import pytest

from dehnfill import bivar
from dehnfill.errors import NonUnimodularMatrixError, ParseError, ZeroPolynomialError
from oracle import brute_hull_corners, brute_top_slope

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "dehnfill" / "fixtures"


def test_parse_human_syntax():
    f = bivar.parse("l*m^2 - 1")
    assert f.terms == {(2, 1): 1, (0, 0): -1}
    with pytest.raises(ZeroPolynomialError):
        bivar.parse("0")
    with pytest.raises(ParseError):
        bivar.parse("m - m")  # duplicate exponent pair
    with pytest.raises(ParseError):
        bivar.parse("m + + l")
    with pytest.raises(ParseError):
        bivar.parse("")


def test_parse_fixture_figure_eight(figure_eight):
    assert sorted(figure_eight.terms) == [
        (0, 1), (2, 1), (4, 0), (4, 1), (4, 2), (6, 1), (8, 1),
    ]
    assert figure_eight.coeff(4, 1) == -2


def test_parse_fixture_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "x", "variables": ["m", "l"], "terms": []}))
    with pytest.raises(ZeroPolynomialError):
        bivar.parse(bad)
    dup = {"name": "x", "variables": ["m", "l"], "terms": [[0, 0, "1"], [0, 0, "2"]]}
    with pytest.raises(ParseError):
        bivar.parse(json.dumps(dup))


def test_render_round_trip(figure_eight):
    assert bivar.parse(bivar.render(figure_eight)) == figure_eight


def test_normalize_examples():
    g, ex = bivar.normalize(bivar.parse("2*m^2*l - 2*m*l"))
    assert bivar.render(g) == "m - 1"
    assert (ex.content, ex.i_shift, ex.j_shift, ex.sign) == (2, 1, 1, 1)

    g, ex = bivar.normalize(bivar.parse("m - 1"))
    assert (ex.content, ex.i_shift, ex.j_shift, ex.sign) == (1, 0, 0, 1)

    g, ex = bivar.normalize(bivar.BivarLaurentPoly({(-1, 2): -3}))
    assert g.terms == {(0, 0): 1}
    assert (ex.content, ex.i_shift, ex.j_shift, ex.sign) == (3, -1, 2, -1)

    with pytest.raises(ZeroPolynomialError):
        bivar.normalize(bivar.BivarLaurentPoly({}))


def test_normalize_idempotent_fuzz():
    rnd = random.Random(23)
    for _ in range(50):
        terms = {}
        for _ in range(rnd.randrange(1, 8)):
            terms[(rnd.randrange(-5, 6), rnd.randrange(-5, 6))] = rnd.randrange(-9, 10) or 1
        f = bivar.BivarLaurentPoly(terms)
        g, ex = bivar.normalize(f)
        g2, ex2 = bivar.normalize(g)
        assert g2 == g
        assert (ex2.content, ex2.i_shift, ex2.j_shift, ex2.sign) == (1, 0, 0, 1)
        # reconstruction
        rebuilt = {
            (i + ex.i_shift, j + ex.j_shift): ex.sign * ex.content * c
            for (i, j), c in g.terms.items()
        }
        assert rebuilt == f.terms


def test_newton_polygon_examples(figure_eight, figure_eight_polygon):
    np_ = figure_eight_polygon
    assert set(np_.corners) == {(4, 0), (0, 1), (8, 1), (4, 2)}
    assert np_.row_data == {0: (4, 4), 1: (0, 8), 2: (4, 4)}
    assert np_.top_slope == 4

    seg = bivar.newton_polygon(bivar.parse("m^2*l + 1"))
    assert seg.corners == ((0, 0), (2, 1))
    assert seg.top_slope == 2

    square = bivar.newton_polygon(bivar.parse("m*l + m + l + 1"))
    assert len(square.corners) == 4

    point = bivar.newton_polygon(bivar.parse("m^2*l"))
    assert point.is_degenerate


def test_newton_polygon_corners_match_brute_force():
    rnd = random.Random(31)
    for _ in range(40):
        terms = {}
        for _ in range(rnd.randrange(2, 12)):
            terms[(rnd.randrange(0, 9), rnd.randrange(0, 9))] = 1
        f = bivar.BivarLaurentPoly(terms)
        np_ = bivar.newton_polygon(f)
        assert set(np_.corners) == brute_hull_corners(f.support)
        assert np_.top_slope == brute_top_slope(np_.row_data)


def test_corners_invariant_under_interior_terms(figure_eight):
    rnd = random.Random(7)
    np0 = bivar.newton_polygon(figure_eight)
    corners = set(np0.corners)
    # interior lattice points of the figure-eight polygon
    interior = [(i, 1) for i in (1, 3, 5, 7)]
    for _ in range(20):
        terms = dict(figure_eight.terms)
        for pt in rnd.sample(interior, rnd.randrange(1, len(interior))):
            terms[pt] = terms.get(pt, 0) + rnd.randrange(1, 5)
        g = bivar.BivarLaurentPoly({k: v for k, v in terms.items() if v})
        assert set(bivar.newton_polygon(g).corners) == corners


def test_edge_polynomial_examples(figure_eight, figure_eight_polygon):
    f = bivar.parse("m*l + l + m + 1")
    np_ = bivar.newton_polygon(f)
    bottom = [e for e in np_.edges if e.start[1] == 0 and e.end[1] == 0][0]
    assert bivar.edge_polynomial(f, bottom).to_text() == "t + 1"

    for e in figure_eight_polygon.edges:
        ep = bivar.edge_polynomial(figure_eight, e)
        assert ep.to_text() == "t + 1"

    row = bivar.parse("m^2 + 2*m + 1")
    np_row = bivar.newton_polygon(row)
    assert bivar.edge_polynomial(row, np_row.edges[0]).to_text() == "t^2 + 2*t + 1"


def test_validate_apoly(figure_eight):
    rep = bivar.validate_apoly(figure_eight)
    assert rep.all_passed
    assert rep.value_at_one_one == 0

    rep = bivar.validate_apoly(bivar.parse("m + 2"))
    assert not rep.corners_unit
    assert rep.corner_failures == (((0, 0), 2),)

    rep = bivar.validate_apoly(bivar.parse("m*l - 1"))
    assert rep.reciprocal
    assert rep.vanishes_at_one_one


def test_monomial_substitute_examples():
    f = bivar.parse("l*m^2 - 1")
    assert bivar.monomial_substitute(f, [[1, 0], [0, 1]]) == f
    swapped = bivar.monomial_substitute(f, [[0, 1], [1, 0]])
    assert swapped.terms == {(1, 2): 1, (0, 0): -1}
    sheared = bivar.monomial_substitute(bivar.parse("l + m"), [[1, 1], [0, 1]])
    assert sheared.terms == {(1, 1): 1, (1, 0): 1}
    with pytest.raises(NonUnimodularMatrixError):
        bivar.monomial_substitute(f, [[2, 0], [0, 1]])


def test_substitute_inverse_round_trip(figure_eight):
    rnd = random.Random(13)
    for _ in range(100):
        # random unimodular matrix as a product of shears and swaps
        m = ((1, 0), (0, 1))
        for _ in range(rnd.randrange(1, 5)):
            k = rnd.randrange(-3, 4)
            shear = ((1, k), (0, 1)) if rnd.random() < 0.5 else ((1, 0), (k, 1))
            m = tuple(
                tuple(sum(m[i][t] * shear[t][j] for t in range(2)) for j in range(2))
                for i in range(2)
            )
            if rnd.random() < 0.3:
                m = (m[1], m[0])
        g = bivar.monomial_substitute(figure_eight, m)
        back = bivar.monomial_substitute(g, bivar.matrix_inverse(m))
        gb, _ = bivar.normalize(back)
        f0, _ = bivar.normalize(figure_eight)
        assert gb == f0
