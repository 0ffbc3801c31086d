import pytest

from dehnfill.errors import ParseError, ZeroPolynomialError
from dehnfill.intpoly import UniIntPoly, poly_gcd

P = UniIntPoly.parse


def test_construction_trims_and_reports_degree():
    f = UniIntPoly([1, 2, 0, 0])
    assert f.coeffs == (1, 2)
    assert f.degree == 1
    assert UniIntPoly([]).degree == -1
    assert UniIntPoly([0, 0]).is_zero


def test_parse_and_render_round_trip():
    f = P("t^10 + t^9 - t^7 - t^6 - t^5 - t^4 - t^3 + t + 1")
    assert f.degree == 10
    assert P(f.to_text()) == f
    assert P("x^2 - 2x + 1") == UniIntPoly([1, -2, 1])
    assert P("5") == UniIntPoly([5])
    with pytest.raises(ParseError):
        P("")
    with pytest.raises(ParseError):
        P("x + y")


def test_arithmetic():
    f, g = P("x^2+1"), P("x-1")
    assert f + g == P("x^2+x")
    assert f - g == P("x^2-x+2")
    assert f * g == P("x^3-x^2+x-1")
    assert g**3 == P("x^3-3x^2+3x-1")
    assert (-g).coeffs == (1, -1)
    assert f(2) == 5
    assert f(1j) == 0


def test_division():
    f = P("x^3-x^2+x-1")
    assert f.trial_div(P("x-1")) == P("x^2+1")
    assert f.trial_div(P("x+1")) is None
    assert f.divexact(P("x^2+1")) == P("x-1")
    with pytest.raises(ValueError):
        f.divexact(P("x+2"))
    with pytest.raises(ZeroPolynomialError):
        f.trial_div(UniIntPoly.zero())


def test_primitive_and_content():
    c, g = P("6x^2-4x+2").primitive()
    assert (c, g) == (2, P("3x^2-2x+1"))
    c, g = (-P("2x")).primitive()
    assert c == -2 and g == P("x")
    assert UniIntPoly.zero().content() == 0


def test_structure_helpers():
    f = P("x^3 - 2x^2")
    k, g = f.strip_zero_roots()
    assert k == 2 and g == P("x-2")
    assert f.reverse() == UniIntPoly([1, -2])
    assert P("x^2+x").compose_neg() == P("x^2-x")
    assert P("x^2-x-1").length() == 3
    assert P("x^2-x-1").max_norm() == 1
    assert f.shift_up(1) == P("x^4-2x^3")


def test_gcd_modular():
    a = P("x^2-1") * P("x^3+2x+5")
    b = P("x^2-1") * P("x^4-3")
    assert poly_gcd(a, b) == P("x^2-1")
    assert poly_gcd(a, UniIntPoly.zero()) == a
    assert poly_gcd(P("6"), P("4")) == P("2")
    assert poly_gcd(P("x^2"), P("x^3")) == P("x^2")
    # content combines with the primitive gcd
    assert poly_gcd(2 * P("x-1"), 4 * P("x-1") * P("x+3")) == 2 * P("x-1")


def test_gcd_random_products():
    import random

    rnd = random.Random(11)
    for _ in range(40):
        common = UniIntPoly([rnd.randrange(-5, 6) for _ in range(rnd.randrange(1, 4))] + [1])
        a = common * UniIntPoly([rnd.randrange(-5, 6) for _ in range(3)] + [1])
        b = common * UniIntPoly([rnd.randrange(-5, 6) for _ in range(3)] + [1])
        g = poly_gcd(a, b)
        assert g.trial_div(common) is not None or common.trial_div(g) is not None
        assert a.trial_div(g) is not None
        assert b.trial_div(g) is not None
