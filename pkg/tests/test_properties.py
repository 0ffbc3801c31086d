"""Property tests over randomized structured inputs."""
from __future__ import annotations

from hypothesis import given, settings, strategies as st

from dehnfill import bivar, fill, measure, zfactor
from dehnfill.intpoly import UniIntPoly, poly_gcd

settings.register_profile("ci", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("ci")

coeff = st.integers(min_value=-50, max_value=50)


@st.composite
def polys(draw, max_degree=10, nonzero=True):
    cs = draw(st.lists(coeff, min_size=1, max_size=max_degree + 1))
    lead = draw(st.integers(min_value=1, max_value=50))
    f = UniIntPoly(cs + [lead])
    return f


@st.composite
def laurent_polys(draw, max_terms=7):
    n = draw(st.integers(min_value=1, max_value=max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(min_value=-5, max_value=5))
        j = draw(st.integers(min_value=-5, max_value=5))
        c = draw(st.integers(min_value=-9, max_value=9).filter(bool))
        terms[(i, j)] = c
    return bivar.BivarLaurentPoly(terms)


@given(polys(), polys())
def test_mul_degree_additive(f, g):
    assert (f * g).degree == f.degree + g.degree


@given(polys(), polys())
def test_gcd_divides_both(f, g):
    h = poly_gcd(f, g)
    assert f.trial_div(h) is not None
    assert g.trial_div(h) is not None


@given(polys(max_degree=8))
def test_factor_reassembles(f):
    fac = zfactor.factor(f)
    assert fac.reassemble() == f


@given(polys(max_degree=6), polys(max_degree=6))
def test_product_factors_contain_both_degrees(f, g):
    fac = zfactor.factor(f * g)
    total = sum(h.degree * m for h, m in fac.factors) + fac.t_power
    assert total == f.degree + g.degree


@given(laurent_polys())
def test_normalize_idempotent(f):
    g, _ = bivar.normalize(f)
    g2, ex2 = bivar.normalize(g)
    assert g2 == g
    assert (ex2.content, ex2.i_shift, ex2.j_shift, ex2.sign) == (1, 0, 0, 1)


@given(laurent_polys())
def test_parse_render_round_trip(f):
    g, _ = bivar.normalize(f)
    assert bivar.parse(bivar.render(g)) == g


@given(laurent_polys(), st.integers(min_value=-6, max_value=6), st.integers(min_value=-6, max_value=6))
def test_specialize_coefficient_multiset(f, p, q):
    from math import gcd

    if (p, q) == (0, 0) or gcd(abs(p), abs(q)) != 1:
        return
    fp = fill.specialize(f, (p, q))
    if fp.collision_flag:
        return
    got = sorted(fp.sign * c for c in fp.poly.coeffs if c)
    want = sorted(f.terms.values())
    assert got == want


@given(polys(max_degree=8))
def test_mahler_at_least_leading(f):
    est = measure.mahler(f, tol=1e-8)
    assert est.value + est.abs_error >= abs(f.leading) - 1e-9
    assert est.value - est.abs_error <= measure.poly_length(f) + 1e-9
