"""Independent brute-force oracles used only by the tests.

The factorization oracle enumerates every integer divisor of degree at
most half the degree of the current polynomial: each divisor corresponds
to a subset of the complex roots together with a leading coefficient
dividing the input's, so all subsets are enumerated, the resulting
candidate coefficients are bounded by the Mignotte bound, and exact trial
division is the final judge.  No code is shared with the package's
factorization path (roots come from numpy's companion-matrix solver).
"""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from dehnfill.intpoly import UniIntPoly


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _mignotte(f: UniIntPoly) -> float:
    norm2 = math.sqrt(sum(c * c for c in f.coeffs))
    return 2 ** (f.degree) * norm2 + 1


def _smallest_divisor(g: UniIntPoly) -> UniIntPoly | None:
    """Minimal-degree nonconstant divisor of degree <= deg(g)//2, or None."""
    roots = np.roots([float(c) for c in reversed(g.coeffs)])
    bound = _mignotte(g)
    lc_divs = _divisors(g.leading)
    n = len(roots)
    for size in range(1, g.degree // 2 + 1):
        found: list[UniIntPoly] = []
        for subset in combinations(range(n), size):
            monic = np.array([1.0 + 0j])
            for i in subset:
                monic = np.convolve(monic, np.array([1.0, -roots[i]]))
            if np.max(np.abs(monic.imag)) > 0.2:
                continue
            for u in lc_divs:
                approx = u * monic.real
                cand = [round(c) for c in approx[::-1]]
                if max(abs(a - c) for a, c in zip(approx[::-1], cand)) > 0.45:
                    continue
                if max(abs(c) for c in cand) > bound:
                    continue
                poly = UniIntPoly(cand)
                if poly.degree != size:
                    continue
                if g.trial_div(poly) is not None:
                    found.append(poly)
        if found:
            found.sort(key=lambda h: h.coeffs)
            return found[0]
    return None


def oracle_factor(f: UniIntPoly) -> tuple[int, int, int, list[tuple[tuple[int, ...], int]]]:
    """(unit, content, t_power, sorted irreducible factors with multiplicity)."""
    c, g = f.primitive()
    unit = -1 if c < 0 else 1
    content = abs(c)
    t_power, g = g.strip_zero_roots()
    factors: dict[tuple[int, ...], int] = {}
    while g.degree > 0:
        d = _smallest_divisor(g)
        if d is None:
            factors[g.coeffs] = factors.get(g.coeffs, 0) + 1
            break
        _, d = d.primitive()
        factors[d.coeffs] = factors.get(d.coeffs, 0) + 1
        g = g.divexact(d)
    out = sorted(factors.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return unit, content, t_power, out


def brute_hull_corners(points: list[tuple[int, int]]) -> set[tuple[int, int]]:
    """Extreme points by definition: p is a corner iff it is not in the hull
    of the others, tested with exact integer sign arithmetic over all triples."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return set(pts)
    corners = set()
    for p in pts:
        others = [q for q in pts if q != p]
        inside = False
        for a, b, c in combinations(others, 3):
            if _in_triangle(p, a, b, c):
                inside = True
                break
        if not inside:
            for a, b in combinations(others, 2):
                if _on_segment(p, a, b):
                    inside = True
                    break
        if not inside:
            corners.add(p)
    return corners


def _sign(o, a, b) -> int:
    v = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    return (v > 0) - (v < 0)


def _in_triangle(p, a, b, c) -> bool:
    s1, s2, s3 = _sign(a, b, p), _sign(b, c, p), _sign(c, a, p)
    if 0 in (s1, s2, s3):
        return (
            {s1, s2, s3} - {0} != set()
            and len({s for s in (s1, s2, s3) if s != 0}) == 1
            and _sign(a, b, c) != 0
        )
    return s1 == s2 == s3


def _on_segment(p, a, b) -> bool:
    if _sign(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(
        a[1], b[1]
    )


def brute_top_slope(row_data: dict[int, tuple[int, int]]):
    """Direct evaluation of the defining maximum over row minima."""
    from fractions import Fraction

    n = max(row_data)
    a_n = row_data[n][0]
    vals = [
        Fraction(a_n - lo, n - j) for j, (lo, _) in row_data.items() if j < n
    ]
    return max(vals) if vals else None
