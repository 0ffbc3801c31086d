"""Construction of the one-variable filling polynomial and slope sectors.

Specializing a two-variable polynomial along a coprime pair (p, q) sends
m to t^(-q) and l to t^p, so the exponent pair (i, j) lands on -q*i + p*j.
The sector machinery maps any coprime pair into the dominant-slope regime
of a unimodularly transformed polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .bivar import BivarLaurentPoly, NewtonPolygon, monomial_substitute, normalize
from .errors import LeadingTieError, ZeroPolynomialError
from .intpoly import UniIntPoly

Point = tuple[int, int]


@dataclass(frozen=True)
class Sector:
    """Where p/q sits relative to the left-chain slopes of the polygon.

    kind is one of 'above_top', 'between', 'below_all', 'axis'; for
    'between', edge_index is the 1-based index into the left chain of the
    edge whose slope bounds the sector from above (boundary values attach
    to the sector below the slope).
    """

    kind: str
    edge_index: int | None = None
    upper: Fraction | None = None
    lower: Fraction | None = None

    def describe(self) -> str:
        if self.kind == "axis":
            return "axis"
        if self.kind == "above_top":
            return f"ratio > {self.upper}"
        if self.kind == "below_all":
            return f"ratio <= {self.lower}"
        return f"{self.lower} < ratio <= {self.upper} (edge {self.edge_index})"


@dataclass(frozen=True)
class FillingSlope:
    p: int
    q: int
    sector: Sector | None = None

    def __post_init__(self):
        if (self.p, self.q) == (0, 0):
            raise ValueError("(0, 0) is not a filling slope")
        if gcd(abs(self.p), abs(self.q)) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not coprime")

    @property
    def ratio(self) -> Fraction | None:
        return Fraction(self.p, self.q) if self.q else None


def canonical_pair(p: int, q: int) -> tuple[int, int]:
    """Identify (p, q) with (-p, -q): keep p > 0, or p == 0 with q == 1."""
    if p < 0 or (p == 0 and q < 0):
        return -p, -q
    return p, q


def classify_slope(np_: NewtonPolygon, p: int, q: int) -> FillingSlope:
    """Attach the left-chain sector classification to a coprime pair."""
    p, q = canonical_pair(p, q)
    if q == 0:
        return FillingSlope(p, q, Sector(kind="axis"))
    x = Fraction(p, q)
    chain = np_.left_chain()
    if not chain:
        return FillingSlope(p, q, Sector(kind="below_all", lower=None))
    slopes = [s for s, _, _ in chain]
    if x > slopes[0]:
        return FillingSlope(p, q, Sector(kind="above_top", upper=slopes[0]))
    for k in range(len(slopes) - 1):
        if slopes[k + 1] < x <= slopes[k]:
            return FillingSlope(
                p,
                q,
                Sector(
                    kind="between",
                    edge_index=k + 1,
                    upper=slopes[k],
                    lower=slopes[k + 1],
                ),
            )
    return FillingSlope(p, q, Sector(kind="below_all", lower=slopes[-1]))


@dataclass(frozen=True)
class FillingPoly:
    """Normalized specialization: sign * t^t_shift * poly(t) equals the raw
    Laurent sum over the support, with poly having a nonzero constant term
    and positive leading coefficient."""

    poly: UniIntPoly
    t_shift: int
    sign: int
    collision_flag: bool
    degenerate: bool
    p: int
    q: int
    source_terms: int

    @property
    def leading_coeff(self) -> int:
        """Leading coefficient of the raw specialization."""
        return self.sign * self.poly.leading

    @property
    def term_count(self) -> int:
        return len([c for c in self.poly.coeffs if c])


def specialize(f: BivarLaurentPoly, slope: FillingSlope | tuple[int, int]) -> FillingPoly:
    """Exact substitution m -> t^(-q), l -> t^p with collision accounting."""
    if f.is_zero:
        raise ZeroPolynomialError("cannot specialize the zero polynomial")
    if isinstance(slope, tuple):
        slope = FillingSlope(*canonical_pair(*slope))
    p, q = slope.p, slope.q
    exps: dict[int, int] = {}
    for (i, j), c in f.terms.items():
        e = -q * i + p * j
        exps[e] = exps.get(e, 0) + c
    collision = len(exps) < len(f.terms)
    exps = {e: c for e, c in exps.items() if c}
    if not exps:
        return FillingPoly(
            poly=UniIntPoly.zero(),
            t_shift=0,
            sign=1,
            collision_flag=True,
            degenerate=True,
            p=p,
            q=q,
            source_terms=len(f.terms),
        )
    lo = min(exps)
    coeffs = [0] * (max(exps) - lo + 1)
    for e, c in exps.items():
        coeffs[e - lo] = c
    sign = 1 if coeffs[-1] > 0 else -1
    poly = UniIntPoly([sign * c for c in coeffs])
    return FillingPoly(
        poly=poly,
        t_shift=lo,
        sign=sign,
        collision_flag=collision,
        degenerate=False,
        p=p,
        q=q,
        source_terms=len(f.terms),
    )


def predict_leading(np_: NewtonPolygon, slope: FillingSlope | tuple[int, int]) -> tuple[Point, int]:
    """The support corner maximizing -q*i + p*j and the maximum value.

    Raises LeadingTieError when two corners tie, which happens exactly on
    the collision slopes.
    """
    if isinstance(slope, tuple):
        slope = FillingSlope(*canonical_pair(*slope))
    p, q = slope.p, slope.q
    best: tuple[int, Point] | None = None
    tie = False
    for (i, j) in np_.corners:
        val = -q * i + p * j
        if best is None or val > best[0]:
            best = (val, (i, j))
            tie = False
        elif val == best[0]:
            tie = True
    if tie:
        raise LeadingTieError(
            f"two corners reach exponent {best[0]} at (p, q) = ({p}, {q})"
        )
    return best[1], best[0]


def collision_slopes(f: BivarLaurentPoly) -> set[Fraction]:
    """All finite ratios p/q where two support exponents can collide.

    Pairs sharing a row (same j) collide only for q = 0 and are not
    representable as a finite ratio; axis fillings are handled separately.
    """
    pts = f.support
    out: set[Fraction] = set()
    for a in range(len(pts)):
        i1, j1 = pts[a]
        for b in range(a + 1, len(pts)):
            i2, j2 = pts[b]
            if j1 != j2:
                out.add(Fraction(i2 - i1, j2 - j1))
    return out


def _solve_edge_matrix(slope: Fraction) -> tuple[tuple[int, int], tuple[int, int], Sequence[Sequence[int]]]:
    """For an edge slope a/b in lowest terms (b > 0), solve b*s + a*r = 1
    with minimal |s| and return ((a, b), (r, s), exponent-action matrix)."""
    a, b = slope.numerator, slope.denominator
    if a == 0:
        r, s = 0, 1  # b is 1 in lowest terms
    else:
        # extended gcd: find r0, s0 with a*r0 + b*s0 = 1
        r0, s0 = _xgcd(a, b)
        # shift s by multiples of a to minimize |s| (ties prefer positive s)
        k = round(Fraction(s0, a)) if a else 0
        s = s0 - k * a
        if 2 * abs(s) == abs(a) and s < 0:
            s = s + abs(a)
        r = (1 - b * s) // a
    assert a * r + b * s == 1
    matrix = ((r, s), (-b, a))
    return (a, b), (r, s), matrix


def _xgcd(a: int, b: int) -> tuple[int, int]:
    """(x, y) with a*x + b*y = gcd(a, b) for the euclidean gcd sign."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        qq, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - qq * x1
        y0, y1 = y1, y0 - qq * y1
    if a < 0:
        x0, y0 = -x0, -y0
    return x0, y0


@dataclass(frozen=True)
class SectorTransform:
    matrix: tuple[tuple[int, int], tuple[int, int]]
    transformed: BivarLaurentPoly
    description: str
    edge_slope: Fraction | None  # None for the identity entry

    def map_pair(self, p: int, q: int) -> tuple[int, int]:
        (a, b), (c, d) = self.matrix
        return a * p + b * q, c * p + d * q


def sector_transform(f: BivarLaurentPoly, np_: NewtonPolygon) -> list[SectorTransform]:
    """One unimodular basis change per left-chain edge slope, plus the identity.

    For an edge of slope a/b (lowest terms) the exponent action is
    ((r, s), (-b, a)) with b*s + a*r = 1, and the same matrix carries
    (p, q) to (p', q') = (r*p + s*q, -b*p + a*q).  Iterating over the
    chain covers every slope sector.
    """
    out = [
        SectorTransform(
            matrix=((1, 0), (0, 1)),
            transformed=f,
            description="identity (ratio above the top slope)",
            edge_slope=None,
        )
    ]
    for slope, upper, lower in np_.left_chain():
        (a, b), (r, s), matrix = _solve_edge_matrix(slope)
        g = monomial_substitute(f, matrix)
        g, _ = normalize(g)
        out.append(
            SectorTransform(
                matrix=matrix,
                transformed=g,
                description=(
                    f"edge slope {slope} between corners {upper} and {lower}: "
                    f"(a, b) = ({a}, {b}), (r, s) = ({r}, {s})"
                ),
                edge_slope=slope,
            )
        )
    return out


def transform_for_sector(transforms: list[SectorTransform], slope: FillingSlope) -> SectorTransform:
    """Pick the transform matching a classified slope: identity above the top
    slope, the bounding edge's transform inside a sector, and the last edge's
    transform below all slopes."""
    sec = slope.sector
    if sec is None or sec.kind in ("above_top", "axis"):
        return transforms[0]
    if sec.kind == "between":
        return transforms[sec.edge_index]
    return transforms[-1]
