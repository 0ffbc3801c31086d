"""Bivariate integer Laurent polynomials, Newton polygons, and validators.

A polynomial in (m, l) is a map from exponent pairs (i, j) to nonzero
integer coefficients.  Normalization divides out the coefficient gcd and
shifts the support so min i = min j = 0; the global sign is fixed so the
coefficient at the lexicographically largest exponent pair is positive.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from . import zfactor
from .errors import NonUnimodularMatrixError, ParseError, ZeroPolynomialError
from .intpoly import UniIntPoly

Point = tuple[int, int]


class BivarLaurentPoly:
    """Exact Laurent polynomial in two variables; immutable after construction."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Point, int]):
        clean = {}
        for (i, j), c in terms.items():
            if not isinstance(c, int):
                raise TypeError("integer coefficients required")
            if c:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", dict(clean))

    def __setattr__(self, *a):  # pragma: no cover - guard
        raise AttributeError("BivarLaurentPoly is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> list[Point]:
        return sorted(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, BivarLaurentPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "BivarLaurentPoly":
        return BivarLaurentPoly({e: -c for e, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"BivarLaurentPoly({render(self)!r})"

    def coeff(self, i: int, j: int) -> int:
        return self.terms.get((i, j), 0)

    def invert_vars(self) -> "BivarLaurentPoly":
        """Substitute m -> 1/m, l -> 1/l (negate all exponents)."""
        return BivarLaurentPoly({(-i, -j): c for (i, j), c in self.terms.items()})

    def evaluate(self, m, l):
        """Exact evaluation; negative exponents need invertible inputs."""
        total = 0
        for (i, j), c in self.terms.items():
            term = c
            term = term * (m**i if i >= 0 else Fraction(1, m**-i) if isinstance(m, int) else m**i)
            term = term * (l**j if j >= 0 else Fraction(1, l**-j) if isinstance(l, int) else l**j)
            total = total + term
        return total


# ---------------------------------------------------------------------------
# parsing and rendering
# ---------------------------------------------------------------------------

_BTERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coeff>\d+)\s*\*?\s*)?
        (?P<vars>(?:[ml]\s*(?:\^\s*[+-]?\d+)?\s*\*?\s*)*)""",
    re.VERBOSE,
)
_VAR_RE = re.compile(r"([ml])\s*(?:\^\s*([+-]?\d+))?")


def parse(source: str | Path) -> BivarLaurentPoly:
    """Parse a fixture file (JSON), a JSON string, or human `c*m^i*l^j +- ...` syntax."""
    if isinstance(source, Path):
        return _from_fixture(json.loads(source.read_text()))
    text = source.strip()
    if not text:
        raise ParseError("empty polynomial source")
    if text.startswith("{"):
        return _from_fixture(json.loads(text))
    p = Path(text)
    if text.endswith(".json") and p.is_file():
        return _from_fixture(json.loads(p.read_text()))
    return _parse_human(text)


def _from_fixture(doc: dict) -> BivarLaurentPoly:
    try:
        terms = doc["terms"]
    except (KeyError, TypeError):
        raise ParseError("fixture must be an object with a 'terms' array") from None
    variables = doc.get("variables", ["m", "l"])
    if list(variables) != ["m", "l"]:
        raise ParseError(f"unsupported variables {variables!r}")
    out: dict[Point, int] = {}
    for entry in terms:
        if len(entry) != 3:
            raise ParseError(f"term {entry!r} is not [i, j, coeff]")
        i, j, c = entry
        c = int(c)
        if (i, j) in out and out[(i, j)] != c:
            raise ParseError(f"duplicate exponent pair ({i}, {j}) with conflicting coefficients")
        if c == 0:
            raise ParseError(f"zero coefficient at ({i}, {j})")
        out[(int(i), int(j))] = c
    if not out:
        raise ZeroPolynomialError("fixture encodes the zero polynomial")
    return BivarLaurentPoly(out)


def _parse_human(text: str) -> BivarLaurentPoly:
    out: dict[Point, int] = {}
    pos = 0
    seen_any = False
    while pos < len(text):
        m = _BTERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"malformed term near {text[pos:pos+16]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coeff = m.group("coeff")
        vars_part = m.group("vars") or ""
        if coeff is None and not vars_part.strip():
            raise ParseError(f"malformed term near {text[pos:pos+16]!r}")
        c = sign * (int(coeff) if coeff else 1)
        i = j = 0
        for vm in _VAR_RE.finditer(vars_part):
            e = int(vm.group(2)) if vm.group(2) else 1
            if vm.group(1) == "m":
                i += e
            else:
                j += e
        key = (i, j)
        if key in out:
            raise ParseError(f"duplicate exponent pair {key} in {text!r}")
        out[key] = c
        seen_any = True
        pos = m.end()
    if not seen_any:
        raise ParseError(f"no terms in {text!r}")
    result = {k: v for k, v in out.items() if v}
    if not result:
        raise ZeroPolynomialError(f"{text!r} is the zero polynomial")
    return BivarLaurentPoly(result)


def render(f: BivarLaurentPoly) -> str:
    """Human syntax; parse(render(f)) == f."""
    if f.is_zero:
        return "0"
    parts = []
    for (i, j) in sorted(f.terms, key=lambda e: (-e[1], -e[0])):
        c = f.terms[(i, j)]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        factors = []
        if mag != 1 or (i == 0 and j == 0):
            factors.append(str(mag))
        if i:
            factors.append(f"m^{i}" if i != 1 else "m")
        if j:
            factors.append(f"l^{j}" if j != 1 else "l")
        parts.append((sign, "*".join(factors)))
    head_sign, head = parts[0]
    s = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def to_fixture(f: BivarLaurentPoly, name: str) -> dict:
    return {
        "name": name,
        "variables": ["m", "l"],
        "terms": [[i, j, str(c)] for (i, j), c in sorted(f.terms.items())],
    }


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Extracted:
    content: int
    i_shift: int
    j_shift: int
    sign: int


def normalize(f: BivarLaurentPoly) -> tuple[BivarLaurentPoly, Extracted]:
    """Divide out the coefficient gcd and monomial factor.

    Returns (g, ex) with g satisfying min i = min j = 0 over the support,
    coefficient gcd 1, positive coefficient at the lexicographically largest
    exponent pair, and f = ex.sign * ex.content * m^ex.i_shift * l^ex.j_shift * g.
    """
    if f.is_zero:
        raise ZeroPolynomialError("cannot normalize the zero polynomial")
    from math import gcd as igcd

    content = 0
    for c in f.terms.values():
        content = igcd(content, c)
    i_shift = min(i for i, _ in f.terms)
    j_shift = min(j for _, j in f.terms)
    top = max(f.terms)
    sign = 1 if f.terms[top] > 0 else -1
    g = BivarLaurentPoly(
        {(i - i_shift, j - j_shift): sign * (c // content) for (i, j), c in f.terms.items()}
    )
    return g, Extracted(content=content, i_shift=i_shift, j_shift=j_shift, sign=sign)


def is_normalized(f: BivarLaurentPoly) -> bool:
    if f.is_zero:
        return False
    g, ex = normalize(f)
    return ex == Extracted(1, 0, 0, 1)


# ---------------------------------------------------------------------------
# Newton polygon
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    start: Point
    end: Point
    slope: Fraction | None  # di/dj; None for edges inside a single row (dj = 0)
    lattice_points: tuple[Point, ...]

    def endpoints_sorted(self) -> tuple[Point, Point]:
        return (self.start, self.end) if self.start <= self.end else (self.end, self.start)


@dataclass(frozen=True)
class NewtonPolygon:
    corners: tuple[Point, ...]  # counterclockwise, starting from the lexicographic minimum
    edges: tuple[Edge, ...]
    row_data: dict[int, tuple[int, int]]  # j -> (min i, max i) over nonempty rows
    top_slope: Fraction | None  # max over rows j < n of (a_n - a_j)/(n - j)
    is_degenerate: bool  # single support point

    @property
    def top_row(self) -> int:
        return max(self.row_data)

    @property
    def bottom_row(self) -> int:
        return min(self.row_data)

    def left_chain(self) -> list[tuple[Fraction, Point, Point]]:
        """Edges of the min-i hull chain from the top row down, as
        (slope, upper corner, lower corner); slopes strictly decrease."""
        pts = {}
        for j, (a_j, _) in self.row_data.items():
            pts[j] = (a_j, j)
        top = max(pts)
        bottom = min(pts)
        chain = []
        cur = top
        while cur > bottom:
            best = None
            # ascending j keeps the farthest point on slope ties, so chain
            # entries are true corners and slopes strictly decrease
            for j in range(bottom, cur):
                if j not in pts:
                    continue
                s = Fraction(pts[cur][0] - pts[j][0], cur - j)
                if best is None or s > best[0]:
                    best = (s, j)
            s, j = best
            chain.append((s, pts[cur], pts[j]))
            cur = j
        return chain


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points: Sequence[Point]) -> list[Point]:
    """Monotone chain; counterclockwise corners, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def newton_polygon(f: BivarLaurentPoly) -> NewtonPolygon:
    """Convex hull of the support with rows, edge data, and the top slope."""
    if f.is_zero:
        raise ZeroPolynomialError("zero polynomial has no Newton polygon")
    support = f.support
    corners = _hull(support)
    degenerate = len(corners) == 1

    row_data: dict[int, tuple[int, int]] = {}
    for (i, j) in support:
        lo, hi = row_data.get(j, (i, i))
        row_data[j] = (min(lo, i), max(hi, i))

    n = max(row_data)
    a_n = row_data[n][0]
    slopes = [
        Fraction(a_n - row_data[j][0], n - j) for j in sorted(row_data) if j < n
    ]
    top_slope = max(slopes) if slopes else None

    edges = []
    if len(corners) >= 2:
        ring = corners if len(corners) > 2 else [corners[0], corners[1]]
        count = len(ring) if len(ring) > 2 else 1
        for k in range(count):
            a = ring[k]
            b = ring[(k + 1) % len(ring)]
            edges.append(_make_edge(a, b))
    return NewtonPolygon(
        corners=tuple(corners),
        edges=tuple(edges),
        row_data=row_data,
        top_slope=top_slope,
        is_degenerate=degenerate,
    )


def _make_edge(a: Point, b: Point) -> Edge:
    from math import gcd as igcd

    di, dj = b[0] - a[0], b[1] - a[1]
    g = igcd(abs(di), abs(dj))
    step = (di // g, dj // g)
    lattice = tuple((a[0] + k * step[0], a[1] + k * step[1]) for k in range(g + 1))
    slope = Fraction(di, dj) if dj else None
    return Edge(start=a, end=b, slope=slope, lattice_points=lattice)


def edge_polynomial(f: BivarLaurentPoly, edge: Edge) -> UniIntPoly:
    """Coefficients of f read along the edge's lattice points, from the
    lexicographically smaller endpoint."""
    pts = list(edge.lattice_points)
    if pts[0] > pts[-1]:
        pts.reverse()
    coeffs = [f.coeff(i, j) for (i, j) in pts]
    poly = UniIntPoly(coeffs)
    if poly.is_zero or poly.degree != len(pts) - 1 or coeffs[0] == 0:
        raise ValueError("edge does not belong to the polygon of this polynomial")
    return poly


# ---------------------------------------------------------------------------
# validators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    reciprocal: bool
    corners_unit: bool
    edges_cyclotomic: bool
    vanishes_at_one_one: bool
    corner_failures: tuple[tuple[Point, int], ...]
    edge_results: tuple[tuple[Point, Point, bool], ...]
    value_at_one_one: int

    @property
    def all_passed(self) -> bool:
        return (
            self.reciprocal
            and self.corners_unit
            and self.edges_cyclotomic
            and self.vanishes_at_one_one
        )

    def to_dict(self) -> dict:
        return {
            "reciprocal": self.reciprocal,
            "corners_unit": self.corners_unit,
            "edges_cyclotomic": self.edges_cyclotomic,
            "vanishes_at_one_one": self.vanishes_at_one_one,
            "all_passed": self.all_passed,
            "corner_failures": [
                {"corner": list(pt), "coeff": c} for pt, c in self.corner_failures
            ],
            "edges": [
                {"start": list(a), "end": list(b), "cyclotomic_product": ok}
                for a, b, ok in self.edge_results
            ],
            "value_at_one_one": self.value_at_one_one,
        }


def validate_apoly(f: BivarLaurentPoly) -> ValidationReport:
    """Check the standard structural properties of an A-polynomial:
    inversion symmetry up to sign and monomial, unit corner coefficients,
    cyclotomic-product edge polynomials, and vanishing at (m, l) = (1, 1).

    Failures are reported, not raised; arbitrary input may legitimately fail.
    """
    g, _ = normalize(f)
    inv, _ = normalize(g.invert_vars())
    reciprocal = inv == g

    np_ = newton_polygon(g)
    corner_failures = tuple(
        ((i, j), g.coeff(i, j)) for (i, j) in np_.corners if abs(g.coeff(i, j)) != 1
    )
    corners_unit = not corner_failures

    edge_results = []
    edges_cyclotomic = True
    for edge in np_.edges:
        ep = edge_polynomial(g, edge)
        ok = zfactor.is_cyclotomic_product(ep)
        a, b = edge.endpoints_sorted()
        edge_results.append((a, b, ok))
        edges_cyclotomic = edges_cyclotomic and ok

    value = g.evaluate(1, 1)
    return ValidationReport(
        reciprocal=reciprocal,
        corners_unit=corners_unit,
        edges_cyclotomic=edges_cyclotomic,
        vanishes_at_one_one=(value == 0),
        corner_failures=corner_failures,
        edge_results=tuple(edge_results),
        value_at_one_one=value,
    )


# ---------------------------------------------------------------------------
# unimodular substitution
# ---------------------------------------------------------------------------

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


def monomial_substitute(f: BivarLaurentPoly, matrix: Sequence[Sequence[int]]) -> BivarLaurentPoly:
    """Apply a determinant +-1 lattice map to the exponents.

    Each support point (i, j), read as a column vector, maps to matrix @ (i, j).
    The result is returned unnormalized; callers usually normalize after.
    """
    (a, b), (c, d) = matrix
    det = a * d - b * c
    if det not in (1, -1):
        raise NonUnimodularMatrixError(f"matrix {matrix!r} has determinant {det}")
    out: dict[Point, int] = {}
    for (i, j), coef in f.terms.items():
        key = (a * i + b * j, c * i + d * j)
        out[key] = out.get(key, 0) + coef
    return BivarLaurentPoly(out)


def matrix_inverse(matrix: Sequence[Sequence[int]]) -> Matrix2:
    (a, b), (c, d) = matrix
    det = a * d - b * c
    if det not in (1, -1):
        raise NonUnimodularMatrixError(f"matrix {matrix!r} has determinant {det}")
    return ((d * det, -b * det), (-c * det, a * det))
