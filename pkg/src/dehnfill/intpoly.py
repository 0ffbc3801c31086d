"""Dense univariate polynomials with exact integer coefficients.

Coefficients are arbitrary-precision ints stored in ascending order, so
``coeffs[k]`` is the coefficient of ``x^k``.  The zero polynomial is the
empty tuple and reports degree -1.  Values are immutable and hashable.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd as igcd
from typing import Iterable, Iterator, Sequence

from .errors import ParseError, ZeroPolynomialError

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coeff>\d+)\s*\*?\s*)?
        (?:(?P<var>[a-zA-Z])\s*(?:\^\s*(?P<exp>[+-]?\d+))?)?\s*""",
    re.VERBOSE,
)


class UniIntPoly:
    """An integer polynomial in one variable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            if not isinstance(c, int):
                raise TypeError(f"integer coefficient expected, got {type(c).__name__}")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # pragma: no cover - guard
        raise AttributeError("UniIntPoly is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "UniIntPoly":
        return cls(())

    @classmethod
    def one(cls) -> "UniIntPoly":
        return cls((1,))

    @classmethod
    def constant(cls, c: int) -> "UniIntPoly":
        return cls((c,))

    @classmethod
    def x(cls) -> "UniIntPoly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "UniIntPoly":
        if exponent < 0:
            raise ValueError("negative exponent")
        return cls((0,) * exponent + (coeff,))

    @classmethod
    def parse(cls, text: str) -> "UniIntPoly":
        """Parse human syntax like ``t^10 + t^9 - t^7 - 1`` (any single letter)."""
        terms = _parse_terms(text)
        out: dict[int, int] = {}
        for exp, coeff in terms:
            if exp < 0:
                raise ParseError(f"negative exponent {exp} in univariate polynomial")
            out[exp] = out.get(exp, 0) + coeff
        if not out:
            raise ParseError(f"no terms found in {text!r}")
        deg = max(out)
        return cls(tuple(out.get(k, 0) for k in range(deg + 1)))

    # -- basic queries ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniIntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ((other,) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("UniIntPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"UniIntPoly({self.to_text()})"

    # -- arithmetic ------------------------------------------------------

    def __neg__(self) -> "UniIntPoly":
        return UniIntPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "UniIntPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniIntPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "UniIntPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "UniIntPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "UniIntPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniIntPoly(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return UniIntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniIntPoly":
        if n < 0:
            raise ValueError("negative power")
        result = UniIntPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        """Evaluate by Horner's rule; works for int, Fraction, complex, mpmath."""
        if not self.coeffs:
            return 0 * x if not isinstance(x, int) else 0
        acc = self.coeffs[-1] + 0 * x
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    # -- structure -------------------------------------------------------

    def derivative(self) -> "UniIntPoly":
        return UniIntPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def content(self) -> int:
        """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self.coeffs:
            g = igcd(g, c)
            if g == 1:
                break
        return g

    def primitive(self) -> tuple[int, "UniIntPoly"]:
        """Return ``(c, g)`` with ``c > 0``, ``g`` primitive with positive leading
        coefficient, and ``self = sign * c * g`` where sign is folded into c."""
        if not self.coeffs:
            raise ZeroPolynomialError("zero polynomial has no primitive part")
        c = self.content()
        if self.coeffs[-1] < 0:
            c = -c
        return c, UniIntPoly(tuple(x // c for x in self.coeffs))

    def shift_up(self, k: int) -> "UniIntPoly":
        """Multiply by x^k."""
        if not self.coeffs or k == 0:
            return self
        return UniIntPoly((0,) * k + self.coeffs)

    def strip_zero_roots(self) -> tuple[int, "UniIntPoly"]:
        """Split off the power of x dividing self: returns (k, g) with self = x^k g."""
        if not self.coeffs:
            return 0, self
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k, UniIntPoly(self.coeffs[k:])

    def reverse(self) -> "UniIntPoly":
        """Reciprocal polynomial x^deg * self(1/x)."""
        return UniIntPoly(tuple(reversed(self.coeffs)))

    def compose_neg(self) -> "UniIntPoly":
        """self(-x)."""
        return UniIntPoly(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    def length(self) -> int:
        """Sum of absolute values of the coefficients."""
        return sum(abs(c) for c in self.coeffs)

    def max_norm(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    # -- division --------------------------------------------------------

    def trial_div(self, g: "UniIntPoly") -> "UniIntPoly | None":
        """Exact quotient self/g over the integers, or None if g does not divide."""
        if g.is_zero:
            raise ZeroPolynomialError("division by zero polynomial")
        if self.is_zero:
            return UniIntPoly(())
        if g.degree > self.degree:
            return None
        rem = list(self.coeffs)
        gl = g.coeffs[-1]
        dq = len(rem) - len(g.coeffs)
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            top = rem[k + g.degree]
            if top == 0:
                continue
            q, r = divmod(top, gl)
            if r:
                return None
            quot[k] = q
            for j, gc in enumerate(g.coeffs):
                rem[k + j] -= q * gc
        if any(rem[: g.degree]):
            return None
        return UniIntPoly(quot)

    def divexact(self, g: "UniIntPoly") -> "UniIntPoly":
        q = self.trial_div(g)
        if q is None:
            raise ValueError(f"{g!r} does not divide {self!r} exactly")
        return q

    def divides(self, other: "UniIntPoly") -> bool:
        return other.trial_div(self) is not None

    # -- rendering ---------------------------------------------------------

    def to_text(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            elif k == 1:
                body = f"{var}" if mag == 1 else f"{mag}*{var}"
            else:
                body = f"{var}^{k}" if mag == 1 else f"{mag}*{var}^{k}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _coerce(v) -> UniIntPoly:
    if isinstance(v, UniIntPoly):
        return v
    if isinstance(v, int):
        return UniIntPoly((v,)) if v else UniIntPoly(())
    raise TypeError(f"cannot treat {type(v).__name__} as a polynomial")


def _parse_terms(text: str) -> list[tuple[int, int]]:
    """Shared term scanner: returns (exponent, signed coefficient) pairs."""
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial text")
    pos = 0
    out = []
    var_seen: str | None = None
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"malformed term near {s[pos:pos+16]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coeff = m.group("coeff")
        var = m.group("var")
        exp = m.group("exp")
        if coeff is None and var is None:
            raise ParseError(f"malformed term near {s[pos:pos+16]!r}")
        c = int(coeff) if coeff is not None else 1
        if var is None:
            e = 0
        else:
            if var_seen is None:
                var_seen = var
            elif var != var_seen:
                raise ParseError(f"mixed variables {var_seen!r} and {var!r}")
            e = int(exp) if exp is not None else 1
        out.append((e, sign * c))
        pos = m.end()
    return out


# -- gcd over the integers -------------------------------------------------

def _miller_rabin(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_from(start: int) -> Iterator[int]:
    """Deterministic stream of primes >= start."""
    n = max(2, start)
    if n % 2 == 0 and n != 2:
        n += 1
    while True:
        if _miller_rabin(n):
            yield n
        n += 1 if n == 2 else 2


def _gcd_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Monic gcd of two coefficient lists mod p (ascending order)."""
    a = [c % p for c in a]
    b = [c % p for c in b]

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        # a mod b
        for k in range(len(a) - len(b), -1, -1):
            top = a[k + len(b) - 1]
            if top:
                q = top * inv % p
                for j, bc in enumerate(b):
                    a[k + j] = (a[k + j] - q * bc) % p
        a = trim(a)
        a, b = b, a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def poly_gcd(f: UniIntPoly, g: UniIntPoly) -> UniIntPoly:
    """Gcd over Z, primitive with positive leading coefficient times the
    gcd of the contents.  Uses modular images recombined by CRT, certified
    by exact trial division."""
    if f.is_zero and g.is_zero:
        return UniIntPoly(())
    if f.is_zero:
        c, pp = g.primitive()
        return abs(c) * pp
    if g.is_zero:
        c, pp = f.primitive()
        return abs(c) * pp
    cf, fp = f.primitive()
    cg, gp = g.primitive()
    c = igcd(cf, cg)
    if fp.degree == 0 or gp.degree == 0:
        return UniIntPoly((c,))
    if fp == gp:
        return c * fp
    kf, fp = fp.strip_zero_roots()
    kg, gp = gp.strip_zero_roots()
    shared_x = min(kf, kg)

    gamma = igcd(fp.leading, gp.leading)
    best_deg = min(fp.degree, gp.degree) + 1
    combined: list[int] = []
    modulus = 1
    stable = 0
    for p in primes_from(1 << 24):
        if fp.leading % p == 0 or gp.leading % p == 0:
            continue
        img = _gcd_mod_p(fp.coeffs, gp.coeffs, p)
        d = len(img) - 1
        if d == 0:
            return UniIntPoly((c,)).shift_up(shared_x) if shared_x else UniIntPoly((c,))
        if d > best_deg:
            continue  # unlucky prime
        scaled = [gamma * x % p for x in img]
        if d < best_deg:
            best_deg = d
            combined = scaled
            modulus = p
            stable = 0
        else:
            # CRT-combine with the accumulated image
            inv = pow(modulus % p, -1, p)
            new = []
            changed = False
            for i in range(d + 1):
                a0 = combined[i] if i < len(combined) else 0
                t = (scaled[i] - a0) * inv % p
                v = a0 + modulus * t
                new.append(v)
            modulus *= p
            # symmetric range
            sym = [v - modulus if 2 * v > modulus else v for v in new]
            prev_sym = [v - (modulus // p) if 2 * v > (modulus // p) else v for v in combined]
            changed = sym != prev_sym
            combined = new
            if not changed:
                stable += 1
            else:
                stable = 0
        if stable >= 1 and combined:
            sym = [v - modulus if 2 * v > modulus else v for v in combined]
            cand = UniIntPoly(sym)
            if cand.is_zero:
                continue
            _, cand = cand.primitive()
            if cand.divides(fp) and cand.divides(gp):
                result = c * cand
            else:
                continue
            return result.shift_up(shared_x) if shared_x else result
    raise AssertionError("unreachable")  # pragma: no cover
