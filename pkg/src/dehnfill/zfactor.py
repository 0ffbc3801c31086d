"""Exact factorization of integer polynomials and the cyclotomic split.

The pipeline for a primitive squarefree part is the classical one:
reduce modulo several admissible primes, factor there (distinct-degree
then equal-degree splitting), Hensel-lift the factorization of the best
prime above the Mignotte coefficient bound, and recombine factor subsets,
pruned by the intersection of the modular degree patterns.  Every result
is verified by exact re-multiplication before it is returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from . import modpoly
from .errors import (
    DegreeBoundExceededError,
    InternalCheckFailedError,
    ZeroPolynomialError,
)
from .intpoly import UniIntPoly, poly_gcd, primes_from

DEFAULT_DEGREE_BOUND = 4096
SUBSET_ATTEMPT_CAP = 1 << 20
_PRIME_FLOOR = 101
_NUM_PRIMES = 3


# ---------------------------------------------------------------------------
# squarefree decomposition (Yun)
# ---------------------------------------------------------------------------

def squarefree_decompose(
    f: UniIntPoly,
) -> tuple[int, int, int, list[tuple[UniIntPoly, int]]]:
    """Yun decomposition of f.

    Returns ``(unit, content, t_power, parts)`` with unit in {-1, +1},
    content >= 1, parts a list of (primitive squarefree polynomial with
    positive leading coefficient, multiplicity), pairwise coprime, and

        unit * content * t^t_power * prod(part^mult) == f    exactly.

    Factors that are a pure power of t are reported through t_power.
    """
    if f.is_zero:
        raise ZeroPolynomialError("cannot decompose the zero polynomial")
    c, g = f.primitive()
    unit = -1 if c < 0 else 1
    content = abs(c)
    t_power, g = g.strip_zero_roots()
    if g.degree == 0:
        return unit, content, t_power, []
    parts: list[tuple[UniIntPoly, int]] = []
    dg = g.derivative()
    h = poly_gcd(g, dg)
    if h.degree == 0:
        return unit, content, t_power, [(g, 1)]
    b = g.divexact(h)
    d = dg.divexact(h) - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            parts.append((a, i))
        b = b.divexact(a)
        d = d.divexact(a) - b.derivative()
        i += 1
    return unit, content, t_power, parts


def squarefree_part(f: UniIntPoly) -> UniIntPoly:
    """Product of the distinct irreducible factors of f (t factor included once)."""
    unit, _, t_power, parts = squarefree_decompose(f)
    out = UniIntPoly.one()
    for part, _ in parts:
        out = out * part
    if t_power:
        out = out.shift_up(1)
    return out


# ---------------------------------------------------------------------------
# Hensel lifting on plain ascending int lists
# ---------------------------------------------------------------------------

def _trunc(a: list[int], m: int) -> list[int]:
    out = []
    half = m // 2
    for c in a:
        v = c % m
        if v > half:
            v -= m
        out.append(v)
    while out and out[-1] == 0:
        out.pop()
    return out


def _ladd(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return out


def _lsub(a: list[int], b: list[int]) -> list[int]:
    return _ladd(a, [-c for c in b])


def _lmul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    while out and out[-1] == 0:
        out.pop()
    return out


def _monic_divmod(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    """Division by a monic b over the integers."""
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    for k in range(len(r) - db - 1, -1, -1):
        top = r[k + db]
        if top:
            q[k] = top
            for j in range(db + 1):
                r[k + j] -= top * b[j]
    rr = r[:db]
    while rr and rr[-1] == 0:
        rr.pop()
    return q, rr


def _hensel_step(m, f, g, h, s, t):
    """One quadratic lifting step: from f = g*h, s*g + t*h = 1 (mod m)
    to the same congruences mod m^2, with h monic."""
    M = m * m
    e = _trunc(_lsub(f, _lmul(g, h)), M)
    q, r = _monic_divmod(_lmul(s, e), h)
    q, r = _trunc(q, M), _trunc(r, M)
    u = _ladd(_lmul(t, e), _lmul(q, g))
    G = _trunc(_ladd(g, u), M)
    H = _trunc(_ladd(h, r), M)
    u = _ladd(_lmul(s, G), _lmul(t, H))
    b = _trunc(_lsub(u, [1]), M)
    c, d = _monic_divmod(_lmul(s, b), H)
    c, d = _trunc(c, M), _trunc(d, M)
    u = _ladd(_lmul(t, b), _lmul(c, G))
    S = _trunc(_lsub(s, d), M)
    T = _trunc(_lsub(t, u), M)
    return G, H, S, T


def _gf_gcdex(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    """(s, t) with s*a + t*b = 1 mod p for coprime a, b (int lists mod p)."""
    import numpy as np

    a0 = modpoly.from_int_list(a, p)
    b0 = modpoly.from_int_list(b, p)
    # extended euclid on (r, s, t) triples
    r0, r1 = a0, b0
    s0 = np.array([1], dtype=np.int64)
    s1 = np.zeros(0, dtype=np.int64)
    t0 = np.zeros(0, dtype=np.int64)
    t1 = np.array([1], dtype=np.int64)
    while len(r1):
        q, r = modpoly.divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, modpoly.trim((_np_sub(s0, modpoly.mul(q, s1, p), p)))
        t0, t1 = t1, modpoly.trim((_np_sub(t0, modpoly.mul(q, t1, p), p)))
    inv = pow(int(r0[-1]), -1, p)
    s = (s0 * inv) % p
    t = (t0 * inv) % p
    return [int(x) for x in s], [int(x) for x in t]


def _np_sub(a, b, p):
    import numpy as np

    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] -= b
    return out % p


def _hensel_lift(p: int, f: list[int], f_list: list[list[int]], l: int) -> list[list[int]]:
    """Lift monic pairwise-coprime factors of f mod p to factors mod p^l."""
    r = len(f_list)
    lc = f[-1]
    if r == 1:
        inv = pow(lc % p**l, -1, p**l)
        return [_trunc([c * inv for c in f], p**l)]
    m = p
    k = r // 2
    d = int(math.ceil(math.log2(l)))
    g = [lc % p]
    for fi in f_list[:k]:
        g = [c % p for c in _lmul(g, fi)]
    h = list(f_list[k])
    for fi in f_list[k + 1 :]:
        h = [c % p for c in _lmul(h, fi)]
    s, t = _gf_gcdex(g, h, p)
    g, h = _trunc(g, p), _trunc(h, p)
    s, t = _trunc(s, p), _trunc(t, p)
    for _ in range(d):
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
    return _hensel_lift(p, g, f_list[:k], l) + _hensel_lift(p, h, f_list[k:], l)


# ---------------------------------------------------------------------------
# Zassenhaus over the integers
# ---------------------------------------------------------------------------

def _admissible_primes(f: UniIntPoly, count: int) -> list[tuple[int, list]]:
    """First `count` primes above the floor where f stays squarefree and the
    leading coefficient is a unit, together with the modular factor lists."""
    found = []
    for p in primes_from(_PRIME_FLOOR):
        if f.leading % p == 0:
            continue
        fp = modpoly.from_int_list(f.coeffs, p)
        if len(fp) - 1 != f.degree or not modpoly.is_squarefree(fp, p):
            continue
        found.append((p, modpoly.factor_squarefree(modpoly.monic(fp, p), p)))
        if len(found) == count:
            return found
    raise AssertionError("prime stream exhausted")  # pragma: no cover


def _subset_degree_sums(degrees: list[int]) -> int:
    """Bitmask of achievable subset degree sums."""
    mask = 1
    for d in degrees:
        mask |= mask << d
    return mask


def _zassenhaus(f: UniIntPoly) -> list[UniIntPoly]:
    """Irreducible factors of a primitive squarefree f with positive leading
    coefficient and nonzero constant term."""
    n = f.degree
    if n <= 1:
        return [f]
    prime_data = _admissible_primes(f, _NUM_PRIMES)
    allowed = _subset_degree_sums([len(g) - 1 for g in prime_data[0][1]])
    for _, facs in prime_data[1:]:
        allowed &= _subset_degree_sums([len(g) - 1 for g in facs])
    p, modular = min(prime_data, key=lambda pr: (len(pr[1]), pr[0]))
    if len(modular) == 1:
        return [f]

    A = f.max_norm()
    b = f.leading
    B = int(math.isqrt(n + 1) + 1) * 2**n * A * abs(b)
    l = int(math.ceil(math.log(2 * B + 1, p)))
    lifted = _hensel_lift(
        p, list(f.coeffs), [modpoly.to_int_list(g, p) for g in modular], l
    )
    pl = p**l

    fc = f.constant_term
    factors: list[UniIntPoly] = []
    remaining = list(range(len(lifted)))
    cur = f
    b = cur.leading
    attempts = 0
    s = 1
    while 2 * s <= len(remaining):
        found = False
        for S in combinations(remaining, s):
            dsum = sum(len(lifted[i]) - 1 for i in S)
            if not (allowed >> dsum) & 1:
                continue
            attempts += 1
            if attempts > SUBSET_ATTEMPT_CAP:
                raise DegreeBoundExceededError(
                    f"recombination exceeded {SUBSET_ATTEMPT_CAP} subset attempts"
                )
            # cheap test: the constant coefficient must divide b*fc
            q = b % pl
            for i in S:
                q = q * (lifted[i][0] if lifted[i] else 0) % pl
            q = q if 2 * q <= pl else q - pl
            if q and (b * fc) % q != 0:
                continue
            G = [b]
            for i in S:
                G = _lmul(G, lifted[i])
            G = _trunc(G, pl)
            Gp = UniIntPoly(G)
            if Gp.is_zero:
                continue
            _, Gp = Gp.primitive()
            quot = cur.trial_div(Gp)
            if quot is None:
                continue
            factors.append(Gp)
            cur = quot
            remaining = [i for i in remaining if i not in S]
            b = cur.leading
            allowed = _subset_degree_sums([len(lifted[i]) - 1 for i in remaining])
            found = True
            break
        if not found:
            s += 1
    if cur.degree > 0:
        _, cur = cur.primitive()
        factors.append(cur)
    return factors


# ---------------------------------------------------------------------------
# public factorization interface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """Complete factorization over the integers.

    unit * content * t^t_power * prod(poly^mult) reconstructs the input
    exactly.  After `cyclotomic_split`, cyclotomic_orders[i] records the
    order n with factors[i][0] equal to the n-th cyclotomic polynomial,
    for exactly the cyclotomic factor positions.
    """

    unit: int
    content: int
    t_power: int
    factors: tuple[tuple[UniIntPoly, int], ...]
    cyclotomic_orders: dict[int, int] = field(default_factory=dict)
    split_done: bool = False

    @property
    def cyclotomic_part(self) -> list[int]:
        return sorted(self.cyclotomic_orders)

    @property
    def non_cyclotomic_part(self) -> list[int]:
        if not self.split_done:
            raise ValueError("run cyclotomic_split first")
        return [i for i in range(len(self.factors)) if i not in self.cyclotomic_orders]

    def reassemble(self) -> UniIntPoly:
        out = UniIntPoly.constant(self.unit * self.content)
        for g, m in self.factors:
            out = out * g**m
        if self.t_power:
            out = out.shift_up(self.t_power)
        return out

    def non_cyclotomic_factors(self) -> list[tuple[UniIntPoly, int]]:
        return [self.factors[i] for i in self.non_cyclotomic_part]


def factor(f: UniIntPoly, degree_bound: int = DEFAULT_DEGREE_BOUND) -> Factorization:
    """Factor f into irreducibles over the integers."""
    if f.is_zero:
        raise ZeroPolynomialError("cannot factor the zero polynomial")
    if f.degree > degree_bound:
        raise DegreeBoundExceededError(
            f"degree {f.degree} exceeds the configured bound {degree_bound}"
        )
    unit, content, t_power, parts = squarefree_decompose(f)
    collected: list[tuple[UniIntPoly, int]] = []
    for part, mult in parts:
        k, core = part.strip_zero_roots()
        if k:  # cannot happen after strip in decompose, kept as a guard
            t_power += k * mult
        if core.degree == 0:
            continue
        for irr in _zassenhaus(core):
            collected.append((irr, mult))
    collected.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    fac = Factorization(unit, content, t_power, tuple(collected))
    if fac.reassemble() != f:
        raise InternalCheckFailedError("re-multiplication does not reproduce the input")
    return fac


# ---------------------------------------------------------------------------
# cyclotomic detection
# ---------------------------------------------------------------------------

_phi_cache: list[int] = [0, 1]


def _phi_sieve_upto(n: int) -> list[int]:
    global _phi_cache
    if len(_phi_cache) > n:
        return _phi_cache
    size = max(n + 1, 2 * len(_phi_cache))
    phi = list(range(size))
    for i in range(2, size):
        if phi[i] == i:  # prime
            for j in range(i, size, i):
                phi[j] -= phi[j] // i
    _phi_cache = phi
    return phi


def euler_phi_inverse(d: int) -> list[int]:
    """All n with euler_phi(n) = d, using n <= 2*d^2 (valid since phi(n) >= sqrt(n/2))."""
    if d < 1:
        return []
    if d > 1 and d % 2 == 1:
        return []
    bound = max(2 * d * d, 2)
    phi = _phi_sieve_upto(bound)
    return [n for n in range(1, bound + 1) if phi[n] == d]


_cyclo_cache: dict[int, UniIntPoly] = {}


def cyclotomic_poly(n: int) -> UniIntPoly:
    """The n-th cyclotomic polynomial, by dividing x^n - 1 by the lower ones."""
    if n < 1:
        raise ValueError("order must be positive")
    got = _cyclo_cache.get(n)
    if got is not None:
        return got
    num = UniIntPoly.monomial(n, 1) - 1
    for d in range(1, n):
        if n % d == 0:
            num = num.divexact(cyclotomic_poly(d))
    _cyclo_cache[n] = num
    return num


# Modular pre-check prime: h | x^n - 1 over Z implies the same mod this prime.
_PRECHECK_P = 33_554_467  # prime just above 2^25; (4097)*p^2 < 2^63


def _x_power_is_one_mod_h(h: UniIntPoly, n: int) -> bool:
    hp = modpoly.from_int_list(h.coeffs, _PRECHECK_P)
    if len(hp) - 1 != h.degree:
        return False  # pragma: no cover - precheck prime divides a coefficient
    x = modpoly.from_int_list([0, 1], _PRECHECK_P)
    r = modpoly.pow_mod(x, n, hp, _PRECHECK_P)
    return len(r) == 1 and int(r[0]) == 1


def cyclotomic_order(h: UniIntPoly) -> int | None:
    """The order n with h equal to the n-th cyclotomic polynomial, else None."""
    if h.is_zero or not h.is_monic():
        return None
    d = h.degree
    if d == 0:
        return None
    if abs(h.constant_term) != 1:
        return None
    if d >= 2 and h.coeffs != tuple(reversed(h.coeffs)):
        return None  # cyclotomics of degree >= 2 are self-reciprocal
    for n in euler_phi_inverse(d):
        # cheap necessary test: x^n = 1 modulo (h, precheck prime)
        if not _x_power_is_one_mod_h(h, n):
            continue
        if h == cyclotomic_poly(n):
            return n
    return None


def cyclotomic_split(fac: Factorization) -> Factorization:
    """Mark each irreducible factor as cyclotomic (with its order) or not."""
    orders: dict[int, int] = {}
    for i, (g, _) in enumerate(fac.factors):
        n = cyclotomic_order(g)
        if n is not None:
            orders[i] = n
    return Factorization(
        fac.unit, fac.content, fac.t_power, fac.factors, orders, split_done=True
    )


def factor_split(f: UniIntPoly, degree_bound: int = DEFAULT_DEGREE_BOUND) -> Factorization:
    """factor followed by cyclotomic_split."""
    return cyclotomic_split(factor(f, degree_bound))


def is_cyclotomic_product(f: UniIntPoly) -> bool:
    """True iff f is +-1 times a monomial times a product of cyclotomic polynomials."""
    if f.is_zero:
        raise ZeroPolynomialError("zero polynomial")
    fac = factor_split(f)
    return fac.content == 1 and not fac.non_cyclotomic_part
