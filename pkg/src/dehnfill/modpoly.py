"""Dense polynomial arithmetic over GF(p) on int64 numpy arrays.

Arrays are ascending (index = exponent) and always trimmed.  Primes must
satisfy (degree+1) * p^2 < 2^63 so convolution accumulators stay exact;
the factorization pipeline uses primes barely above 100, far below that.
"""
from __future__ import annotations

import hashlib
import random

import numpy as np

Arr = np.ndarray


def trim(a: Arr) -> Arr:
    nz = np.nonzero(a)[0]
    if len(nz) == 0:
        return a[:0]
    return a[: nz[-1] + 1]


def from_int_list(coeffs, p: int) -> Arr:
    return trim(np.array([c % p for c in coeffs], dtype=np.int64))


def to_int_list(a: Arr, p: int) -> list[int]:
    """Symmetric representatives in (-p/2, p/2]."""
    out = []
    for v in a.tolist():
        out.append(v - p if 2 * v > p else v)
    return out


def mul(a: Arr, b: Arr, p: int) -> Arr:
    if len(a) == 0 or len(b) == 0:
        return a[:0]
    return trim(np.convolve(a, b) % p)


def monic(a: Arr, p: int) -> Arr:
    lead = int(a[-1])
    if lead == 1:
        return a
    return a * pow(lead, -1, p) % p


def divmod_(a: Arr, b: Arr, p: int) -> tuple[Arr, Arr]:
    if len(b) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    r = a.copy()
    db, da = len(b) - 1, len(r) - 1
    if da < db:
        return a[:0], trim(r)
    inv = pow(int(b[-1]), -1, p)
    q = np.zeros(da - db + 1, dtype=np.int64)
    for k in range(da - db, -1, -1):
        top = int(r[k + db])
        if top:
            qk = top * inv % p
            q[k] = qk
            r[k : k + db + 1] = (r[k : k + db + 1] - qk * b) % p
    return trim(q), trim(r[:db])


def rem(a: Arr, b: Arr, p: int) -> Arr:
    return divmod_(a, b, p)[1]


def mulmod(a: Arr, b: Arr, f: Arr, p: int) -> Arr:
    return rem(mul(a, b, p), f, p)


class Reducer:
    """Reduction mod a fixed monic f: one matmul instead of a division loop.

    Row k of the table is x^(deg+k) mod f, so for u of degree < 2*deg-1,
    u mod f = u_low + u_high @ table.
    """

    def __init__(self, f: Arr, p: int):
        f = monic(f, p)
        self.f = f
        self.p = p
        self.deg = len(f) - 1
        rows = max(self.deg - 1, 0)
        table = np.zeros((rows, self.deg), dtype=np.int64)
        if rows:
            r = (-f[:-1]) % p  # x^deg mod f
            table[0] = r
            for k in range(1, rows):
                top = int(r[-1])
                r = np.concatenate(([0], r[:-1]))  # multiply by x
                if top:
                    r = (r - top * f[:-1]) % p
                r %= p
                table[k] = r
        self.table = table

    def rem(self, u: Arr) -> Arr:
        if len(u) <= self.deg:
            return trim(u)
        if len(u) - self.deg > len(self.table):
            return rem(u, self.f, self.p)
        lo = np.zeros(self.deg, dtype=np.int64)
        lo[: min(self.deg, len(u))] = u[: self.deg]
        hi = u[self.deg :]
        out = (lo + hi @ self.table[: len(hi)]) % self.p
        return trim(out)

    def mulmod(self, a: Arr, b: Arr) -> Arr:
        if len(a) == 0 or len(b) == 0:
            return a[:0]
        return self.rem(np.convolve(a, b) % self.p)

    def pow_mod(self, base: Arr, e: int) -> Arr:
        result = np.array([1], dtype=np.int64)
        b = self.rem(base)
        while e:
            if e & 1:
                result = self.mulmod(result, b)
            b = self.mulmod(b, b)
            e >>= 1
        return result


def gcd(a: Arr, b: Arr, p: int) -> Arr:
    a, b = trim(a), trim(b)
    while len(b):
        a, b = b, rem(a, b, p)
    if len(a):
        a = monic(a, p)
    return a


def deriv(a: Arr, p: int) -> Arr:
    if len(a) <= 1:
        return a[:0]
    return trim(a[1:] * np.arange(1, len(a), dtype=np.int64) % p)


def pow_mod(base: Arr, e: int, f: Arr, p: int) -> Arr:
    result = np.array([1], dtype=np.int64)
    b = rem(base, f, p)
    while e:
        if e & 1:
            result = mulmod(result, b, f, p)
        b = mulmod(b, b, f, p)
        e >>= 1
    return result


def is_squarefree(f: Arr, p: int) -> bool:
    return len(gcd(f, deriv(f, p), p)) == 1


def _ddf(f: Arr, p: int) -> list[tuple[Arr, int]]:
    """Distinct-degree split of a monic squarefree f: [(product, degree)]."""
    out = []
    red = Reducer(f, p)
    h = np.array([0, 1], dtype=np.int64)  # x^(p^d) mod f as d advances
    d = 0
    while True:
        d += 1
        if len(f) - 1 < 2 * d:
            break  # at most one factor of degree >= d can remain
        h = red.pow_mod(h, p)
        diff = np.zeros(max(len(h), 2), dtype=np.int64)
        diff[: len(h)] = h
        diff[1] = (diff[1] - 1) % p
        g = gcd(f, trim(diff), p)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g, p)[0]
            if len(f) == 1:
                break
            red = Reducer(f, p)
            h = red.rem(h)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(f: Arr, d: int, p: int, rng: random.Random) -> list[Arr]:
    """Cantor-Zassenhaus equal-degree split of monic f into irreducibles of degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    red = Reducer(f, p)
    exponent = (p**d - 1) // 2
    while True:
        a = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
        a = trim(a)
        if len(a) <= 1:
            continue
        b = red.pow_mod(a, exponent)
        b = b.copy()
        if len(b) == 0:
            b = np.array([p - 1], dtype=np.int64)
        else:
            b[0] = (b[0] - 1) % p
        g = gcd(f, trim(b), p)
        if 1 < len(g) < len(f):
            rest = divmod_(f, g, p)[0]
            return _edf(g, d, p, rng) + _edf(rest, d, p, rng)


def factor_squarefree(f: Arr, p: int) -> list[Arr]:
    """Monic irreducible factors of a monic squarefree f over GF(p), sorted."""
    seed = hashlib.sha256(
        (str(p) + ":" + ",".join(map(str, f.tolist()))).encode()
    ).digest()
    rng = random.Random(int.from_bytes(seed[:8], "big"))
    out: list[Arr] = []
    for part, d in _ddf(f, p):
        out.extend(_edf(part, d, p, rng))
    out.sort(key=lambda a: (len(a), a.tolist()))
    return out
