"""Mahler measure and length with certified accuracy.

Root finding is simultaneous Aberth-Ehrlich iteration in double precision,
refined by Newton steps in mpmath working precision when the requested
tolerance demands it.  Every root carries an a-posteriori error radius of
Weierstrass/Gershgorin type: n*|f(z)| / (|lc| * prod of distances).  The
measure of a polynomial is assembled from exact factorization data, so
cyclotomic content contributes exactly 1 and never pollutes the numerics.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from . import zfactor
from .errors import NonConvergenceError, ZeroPolynomialError
from .intpoly import UniIntPoly

try:
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int

_ABERTH_MAX_ITER = 600
_DPS_CAP = 700


def _precision_floor_bits() -> int:
    try:
        return int(os.environ.get("DEHNFILL_BITS", "0"))
    except ValueError:
        return 0


@dataclass(frozen=True)
class RootSet:
    """Root approximations with certified error radii."""

    roots: tuple[tuple[complex, float], ...]
    degree_accounted: int
    converged: bool
    zero_multiplicity: int = 0

    def moduli(self) -> list[float]:
        return sorted((abs(z) for z, _ in self.roots), reverse=True)

    def max_radius(self) -> float:
        return max((r for _, r in self.roots), default=0.0)

    def clusters(self) -> list[tuple[complex, float, int]]:
        """Merge overlapping certified disks; returns (center, radius, count)."""
        n = len(self.roots)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            zi, ri = self.roots[i]
            for j in range(i + 1, n):
                zj, rj = self.roots[j]
                if abs(zi - zj) <= ri + rj:
                    pi, pj = find(i), find(j)
                    if pi != pj:
                        parent[pi] = pj
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        out = []
        for members in groups.values():
            zs = [self.roots[i][0] for i in members]
            rs = [self.roots[i][1] for i in members]
            center = sum(zs) / len(zs)
            radius = max(abs(z - center) + r for z, r in zip(zs, rs))
            out.append((center, radius, len(members)))
        out.sort(key=lambda c: (-c[2], c[0].real, c[0].imag))
        return out


@dataclass(frozen=True)
class MahlerEstimate:
    value: float
    abs_error: float
    method: str  # 'roots', 'graeffe', or 'both'

    def agrees_with(self, other: "MahlerEstimate") -> bool:
        return abs(self.value - other.value) <= self.abs_error + other.abs_error


def _float_coeffs(coeffs: tuple[int, ...]) -> np.ndarray:
    """Coefficients as float64, uniformly scaled to dodge overflow."""
    top = max(abs(c) for c in coeffs)
    shift = max(0, top.bit_length() - 900)
    return np.array(
        [float(c >> shift) if c >= 0 else -float((-c) >> shift) for c in coeffs],
        dtype=np.float64,
    )


def _aberth_double(coeffs: tuple[int, ...], seed: int = 0) -> tuple[np.ndarray, bool]:
    """All roots of a squarefree integer polynomial, double precision."""
    n = len(coeffs) - 1
    c = _float_coeffs(coeffs)
    scale = np.max(np.abs(c))
    c = c / scale
    d = c[1:] * np.arange(1, n + 1)
    cd, dd = c[::-1], d[::-1]
    a0, an = abs(float(c[0])), abs(float(c[-1]))
    r0 = (a0 / an) ** (1.0 / n) if a0 > 0 else 0.5
    r0 = min(max(r0, 1e-6), 1e6)
    k = np.arange(n)
    angles = 2 * np.pi * (k + 0.3531 + 0.087 * seed) / n + 0.01 * seed
    z = r0 * np.exp(1j * angles)
    cauchy = 1.0 + float(np.max(np.abs(c[:-1]))) / an
    active = np.ones(n, dtype=bool)
    for _ in range(_ABERTH_MAX_ITER):
        za = z[active]
        pv = np.polyval(cd, za)
        dv = np.polyval(dd, za)
        diff = za[:, None] - z[None, :]
        # repulsion against every other root, including settled ones
        own = np.abs(diff) < 1e-300
        diff[own] = 1.0
        S = (1.0 / diff).sum(axis=1) - own.sum(axis=1)
        with np.errstate(all="ignore"):
            w = pv / dv
            corr = w / (1.0 - w * S)
        bad = ~np.isfinite(corr)
        if bad.any():
            corr = np.where(bad, 0.1 * (1 + np.abs(za)) * np.exp(1j * 0.7), corr)
        znew = za - corr
        # keep iterates inside a sane disk
        big = np.abs(znew) > 4 * cauchy + 10
        if big.any():
            znew = np.where(big, znew / np.abs(znew) * cauchy, znew)
        z[active] = znew
        done = np.abs(corr) <= 1e-15 * (1.0 + np.abs(znew))
        idx = np.where(active)[0]
        active[idx[done]] = False
        if not active.any():
            return z, True
    return z, False


def _mp_eval(coeffs: tuple[int, ...], z: mp.mpc) -> mp.mpc:
    acc = mp.mpc(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def _mp_eval_deriv(coeffs: tuple[int, ...], z: mp.mpc) -> tuple[mp.mpc, mp.mpc]:
    acc = mp.mpc(coeffs[-1])
    dacc = mp.mpc(0)
    for c in reversed(coeffs[:-1]):
        dacc = dacc * z + acc
        acc = acc * z + c
    return acc, dacc


def _radii(coeffs: tuple[int, ...], roots, evaluator=None) -> list[float]:
    """Weierstrass-style radii: n|f(z_i)| / (|lc| prod_j |z_i - z_j|).

    Computed in log space; |f| from the supplied evaluator (mpmath) and
    pair distances in double precision.  A safety factor absorbs rounding.
    """
    n = len(roots)
    zs = np.array([complex(z) for z in roots], dtype=np.complex128)
    diff = np.abs(zs[:, None] - zs[None, :])
    np.fill_diagonal(diff, 1.0)
    with np.errstate(divide="ignore"):
        logdist = np.log(diff).sum(axis=1)
    out = []
    lc = abs(coeffs[-1])
    for i, z in enumerate(roots):
        fz = evaluator(z) if evaluator is not None else _mp_eval(coeffs, mp.mpc(z))
        afz = abs(fz)
        if afz == 0:
            out.append(0.0)
            continue
        logr = math.log(n) + float(mp.log(afz)) - math.log(lc) - float(logdist[i])
        if logr > 700:
            out.append(float("inf"))
        else:
            out.append(4.0 * math.exp(logr) + 1e-307)
    return out


def find_roots(f: UniIntPoly, tol: float = 1e-12) -> RootSet:
    """All complex roots of f with certified error radii at most tol.

    Callers should pass squarefree polynomials; clustered disks are merged
    by RootSet.clusters() when they overlap.  Returns a partial result with
    converged=False if the iteration cap or precision cap is reached.
    """
    if f.is_zero or f.degree < 1:
        raise ZeroPolynomialError("need a nonconstant polynomial")
    tol = max(tol, 1e-14)
    zero_mult, g = f.strip_zero_roots()
    if g.degree == 0:
        return RootSet(roots=(), degree_accounted=0, converged=True, zero_multiplicity=zero_mult)
    coeffs = g.coeffs
    approx, ok = _aberth_double(coeffs)
    if not ok:
        approx2, ok = _aberth_double(coeffs, seed=1)
        if ok:
            approx = approx2
    roots = [complex(z) for z in approx]

    floor_bits = _precision_floor_bits()
    dps = max(30, int(floor_bits * 0.302) if floor_bits else 0)
    with mp.workdps(dps):
        radii = _radii(coeffs, roots)
    converged = ok
    force_polish = floor_bits > 53  # a floor above double precision demands refinement
    while max(radii) > tol or force_polish:
        force_polish = False
        if dps > _DPS_CAP:
            converged = False
            break
        with mp.workdps(dps):
            polished = []
            for z in roots:
                zz = mp.mpc(z)
                for _ in range(4):
                    fv, dv = _mp_eval_deriv(coeffs, zz)
                    if dv == 0:
                        break
                    step = fv / dv
                    zz = zz - step
                    if abs(step) < mp.mpf(10) ** (-dps + 5):
                        break
                polished.append(zz)
            radii = _radii(coeffs, polished)
            roots = [complex(z) for z in polished]
        dps *= 2
    return RootSet(
        roots=tuple((roots[i], float(radii[i])) for i in range(len(roots))),
        degree_accounted=g.degree,
        converged=converged,
        zero_multiplicity=zero_mult,
    )


def poly_length(f: UniIntPoly) -> int:
    """Sum of the absolute values of the coefficients."""
    return f.length()


length = poly_length


def _measure_interval_from_roots(rs: RootSet) -> tuple[float, float]:
    lo = hi = 1.0
    for z, r in rs.roots:
        m = abs(z)
        lo *= max(m - r, 1.0)
        hi *= max(m + r, 1.0)
    return lo, hi


def mahler(f: UniIntPoly, tol: float = 1e-10, method: str = "roots") -> MahlerEstimate:
    """Mahler measure |lc| * prod max(|root|, 1) with certified error.

    Cyclotomic factors are detected exactly and contribute exactly 1, so
    the numeric part only ever sees factors whose roots stay away from the
    unit circle or hit it in a benign (interval-bounded) way.
    """
    if f.is_zero:
        raise ZeroPolynomialError("zero polynomial has no Mahler measure")
    if method == "graeffe":
        return mahler_graeffe(f)
    if method == "both":
        est = mahler(f, tol=tol, method="roots")
        alt = mahler_graeffe(f)
        if not est.agrees_with(alt):
            raise NonConvergenceError(
                f"root and graeffe estimates disagree: {est} vs {alt}"
            )
        return MahlerEstimate(value=est.value, abs_error=est.abs_error, method="both")

    fac = zfactor.factor_split(f)
    return _mahler_from_factorization(fac, tol)


def _mahler_from_factorization(fac: zfactor.Factorization, tol: float) -> MahlerEstimate:
    nontrivial = fac.non_cyclotomic_factors()
    value_lo = value_hi = float(fac.content)
    root_tol = 1e-12
    for _ in range(8):
        value_lo = value_hi = float(fac.content)
        ok = True
        for g, mult in nontrivial:
            lc = abs(g.leading)
            rs = find_roots(g, tol=root_tol)
            ok = ok and rs.converged
            lo, hi = _measure_interval_from_roots(rs)
            value_lo *= (lc * lo) ** mult
            value_hi *= (lc * hi) ** mult
        if not nontrivial:
            return MahlerEstimate(value=value_lo, abs_error=0.0, method="roots")
        err = (value_hi - value_lo) / 2
        if ok and err <= tol:
            return MahlerEstimate(
                value=(value_hi + value_lo) / 2, abs_error=err, method="roots"
            )
        root_tol /= 1e4
        if root_tol < 1e-60:
            break
    raise NonConvergenceError(
        f"could not reach tolerance {tol}; achieved {(value_hi - value_lo) / 2}"
    )


def mahler_graeffe(f: UniIntPoly, iterations: int = 16) -> MahlerEstimate:
    """Independent Mahler estimate by exact repeated root squaring.

    After k squarings the measure of the iterate is the 2^k power of the
    original, and measure <= length <= 2^degree * measure encloses it.
    The enclosure width shrinks like degree/2^k, deliberately loose for
    small k; it is a cross-check, not the primary value.
    """
    if f.is_zero:
        raise ZeroPolynomialError("zero polynomial has no Mahler measure")
    if not 0 <= iterations <= 64:
        raise ValueError("iterations must be between 0 and 64")
    _, g = f.strip_zero_roots()
    if g.degree == 0:
        v = abs(g.constant_term)
        return MahlerEstimate(value=float(v), abs_error=0.0, method="graeffe")
    cs = [_mpz(c) for c in g.coeffs]
    for _ in range(iterations):
        cs = _graeffe_step(cs)
    n = len(cs) - 1
    L = sum(abs(c) for c in cs)
    scale = mp.mpf(2) ** (-n)
    with mp.workdps(40):
        logL = mp.log(mp.mpf(int(L)))
        upper = mp.e ** (logL / (1 << iterations))
        lower = mp.e ** ((logL + mp.log(scale)) / (1 << iterations))
        value = (upper + lower) / 2
        err = (upper - lower) / 2
    return MahlerEstimate(
        value=float(value), abs_error=float(err) * 1.0000001 + 1e-15, method="graeffe"
    )


def _graeffe_step(cs: list) -> list:
    """Coefficients of the polynomial whose roots are the squares:
    even part squared minus x times odd part squared."""
    ev = cs[0::2]
    od = cs[1::2]
    e2 = _list_sq(ev)
    o2 = _list_sq(od)
    n = len(cs) - 1
    out = [_mpz(0)] * (n + 1)
    for i, c in enumerate(e2):
        out[i] += c
    for i, c in enumerate(o2):
        out[i + 1] -= c
    if out[-1] < 0:
        out = [-c for c in out]
    return out


def _list_sq(a: list) -> list:
    if not a:
        return []
    out = [_mpz(0)] * (2 * len(a) - 1)
    for i, ai in enumerate(a):
        out[2 * i] += ai * ai
        twice = ai + ai
        for j in range(i + 1, len(a)):
            out[i + j] += twice * a[j]
    return out


@dataclass(frozen=True)
class LehmerReport:
    threshold: float
    checked: int
    violations: tuple[tuple[str, float, float], ...]  # (factor, value, error)

    @property
    def passed(self) -> bool:
        return not self.violations


def lehmer_check(
    fac: zfactor.Factorization, c: float = 1.17628, tol: float = 1e-9
) -> LehmerReport:
    """Assert measure >= c - tol for every non-cyclotomic irreducible factor.

    A violation at the default threshold would be a mathematical discovery;
    at c = 1 + 1e-9 it would indicate a cyclotomic-classification bug.
    """
    violations = []
    checked = 0
    for g, _ in fac.non_cyclotomic_factors():
        est = _mahler_from_factorization(
            zfactor.Factorization(1, 1, 0, ((g, 1),), {}, split_done=True), tol=1e-10
        )
        checked += 1
        if est.value + est.abs_error < c - tol:
            violations.append((g.to_text(), est.value, est.abs_error))
    return LehmerReport(threshold=c, checked=checked, violations=tuple(violations))
