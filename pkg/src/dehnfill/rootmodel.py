"""Root-moduli geometry of filling polynomials and the model equation.

Covers three empirical checks: how far the roots of a specialization stray
outside the unit disk (reported as the smallest D with max modulus below
1 + D/q), counting and bounding solutions of z^q (1+z)^p = 1 near z = 0
with 1 + z outside the unit circle, and the running products of the
largest moduli against the displayed bound with a fitted constant.

The model equation is expanded exactly, but its values are computed in
factored form z^q (1+z)^p - 1: the expanded coefficients reach binomial
size and Horner on them is hopelessly ill-conditioned for large p, while
the factored form is stable at any p.  A winding-number count on the
filter circle certifies that no solution in the reported region is missed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath as mp
import numpy as np

from .errors import DegreeBoundExceededError, ZeroPolynomialError
from .fill import FillingPoly
from .intpoly import UniIntPoly
from .measure import RootSet, find_roots
from .zfactor import squarefree_part

_MODEL_DEGREE_CAP = 4096


# ---------------------------------------------------------------------------
# root geometry of a filling polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootGeometryReport:
    p: int
    q: int
    moduli: tuple[float, ...]  # descending
    max_modulus: float
    fitted_D: float  # denominator * (max_modulus - 1), denominator = max(|q|, 1)
    denominator: int
    converged: bool

    def count_beyond(self, threshold: float) -> int:
        return sum(1 for m in self.moduli if m > threshold)

    def product_top(self, k: int) -> float | None:
        """Product of the 2*k*denominator largest moduli, None when k is
        beyond the available roots."""
        take = 2 * k * self.denominator
        if take > len(self.moduli) or k < 1:
            return None
        out = 1.0
        for m in self.moduli[:take]:
            out *= m
        return out

    def count_table(self, offsets: Sequence[float] = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0)) -> list[dict]:
        rows = []
        for c in offsets:
            thr = 1.0 + c / self.denominator
            rows.append({"threshold": thr, "count": self.count_beyond(thr)})
        return rows

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "max_modulus": self.max_modulus,
            "fitted_D": self.fitted_D,
            "denominator": self.denominator,
            "converged": self.converged,
            "count_table": self.count_table(),
            "moduli": list(self.moduli),
        }


def root_geometry(
    fp: FillingPoly, tol: float = 1e-10, root_set: RootSet | None = None
) -> RootGeometryReport:
    """Moduli of the distinct roots of a filling polynomial.

    Roots are taken from the squarefree part; a precomputed RootSet for
    that part may be supplied to avoid recomputation.
    """
    if fp.degenerate or fp.poly.is_zero:
        raise ZeroPolynomialError("degenerate filling polynomial has no root geometry")
    if fp.poly.degree < 1:
        return RootGeometryReport(
            p=fp.p, q=fp.q, moduli=(), max_modulus=0.0, fitted_D=0.0,
            denominator=max(abs(fp.q), 1), converged=True,
        )
    rs = root_set if root_set is not None else find_roots(squarefree_part(fp.poly), tol=tol)
    moduli = tuple(rs.moduli())
    denom = max(abs(fp.q), 1)
    max_mod = moduli[0] if moduli else 0.0
    return RootGeometryReport(
        p=fp.p,
        q=fp.q,
        moduli=moduli,
        max_modulus=max_mod,
        fitted_D=denom * (max_mod - 1.0),
        denominator=denom,
        converged=rs.converged,
    )


# ---------------------------------------------------------------------------
# the model equation z^q (1+z)^p = 1
# ---------------------------------------------------------------------------

def model_polynomial(p: int, q: int) -> UniIntPoly:
    """Exact expansion of z^q (1+z)^p - 1."""
    coeffs = [0] * (p + q + 1)
    b = 1
    for k in range(p + 1):
        coeffs[q + k] += b
        b = b * (p - k) // (k + 1)
    coeffs[0] -= 1
    return UniIntPoly(coeffs)


def _aberth_model(p: int, q: int) -> tuple[np.ndarray, bool]:
    """All p+q roots of z^q (1+z)^p - 1 via Aberth with factored evaluation."""
    n = p + q
    k = np.arange(n)
    z = np.exp(2j * np.pi * (k + 0.3531) / n)
    active = np.ones(n, dtype=bool)
    for _ in range(1200):
        za = z[active]
        w = 1.0 + za
        with np.errstate(all="ignore"):
            u = za**q * w**p
            F = u - 1.0
            dlog = q / za + p / w
            ratio = F / (u * dlog)  # F / F'
            diff = za[:, None] - z[None, :]
            own = np.abs(diff) < 1e-300
            diff[own] = 1.0
            S = (1.0 / diff).sum(axis=1) - own.sum(axis=1)
            corr = ratio / (1.0 - ratio * S)
        bad = ~np.isfinite(corr)
        if bad.any():
            corr = np.where(bad, 0.05 * np.exp(1j * 0.9), corr)
        znew = za - corr
        big = np.abs(znew) > 8.0
        if big.any():
            znew = np.where(big, znew / np.abs(znew), znew)
        z[active] = znew
        done = np.abs(corr) <= 1e-15 * (1.0 + np.abs(znew))
        idx = np.where(active)[0]
        active[idx[done]] = False
        if not active.any():
            return z, True
    return z, False


def _winding_count(p: int, q: int, radius: float) -> int:
    """Zeros of z^q (1+z)^p - 1 inside |z| = radius, by argument principle."""
    m = 4096
    for _ in range(6):
        theta = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
        zz = radius * np.exp(1j * theta)
        vals = zz**q * (1.0 + zz) ** p - 1.0
        args = np.angle(vals)
        d = np.diff(np.concatenate([args, args[:1]]))
        d = (d + np.pi) % (2 * np.pi) - np.pi
        if np.max(np.abs(d)) < 2.5 and np.min(np.abs(vals)) > 1e-12:
            return int(round(d.sum() / (2 * np.pi)))
        m *= 2
    raise ValueError(
        f"winding count on |z| = {radius} did not stabilize; a solution may "
        f"sit on the contour"
    )


@dataclass(frozen=True)
class ModelSolveReport:
    p: int
    q: int
    epsilon: float
    solutions: tuple[tuple[complex, complex], ...]  # (z, w) with |w| > 1, |z| < eps
    count: int
    inside_disk_count: int  # all roots with |z| < eps, certified by winding number
    residual_max: float
    converged: bool
    ratio_in_range: bool = True  # whether p/q > 1/epsilon held

    @property
    def w_moduli(self) -> list[float]:
        return sorted((abs(w) for _, w in self.solutions), reverse=True)

    def product_top(self, k: int) -> float | None:
        take = 2 * k * self.q
        mods = self.w_moduli
        if take > len(mods) or k < 1:
            return None
        out = 1.0
        for m in mods[:take]:
            out *= m
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "epsilon": self.epsilon,
            "count": self.count,
            "inside_disk_count": self.inside_disk_count,
            "residual_max": self.residual_max,
            "converged": self.converged,
            "solutions": [
                {"z": [z.real, z.imag], "w": [w.real, w.imag]} for z, w in self.solutions
            ],
        }


def solve_model(p: int, q: int, epsilon: float) -> ModelSolveReport:
    """Solutions of z^q (1+z)^p = 1 with |1+z| > 1 and |z| < epsilon.

    Requires coprime p, q with p/q > 1/epsilon and epsilon <= 0.2.  The
    count of roots inside the filter disk is certified with a winding
    number; every reported solution is residual-checked in high precision.
    """
    if math.gcd(p, q) != 1 or p <= 0 or q <= 0:
        raise ValueError("p, q must be positive coprime integers")
    if epsilon > 0.2 or epsilon <= 0:
        raise ValueError("epsilon must lie in (0, 0.2]")
    if p + q > _MODEL_DEGREE_CAP:
        raise DegreeBoundExceededError(f"degree {p + q} exceeds {_MODEL_DEGREE_CAP}")
    roots, ok = _aberth_model(p, q)

    inside = [complex(z) for z in roots if abs(z) < epsilon]
    wind = _winding_count(p, q, epsilon)
    certified = wind == len(inside)

    picked = [(z, 1.0 + z) for z in inside if abs(1.0 + z) > 1.0]
    picked.sort(key=lambda zw: (-abs(zw[1]), zw[0].imag, zw[0].real))

    residual = 0.0
    with mp.workdps(40):
        for z, _ in picked:
            zz = mp.mpc(z)
            val = zz**q * (1 + zz) ** p - 1
            residual = max(residual, float(abs(val)))
    return ModelSolveReport(
        p=p,
        q=q,
        epsilon=epsilon,
        solutions=tuple(picked),
        count=len(picked),
        inside_disk_count=len(inside),
        residual_max=residual,
        converged=ok and certified,
        ratio_in_range=(p * epsilon > q),
    )


# ---------------------------------------------------------------------------
# the product bound with a fitted constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProductBoundRow:
    k: int
    lhs: float | None
    rhs: float
    passed: bool | None  # None marks rows beyond the available roots

    def to_dict(self) -> dict:
        return {"k": self.k, "lhs": self.lhs, "rhs": self.rhs, "passed": self.passed}


def bound_rhs(p: int, q: int, d: float, k: int, exponent: int) -> float:
    """prod_{l=1..k} (1 + d*log((p/q)/l)/(p/q))^exponent."""
    r = p / q
    out = 1.0
    for l in range(1, k + 1):
        out *= (1.0 + d * math.log(r / l) / r) ** exponent
    return out


def product_bound_check(
    report: "RootGeometryReport | ModelSolveReport",
    d: float,
    k_max: int | None = None,
) -> list[ProductBoundRow]:
    """Compare running products of the largest moduli against the displayed
    bound with parameter d.  Model reports use exponent 2q (the moduli are
    those of w); filling-polynomial reports use exponent 2."""
    if isinstance(report, ModelSolveReport):
        exponent = 2 * report.q
        available = len(report.w_moduli)
        product = report.product_top
    else:
        exponent = 2
        available = len(report.moduli)
        product = report.product_top
    denom = report.q if isinstance(report, ModelSolveReport) else report.denominator
    k_avail = available // max(2 * denom, 1) if denom else 0
    if k_max is None:
        k_max = k_avail
    rows = []
    for k in range(1, max(k_max, 0) + 1):
        rhs = bound_rhs(report.p, abs(report.q) or 1, d, k, exponent)
        lhs = product(k)
        if lhs is None:
            rows.append(ProductBoundRow(k=k, lhs=None, rhs=rhs, passed=None))
        else:
            rows.append(ProductBoundRow(k=k, lhs=lhs, rhs=rhs, passed=lhs <= rhs))
    return rows


def fit_product_constant(
    reports: Sequence["RootGeometryReport | ModelSolveReport"],
    k_max: int | None = None,
    d_cap: float = 1e6,
) -> float:
    """Smallest d (to 1e-6 relative) making every product-bound row pass
    across the given reports; the right side is monotone increasing in d."""

    def all_pass(d: float) -> bool:
        for rep in reports:
            for row in product_bound_check(rep, d, k_max=k_max):
                if row.passed is False:
                    return False
        return True

    lo, hi = 0.0, 1.0
    while not all_pass(hi):
        hi *= 2
        if hi > d_cap:
            raise ValueError(f"no d <= {d_cap} satisfies the product bound")
    for _ in range(60):
        mid = (lo + hi) / 2
        if all_pass(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# near-unit-circle threshold classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdClass:
    name: str
    count: int
    max_modulus: float | None
    fitted_C1: float | None
    vacuous: bool = False

    def to_dict(self) -> dict:
        return {
            "class": self.name,
            "count": self.count,
            "max_modulus": self.max_modulus,
            "fitted_C1": self.fitted_C1,
            "vacuous": self.vacuous,
        }


def near_unit_threshold_stats(
    fp: FillingPoly,
    epsilon: float,
    top_row: UniIntPoly | None = None,
    root_set: RootSet | None = None,
    tol: float = 1e-10,
) -> list[ThresholdClass]:
    """Partition the roots by the near-unit hypotheses and report, per class,
    the max modulus and the fitted constant p * (max_modulus - 1).

    Classes: inside the closed unit disk; outside with |t|^p below 1/epsilon;
    outside with t^q at distance > epsilon from every root of the top-row
    polynomial; and the remainder.  When the top row of the source polynomial
    is a single monomial there are no such roots and the third class is
    marked vacuous instead of inventing a convention.
    """
    if fp.degenerate or fp.poly.is_zero or fp.poly.degree < 1:
        raise ZeroPolynomialError("degenerate filling polynomial")
    rs = root_set if root_set is not None else find_roots(squarefree_part(fp.poly), tol=tol)
    p = abs(fp.p) if fp.p else 1
    q = fp.q
    zetas: list[complex] = []
    vacuous = True
    if top_row is not None and top_row.degree >= 1:
        vacuous = False
        zrs = find_roots(top_row, tol=1e-10)
        zetas = [z for z, _ in zrs.roots]
    log_cut = -math.log(epsilon)

    groups: dict[str, list[float]] = {"inside": [], "small_power": [], "far_from_top": [], "near_top": []}
    for z, _ in rs.roots:
        m = abs(z)
        if m <= 1.0:
            groups["inside"].append(m)
            continue
        if p * math.log(m) < log_cut:
            groups["small_power"].append(m)
            continue
        if not vacuous:
            tq = z ** abs(q) if q >= 0 else 1 / (z ** abs(q))
            dist = min(abs(tq - zeta) for zeta in zetas)
            if dist > epsilon:
                groups["far_from_top"].append(m)
                continue
        groups["near_top"].append(m)

    out = []
    for name in ("inside", "small_power", "far_from_top", "near_top"):
        ms = groups[name]
        mx = max(ms) if ms else None
        c1 = p * (mx - 1.0) if (mx is not None and name != "inside") else None
        out.append(
            ThresholdClass(
                name=name,
                count=len(ms),
                max_modulus=mx,
                fitted_C1=c1,
                vacuous=(name == "far_from_top" and vacuous),
            )
        )
    return out
