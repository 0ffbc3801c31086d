"""Sweep orchestration: specialize, factor, measure, and persist per-cell records.

A survey walks the coprime pairs of a (p, q) grid, runs the full pipeline
on each cell, and emits flat, diffable outputs: records.csv, records.jsonl,
band.json, plot-data CSVs, and rendered figures.  Cell ordering and all
numeric output are deterministic; worker parallelism never changes bytes.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence

from . import bivar, fill, measure, zfactor
from .errors import InsufficientDataError
from .intpoly import UniIntPoly


@dataclass(frozen=True)
class FactorSummary:
    degree: int
    multiplicity: int
    cyclotomic_order: int | None
    mahler: float
    mahler_error: float

    @property
    def is_cyclotomic(self) -> bool:
        return self.cyclotomic_order is not None

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "multiplicity": self.multiplicity,
            "cyclotomic_order": self.cyclotomic_order,
            "mahler": self.mahler,
            "mahler_error": self.mahler_error,
        }


@dataclass(frozen=True)
class SurveyRecord:
    fixture_name: str
    p: int
    q: int
    sector: str
    collision: bool
    degenerate: bool
    degree_total: int
    t_shift: int
    leading_coeff: int
    term_count: int
    source_terms: int
    predicted_degree: int | None
    factors: tuple[FactorSummary, ...]
    ratios: tuple[float, ...]
    max_modulus: float | None
    fitted_D_cell: float | None
    sector_check: bool | None
    error: str | None = None

    @property
    def max_pq(self) -> int:
        return max(abs(self.p), abs(self.q))

    def to_dict(self) -> dict:
        return {
            "fixture": self.fixture_name,
            "p": self.p,
            "q": self.q,
            "sector": self.sector,
            "collision": self.collision,
            "degenerate": self.degenerate,
            "degree_total": self.degree_total,
            "t_shift": self.t_shift,
            "leading_coeff": str(self.leading_coeff),
            "term_count": self.term_count,
            "source_terms": self.source_terms,
            "predicted_degree": self.predicted_degree,
            "factors": [f.to_dict() for f in self.factors],
            "ratios": list(self.ratios),
            "max_modulus": self.max_modulus,
            "fitted_D_cell": self.fitted_D_cell,
            "sector_check": self.sector_check,
            "error": self.error,
        }


CSV_COLUMNS = [
    "fixture",
    "p",
    "q",
    "sector",
    "collision",
    "degenerate",
    "degree_total",
    "t_shift",
    "leading_coeff",
    "term_count",
    "source_terms",
    "predicted_degree",
    "n_factors",
    "n_cyclotomic",
    "n_non_cyclotomic",
    "min_ratio",
    "max_ratio",
    "max_mahler",
    "max_modulus",
    "fitted_D_cell",
    "sector_check",
    "error",
]


def record_to_row(rec: SurveyRecord) -> list[str]:
    noncyc = [f for f in rec.factors if not f.is_cyclotomic]
    def fmt(x):
        if x is None:
            return ""
        if isinstance(x, bool):
            return "1" if x else "0"
        if isinstance(x, float):
            return repr(x)
        return str(x)
    return [
        fmt(v)
        for v in [
            rec.fixture_name,
            rec.p,
            rec.q,
            rec.sector,
            rec.collision,
            rec.degenerate,
            rec.degree_total,
            rec.t_shift,
            rec.leading_coeff,
            rec.term_count,
            rec.source_terms,
            rec.predicted_degree,
            len(rec.factors),
            sum(1 for f in rec.factors if f.is_cyclotomic),
            len(noncyc),
            min(rec.ratios) if rec.ratios else None,
            max(rec.ratios) if rec.ratios else None,
            max((f.mahler for f in noncyc), default=None),
            rec.max_modulus,
            rec.fitted_D_cell,
            rec.sector_check,
            rec.error,
        ]
    ]


@dataclass(frozen=True)
class SweepPlan:
    fixture_name: str
    terms: tuple[tuple[tuple[int, int], int], ...]  # picklable polynomial
    p_values: tuple[int, ...]
    q_values: tuple[int, ...]
    sector_aware: bool = False
    jobs: int = 1
    mahler_tol: float = 1e-8
    root_tol: float = 1e-10
    force: bool = False

    @classmethod
    def build(
        cls,
        poly: bivar.BivarLaurentPoly,
        name: str,
        p_range: Iterable[int],
        q_range: Iterable[int],
        **kw,
    ) -> "SweepPlan":
        p_values = tuple(sorted(set(p_range)))
        q_values = tuple(sorted(set(q_range)))
        if not p_values or not q_values:
            raise ValueError("empty sweep ranges")
        return cls(
            fixture_name=name,
            terms=tuple(sorted(poly.terms.items())),
            p_values=p_values,
            q_values=q_values,
            **kw,
        )

    def poly(self) -> bivar.BivarLaurentPoly:
        return bivar.BivarLaurentPoly(dict(self.terms))

    def cells(self) -> list[tuple[int, int]]:
        """Coprime pairs, identified under (p, q) ~ (-p, -q), sorted."""
        seen = set()
        for p in self.p_values:
            for q in self.q_values:
                if (p, q) == (0, 0) or gcd(abs(p), abs(q)) != 1:
                    continue
                seen.add(fill.canonical_pair(p, q))
        return sorted(seen)


# per-process cache of fixture-level data (polygon, transforms)
_fixture_cache: dict = {}


def _fixture_data(terms: tuple) -> tuple:
    got = _fixture_cache.get(terms)
    if got is None:
        f = bivar.BivarLaurentPoly(dict(terms))
        np_ = bivar.newton_polygon(f)
        transforms = fill.sector_transform(f, np_)
        top_row = _top_row_poly(f, np_)
        got = (f, np_, transforms, top_row)
        _fixture_cache[terms] = got
    return got


def _top_row_poly(f: bivar.BivarLaurentPoly, np_: bivar.NewtonPolygon) -> UniIntPoly | None:
    """Row polynomial of the top row, read with decreasing i (roots are the
    values approached by t^q at large roots); None for a single monomial."""
    n = np_.top_row
    a_n, b_n = np_.row_data[n]
    if a_n == b_n:
        return None
    coeffs = [f.coeff(b_n - k, n) for k in range(b_n - a_n + 1)]
    return UniIntPoly(coeffs)


def _sector_label(slope: fill.FillingSlope) -> str:
    sec = slope.sector
    if sec is None:
        return ""
    if sec.kind == "between":
        return f"between:{sec.edge_index}"
    return sec.kind


def _factor_degree_multiset(poly: UniIntPoly) -> list[tuple[int, int]]:
    fac = zfactor.factor(poly)
    out: list[tuple[int, int]] = []
    for g, m in fac.factors:
        out.append((g.degree, m))
    return sorted(out)


def survey_cell(plan: SweepPlan, p: int, q: int) -> SurveyRecord:
    """Full pipeline on one coprime pair; never raises on numeric trouble."""
    f, np_, transforms, _ = _fixture_data(plan.terms)
    slope = fill.classify_slope(np_, p, q)
    fp = fill.specialize(f, slope)
    sector = _sector_label(slope)

    predicted = None
    if not fp.collision_flag:
        lin = [-q * i + p * j for (i, j) in np_.corners]
        predicted = max(lin) - min(lin)

    if fp.degenerate:
        return SurveyRecord(
            fixture_name=plan.fixture_name, p=slope.p, q=slope.q, sector=sector,
            collision=True, degenerate=True, degree_total=-1, t_shift=fp.t_shift,
            leading_coeff=0, term_count=0, source_terms=fp.source_terms,
            predicted_degree=predicted, factors=(), ratios=(), max_modulus=None,
            fitted_D_cell=None, sector_check=None, error="degenerate specialization",
        )

    try:
        fac = zfactor.factor_split(fp.poly)
    except Exception as exc:  # recorded, never aborts the sweep
        return SurveyRecord(
            fixture_name=plan.fixture_name, p=slope.p, q=slope.q, sector=sector,
            collision=fp.collision_flag, degenerate=False,
            degree_total=fp.poly.degree, t_shift=fp.t_shift,
            leading_coeff=fp.leading_coeff, term_count=fp.term_count,
            source_terms=fp.source_terms, predicted_degree=predicted,
            factors=(), ratios=(), max_modulus=None, fitted_D_cell=None,
            sector_check=None, error=f"factor: {exc}",
        )

    summaries: list[FactorSummary] = []
    moduli: list[float] = []
    error = None
    for idx, (g, mult) in enumerate(fac.factors):
        order = fac.cyclotomic_orders.get(idx)
        if order is not None:
            summaries.append(FactorSummary(g.degree, mult, order, 1.0, 0.0))
            moduli.extend([1.0] * g.degree)
            continue
        value, err = _irreducible_mahler(g, plan.root_tol, plan.mahler_tol)
        rs = find_cached_roots(g, plan.root_tol)
        if not rs.converged:
            error = "roots: non-convergence"
        moduli.extend(rs.moduli())
        summaries.append(FactorSummary(g.degree, mult, None, value, err))

    denom = max(abs(slope.q), 1)
    max_modulus = max(moduli) if moduli else None
    ratios = tuple(
        s.degree / max(abs(slope.p), abs(slope.q))
        for s in summaries
        if not s.is_cyclotomic
    )

    sector_check = None
    if plan.sector_aware and slope.sector and slope.sector.kind in ("between", "below_all"):
        tr = fill.transform_for_sector(transforms, slope)
        pp, qq = tr.map_pair(slope.p, slope.q)
        if (pp, qq) != (0, 0):
            fp2 = fill.specialize(tr.transformed, (pp, qq))
            if not fp2.degenerate:
                sector_check = _factor_degree_multiset(fp.poly) == _factor_degree_multiset(fp2.poly)

    return SurveyRecord(
        fixture_name=plan.fixture_name,
        p=slope.p,
        q=slope.q,
        sector=sector,
        collision=fp.collision_flag,
        degenerate=False,
        degree_total=fp.poly.degree,
        t_shift=fp.t_shift,
        leading_coeff=fp.leading_coeff,
        term_count=fp.term_count,
        source_terms=fp.source_terms,
        predicted_degree=predicted,
        factors=tuple(summaries),
        ratios=ratios,
        max_modulus=max_modulus,
        fitted_D_cell=(denom * (max_modulus - 1.0)) if max_modulus is not None else None,
        sector_check=sector_check,
        error=error,
    )


_root_cache: dict = {}


def find_cached_roots(g: UniIntPoly, tol: float) -> measure.RootSet:
    key = (g.coeffs, tol)
    got = _root_cache.get(key)
    if got is None:
        got = measure.find_roots(g, tol=tol)
        if len(_root_cache) > 4096:
            _root_cache.clear()
        _root_cache[key] = got
    return got


def _irreducible_mahler(g: UniIntPoly, root_tol: float, tol: float) -> tuple[float, float]:
    lc = abs(g.leading)
    rt = root_tol
    for _ in range(6):
        rs = find_cached_roots(g, rt)
        lo = hi = float(lc)
        for z, r in rs.roots:
            m = abs(z)
            lo *= max(m - r, 1.0)
            hi *= max(m + r, 1.0)
        err = (hi - lo) / 2
        if err <= tol or not rs.converged:
            return (hi + lo) / 2, err
        rt /= 1e4
    return (hi + lo) / 2, err


def _cell_runner(args) -> SurveyRecord:
    plan, p, q = args
    return survey_cell(plan, p, q)


def run_survey(plan: SweepPlan, validate: bool = True) -> list[SurveyRecord]:
    """Run the pipeline over every coprime cell of the plan, sorted by (p, q).

    The fixture is validated first unless plan.force is set; validation
    failure raises, since sweeping a non-A-polynomial is usually a mistake.
    """
    f = plan.poly()
    if validate and not plan.force:
        report = bivar.validate_apoly(f)
        if not report.all_passed:
            raise ValueError(
                f"fixture {plan.fixture_name!r} fails validation: {report.to_dict()}; "
                f"pass force=True to sweep anyway"
            )
    cells = plan.cells()
    if plan.jobs > 1:
        with ProcessPoolExecutor(max_workers=plan.jobs) as pool:
            records = list(pool.map(_cell_runner, [(plan, p, q) for p, q in cells], chunksize=8))
    else:
        records = [survey_cell(plan, p, q) for p, q in cells]
    records.sort(key=lambda r: (r.p, r.q))
    return records


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeBand:
    c1_hat: float
    c2_hat: float
    n_factors: int
    n_cells: int
    per_sector: dict[str, tuple[float, float]]
    trend_flag: bool
    low_half_min: float | None
    high_half_min: float | None

    def to_dict(self) -> dict:
        return {
            "c1_hat": self.c1_hat,
            "c2_hat": self.c2_hat,
            "n_factors": self.n_factors,
            "n_cells": self.n_cells,
            "per_sector": {k: list(v) for k, v in self.per_sector.items()},
            "trend_flag": self.trend_flag,
            "low_half_min": self.low_half_min,
            "high_half_min": self.high_half_min,
        }


def degree_band(records: Sequence[SurveyRecord]) -> DegreeBand:
    """Empirical band for deg(g) / max(|p|, |q|) over non-cyclotomic factors.

    Also compares the minimum ratio on the small-max{|p|,|q|} half of the
    sweep against the large half; a drop of more than half flags a downward
    trend, which the conditional degree bound forbids.
    """
    ratios: list[tuple[int, float, str]] = []
    cells = 0
    for rec in records:
        if rec.ratios:
            cells += 1
            for r in rec.ratios:
                ratios.append((rec.max_pq, r, rec.sector))
    if cells < 5:
        raise InsufficientDataError(
            f"need at least 5 records with non-cyclotomic factors, have {cells}"
        )
    values = [r for _, r, _ in ratios]
    c1, c2 = min(values), max(values)
    per_sector: dict[str, tuple[float, float]] = {}
    for _, r, sec in ratios:
        if sec in per_sector:
            lo, hi = per_sector[sec]
            per_sector[sec] = (min(lo, r), max(hi, r))
        else:
            per_sector[sec] = (r, r)
    cut = max(m for m, _, _ in ratios) / 2
    low = [r for m, r, _ in ratios if m <= cut]
    high = [r for m, r, _ in ratios if m > cut]
    low_min = min(low) if low else None
    high_min = min(high) if high else None
    trend = bool(low and high and high_min < low_min / 2)
    return DegreeBand(
        c1_hat=c1,
        c2_hat=c2,
        n_factors=len(ratios),
        n_cells=cells,
        per_sector=per_sector,
        trend_flag=trend,
        low_half_min=low_min,
        high_half_min=high_min,
    )


def sector_survey(plan: SweepPlan, validate: bool = True) -> list[SurveyRecord]:
    """run_survey with the basis-change cross-check switched on."""
    aware = SweepPlan(
        fixture_name=plan.fixture_name,
        terms=plan.terms,
        p_values=plan.p_values,
        q_values=plan.q_values,
        sector_aware=True,
        jobs=plan.jobs,
        mahler_tol=plan.mahler_tol,
        root_tol=plan.root_tol,
        force=plan.force,
    )
    return run_survey(aware, validate=validate)


@dataclass(frozen=True)
class ModulusBoundFit:
    fitted_D: float
    train_cells: int
    validate_cells: int
    violations: tuple[tuple[int, int, float], ...]  # (p, q, max_modulus)
    pass_fraction: float

    def to_dict(self) -> dict:
        return {
            "fitted_D": self.fitted_D,
            "train_cells": self.train_cells,
            "validate_cells": self.validate_cells,
            "violations": [list(v) for v in self.violations],
            "pass_fraction": self.pass_fraction,
        }


def fit_modulus_bound(records: Sequence[SurveyRecord]) -> ModulusBoundFit:
    """Fit D on an interleaved training half (above-top-slope cells) and
    check max|root| <= 1 + D/q on the held-out half."""
    cells = [
        r
        for r in records
        if r.sector == "above_top" and r.max_modulus is not None and r.q > 0
    ]
    if len(cells) < 4:
        raise InsufficientDataError("need at least 4 above-top-slope cells")
    cells.sort(key=lambda r: (r.max_pq, r.p, r.q))
    train = cells[0::2]
    hold = cells[1::2]
    D = max(r.q * (r.max_modulus - 1.0) for r in train)
    D = max(D, 0.0)
    violations = tuple(
        (r.p, r.q, r.max_modulus)
        for r in hold
        if r.max_modulus > 1.0 + D / r.q + 1e-12
    )
    frac = 1.0 - len(violations) / len(hold) if hold else 1.0
    return ModulusBoundFit(
        fitted_D=D,
        train_cells=len(train),
        validate_cells=len(hold),
        violations=violations,
        pass_fraction=frac,
    )


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def write_records_csv(records: Sequence[SurveyRecord], path: Path) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        lines.append(",".join(record_to_row(rec)))
    path.write_text("\n".join(lines) + "\n")


def write_records_jsonl(records: Sequence[SurveyRecord], path: Path) -> None:
    with path.open("w") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")


PLOT_KINDS = ("ratio_vs_max", "modulus_vs_q", "measure_hist")


def emit_plotdata(records: Sequence[SurveyRecord], kind: str) -> list[list]:
    """Stable-schema rows (header first) for external plotting."""
    if kind == "ratio_vs_max":
        rows: list[list] = [["p", "q", "max_pq", "deg_g", "ratio"]]
        for rec in records:
            noncyc = [f for f in rec.factors if not f.is_cyclotomic]
            for f in noncyc:
                rows.append([rec.p, rec.q, rec.max_pq, f.degree, repr(f.degree / rec.max_pq)])
        return rows
    if kind == "modulus_vs_q":
        rows = [["p", "q", "max_pq", "max_modulus", "fitted_D_cell"]]
        for rec in records:
            if rec.max_modulus is not None:
                rows.append(
                    [rec.p, rec.q, rec.max_pq, repr(rec.max_modulus), repr(rec.fitted_D_cell)]
                )
        return rows
    if kind == "measure_hist":
        rows = [["p", "q", "deg_g", "mahler", "mahler_error"]]
        for rec in records:
            for f in rec.factors:
                if not f.is_cyclotomic:
                    rows.append([rec.p, rec.q, f.degree, repr(f.mahler), repr(f.mahler_error)])
        return rows
    raise ValueError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")


def write_plotdata_csv(records: Sequence[SurveyRecord], kind: str, path: Path) -> None:
    rows = emit_plotdata(records, kind)
    path.write_text("\n".join(",".join(str(v) for v in row) for row in rows) + "\n")


def write_outputs(
    records: Sequence[SurveyRecord],
    out_dir: Path,
    figures: bool = True,
) -> dict[str, Path]:
    """Write records.csv/.jsonl, band.json, plot CSVs, and figures."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}
    paths["records_csv"] = out_dir / "records.csv"
    write_records_csv(records, paths["records_csv"])
    paths["records_jsonl"] = out_dir / "records.jsonl"
    write_records_jsonl(records, paths["records_jsonl"])

    band_doc: dict = {}
    try:
        band_doc["degree_band"] = degree_band(records).to_dict()
    except InsufficientDataError as exc:
        band_doc["degree_band"] = {"error": str(exc)}
    try:
        band_doc["modulus_bound"] = fit_modulus_bound(records).to_dict()
    except InsufficientDataError as exc:
        band_doc["modulus_bound"] = {"error": str(exc)}
    paths["band_json"] = out_dir / "band.json"
    paths["band_json"].write_text(json.dumps(band_doc, indent=2, sort_keys=True) + "\n")

    for kind in PLOT_KINDS:
        p = out_dir / f"plot_{kind}.csv"
        write_plotdata_csv(records, kind, p)
        paths[f"plot_{kind}_csv"] = p
    if figures:
        from . import plots

        for kind in PLOT_KINDS:
            p = out_dir / f"plot_{kind}.png"
            plots.render(records, kind, p)
            paths[f"plot_{kind}_png"] = p
    return paths
