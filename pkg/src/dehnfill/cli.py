"""Command line interface.

Subcommands mirror the library surface: newton, validate, specialize,
factor, mahler, roots, model, survey.  A config file (TOML or JSON) can
supply defaults for any long flag of any subcommand; explicit flags win.
The DEHNFILL_BITS environment variable sets a precision floor for the
numeric root finder.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bivar, fill, lab, measure, rootmodel, zfactor
from .errors import DehnfillError
from .intpoly import UniIntPoly


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    text = p.read_text()
    if p.suffix in (".toml", ".tml"):
        try:
            import tomllib  # py311+
        except ImportError:
            import tomli as tomllib
        return tomllib.loads(text)
    return json.loads(text)


def _parse_range(text: str) -> list[int]:
    """'1..60' or '3' or '1,2,5..9'."""
    out: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            a, b = chunk.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(chunk))
    return out


def _read_poly_arg(arg: str) -> UniIntPoly:
    """Inline coefficient list 'c0,c1,...', human syntax, or a file of either."""
    p = Path(arg)
    text = p.read_text().strip() if p.is_file() else arg
    try:
        return UniIntPoly([int(c) for c in text.replace(",", " ").split()])
    except ValueError:
        return UniIntPoly.parse(text)


def _fixture_poly(arg: str) -> tuple[bivar.BivarLaurentPoly, str]:
    p = Path(arg)
    if p.is_file():
        doc = json.loads(p.read_text())
        return bivar.parse(p), doc.get("name", p.stem)
    bundled = Path(__file__).parent / "fixtures" / f"{arg}.json"
    if bundled.is_file():
        return bivar.parse(bundled), arg
    return bivar.parse(arg), "inline"


def _emit(doc, pretty: bool) -> None:
    if pretty:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    else:
        json.dump(doc, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _cmd_newton(args) -> int:
    f, _ = _fixture_poly(args.fixture)
    g, _ = bivar.normalize(f)
    np_ = bivar.newton_polygon(g)
    doc = {
        "corners": [list(c) for c in np_.corners],
        "top_slope": [np_.top_slope.numerator, np_.top_slope.denominator]
        if np_.top_slope is not None
        else None,
        "row_data": {str(j): list(v) for j, v in sorted(np_.row_data.items())},
        "edges": [
            {
                "start": list(e.start),
                "end": list(e.end),
                "slope": [e.slope.numerator, e.slope.denominator] if e.slope is not None else None,
                "edge_polynomial": [str(c) for c in bivar.edge_polynomial(g, e).coeffs],
            }
            for e in np_.edges
        ],
    }
    _emit(doc, args.pretty)
    return 0


def _cmd_validate(args) -> int:
    f, _ = _fixture_poly(args.fixture)
    report = bivar.validate_apoly(f)
    _emit(report.to_dict(), args.pretty)
    return 0 if report.all_passed else 1


def _cmd_specialize(args) -> int:
    f, _ = _fixture_poly(args.fixture)
    g, _ = bivar.normalize(f)
    fp = fill.specialize(g, (args.p, args.q))
    doc = {
        "coeffs": [str(c) for c in fp.poly.coeffs],
        "t_shift": fp.t_shift,
        "sign": fp.sign,
        "collision": fp.collision_flag,
        "degenerate": fp.degenerate,
    }
    if args.raw:
        doc["raw"] = fp.poly.to_text()
    _emit(doc, args.pretty)
    return 0


def _cmd_factor(args) -> int:
    f = _read_poly_arg(args.poly)
    fac = zfactor.factor_split(f)
    doc = {
        "unit": fac.unit,
        "content": str(fac.content),
        "t_power": fac.t_power,
        "factors": [
            {
                "coeffs": [str(c) for c in g.coeffs],
                "multiplicity": m,
                "cyclotomic_order": fac.cyclotomic_orders.get(i),
                "text": g.to_text(),
            }
            for i, (g, m) in enumerate(fac.factors)
        ],
    }
    _emit(doc, args.pretty)
    return 0


def _cmd_mahler(args) -> int:
    f = _read_poly_arg(args.poly)
    if args.bits:
        import os

        os.environ["DEHNFILL_BITS"] = str(args.bits)
    if args.method == "graeffe":
        est = measure.mahler_graeffe(f, args.iterations)
    else:
        est = measure.mahler(f, tol=args.tol, method=args.method)
    doc = {
        "value": est.value,
        "abs_error": est.abs_error,
        "method": est.method,
        "length": measure.poly_length(f),
    }
    _emit(doc, args.pretty)
    return 0


def _cmd_roots(args) -> int:
    f, _ = _fixture_poly(args.fixture)
    g, _ = bivar.normalize(f)
    fp = fill.specialize(g, (args.p, args.q))
    rep = rootmodel.root_geometry(fp)
    doc = rep.to_dict()
    if args.eps is not None:
        np_ = bivar.newton_polygon(g)
        top = lab._top_row_poly(g, np_)
        doc["threshold_classes"] = [
            c.to_dict() for c in rootmodel.near_unit_threshold_stats(fp, args.eps, top_row=top)
        ]
    _emit(doc, args.pretty)
    return 0


def _cmd_model(args) -> int:
    rep = rootmodel.solve_model(args.p, args.q, args.eps)
    doc = rep.to_dict()
    if args.fit_d:
        doc["fitted_d"] = rootmodel.fit_product_constant([rep])
        doc["product_rows"] = [
            r.to_dict() for r in rootmodel.product_bound_check(rep, doc["fitted_d"])
        ]
    _emit(doc, args.pretty)
    return 0


def _cmd_survey(args) -> int:
    f, name = _fixture_poly(args.fixture)
    g, _ = bivar.normalize(f)
    plan = lab.SweepPlan.build(
        g,
        name,
        p_range=_parse_range(args.p),
        q_range=_parse_range(args.q),
        sector_aware=args.sector_aware,
        jobs=args.jobs,
        force=args.force,
    )
    records = lab.run_survey(plan)
    out = Path(args.output)
    paths = lab.write_outputs(records, out, figures=not args.no_figures)
    summary = {"cells": len(records), "outputs": {k: str(v) for k, v in sorted(paths.items())}}
    _emit(summary, args.pretty)
    return 0


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    ap = argparse.ArgumentParser(
        prog="dehnfill",
        description="Dehn-filling polynomials: factorization, Mahler measures, root surveys",
    )
    ap.add_argument("--config", help="TOML or JSON file with per-subcommand defaults")
    sub = ap.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}

    def common(sp):
        sp.add_argument("--pretty", action="store_true", help="indent JSON output")

    sp = registry["newton"] = sub.add_parser("newton", help="Newton polygon of a fixture")
    sp.add_argument("fixture")
    common(sp)
    sp.set_defaults(func=_cmd_newton)

    sp = registry["validate"] = sub.add_parser("validate", help="structural A-polynomial checks")
    sp.add_argument("fixture")
    common(sp)
    sp.set_defaults(func=_cmd_validate)

    sp = registry["specialize"] = sub.add_parser("specialize", help="filling polynomial at (p, q)")
    sp.add_argument("fixture")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("--raw", action="store_true", help="include human-readable polynomial")
    common(sp)
    sp.set_defaults(func=_cmd_specialize)

    sp = registry["factor"] = sub.add_parser("factor", help="factor an integer polynomial")
    sp.add_argument("poly", help="coefficient list 'c0,c1,...', polynomial text, or file")
    common(sp)
    sp.set_defaults(func=_cmd_factor)

    sp = registry["mahler"] = sub.add_parser("mahler", help="Mahler measure and length")
    sp.add_argument("poly")
    sp.add_argument("--method", choices=["roots", "graeffe", "both"], default="roots")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--iterations", type=int, default=16, help="graeffe squaring count")
    sp.add_argument("--bits", type=int, default=0, help="precision floor for root finding")
    common(sp)
    sp.set_defaults(func=_cmd_mahler)

    sp = registry["roots"] = sub.add_parser("roots", help="root geometry of a filling polynomial")
    sp.add_argument("fixture")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("--eps", type=float, default=None, help="near-unit threshold classes")
    common(sp)
    sp.set_defaults(func=_cmd_roots)

    sp = registry["model"] = sub.add_parser("model", help="solve z^q (1+z)^p = 1 near z = 0")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--fit-d", action="store_true", help="fit the product-bound constant")
    common(sp)
    sp.set_defaults(func=_cmd_model)

    sp = registry["survey"] = sub.add_parser("survey", help="sweep a coprime (p, q) grid")
    sp.add_argument("fixture")
    sp.add_argument("--p", required=True, help="range like 1..60 or list 1,3,9")
    sp.add_argument("--q", required=True, help="range like 1..12")
    sp.add_argument("--sector-aware", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--force", action="store_true", help="sweep even if validation fails")
    sp.add_argument("--no-figures", action="store_true")
    sp.add_argument("-o", "--output", default="out")
    common(sp)
    sp.set_defaults(func=_cmd_survey)
    return ap, registry


def main(argv: list[str] | None = None) -> int:
    ap, registry = build_parser()
    peek = argparse.ArgumentParser(add_help=False)
    peek.add_argument("--config")
    pre, _ = peek.parse_known_args(argv)
    config = _load_config(pre.config)
    for command, section in config.items():
        sp = registry.get(command)
        if sp is not None and isinstance(section, dict):
            sp.set_defaults(**{k.replace("-", "_"): v for k, v in section.items()})
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except DehnfillError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
