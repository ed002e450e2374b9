"""Command-line interface: perimeters, area measures, limit sweeps, solvers, presets.

All numeric output is full-precision JSON or CSV; identical invocations
(including seeds) produce byte-identical files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .bodies import GaugeBody, body_from_json, gauge_from_json
from .errors import FracGeoError, InvalidSError, InvalidTargetError
from .fracperim import ps_linesample, ps_montecarlo, ps_xray
from .limits import limit_s0_check
from .measures import area_measure, centroid, identity_asint_check
from .minkowski import (
    MinkowskiProblem,
    isoperimetric_search,
    measure_from_json,
    solve_minkowski,
)
from .presets import PRESETS, run_preset, uniform_fan
from .quadrature import RandomSource, boundary_rule, sphere_rule


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _emit(doc, out_path: str | None) -> None:
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(rows, header, out_path: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating))
                         else v for v in row])
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _check_s(s: float) -> None:
    if not (0.0 < s < 1.0):
        raise _Validation("s must lie in (0, 1)")


class _Validation(Exception):
    pass


def _load_gauge(spec: str, dim: int) -> GaugeBody:
    if spec == "ball":
        return GaugeBody.ball(dim)
    if spec in ("square", "cube"):
        return GaugeBody.cube(dim)
    try:
        return gauge_from_json(spec, dim=dim)
    except (OSError, KeyError, ValueError) as exc:
        raise _Validation(f"cannot read gauge {spec!r}: {exc}") from exc


def _load_body(path: str):
    try:
        return body_from_json(path)
    except (OSError, KeyError, ValueError) as exc:
        raise _Validation(f"cannot read body {path!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fracgeo",
        description="anisotropic fractional perimeters of convex bodies")
    ap.add_argument("--threads", type=int,
                    default=int(os.environ.get("FRACGEO_THREADS", "1")),
                    help="worker threads (computations are vectorized; "
                         "values > 1 are accepted and currently ignored)")
    sub = ap.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("perimeter", help="fractional s-perimeter of a body")
    pp.add_argument("--body", required=True)
    pp.add_argument("--gauge", default="ball")
    pp.add_argument("--s", type=float, required=True)
    pp.add_argument("--route", choices=["xray", "montecarlo", "linesample"],
                    default="xray")
    pp.add_argument("--res", type=int, default=512)
    pp.add_argument("--proj-res", type=int, default=256)
    pp.add_argument("--samples", type=int, default=10 ** 6)
    pp.add_argument("--seed", type=int)
    pp.add_argument("--out")

    pa = sub.add_parser("area-measure", help="fractional area measure atoms")
    pa.add_argument("--body", required=True)
    pa.add_argument("--gauge", default="ball")
    pa.add_argument("--s", type=float, required=True)
    pa.add_argument("--res", type=int, default=512)
    pa.add_argument("--proj-res", type=int, default=512)
    pa.add_argument("--per-facet", type=int, default=64)
    pa.add_argument("--out")

    pl = sub.add_parser("limits", help="s -> 0 facet ratio sweep (CSV)")
    pl.add_argument("--body", required=True)
    pl.add_argument("--gauge", default="ball")
    pl.add_argument("--s-list", required=True,
                    help="comma-separated s values, e.g. 0.3,0.1,0.03")
    pl.add_argument("--res", type=int, default=512)
    pl.add_argument("--per-facet", type=int, default=64)
    pl.add_argument("--out")

    ps = sub.add_parser("solve", help="Minkowski problem for a target measure")
    ps.add_argument("--target", required=True)
    ps.add_argument("--gauge", default="ball")
    ps.add_argument("--s", type=float, required=True)
    ps.add_argument("--res", type=int, default=512)
    ps.add_argument("--per-facet", type=int, default=64)
    ps.add_argument("--trace", action="store_true")
    ps.add_argument("--out")

    pi = sub.add_parser("isoperimetric", help="isoperimetric-ratio minimizer")
    pi.add_argument("--gauge", default="ball")
    pi.add_argument("--s", type=float, required=True)
    pi.add_argument("--fan", type=int, default=64,
                    help="number of uniform normals in the 2-D fan")
    pi.add_argument("--res", type=int, default=512)
    pi.add_argument("--per-facet", type=int, default=64)
    pi.add_argument("--trace", action="store_true")
    pi.add_argument("--out")

    pr = sub.add_parser("preset", help="run a named acceptance preset")
    pr.add_argument("name", choices=sorted(PRESETS))
    pr.add_argument("--out")
    return ap


def _cmd_perimeter(args) -> dict:
    _check_s(args.s)
    K = _load_body(args.body)
    L = _load_gauge(args.gauge, K.dim)
    if args.route == "xray":
        est = ps_xray(K, L, args.s, sphere_rule(K.dim, args.res), args.proj_res)
    else:
        if args.seed is None:
            raise _Validation("Monte-Carlo routes need --seed")
        rng = RandomSource(args.seed)
        if args.route == "montecarlo":
            est = ps_montecarlo(K, L, args.s, args.samples, rng)
        else:
            if args.gauge != "ball":
                raise _Validation("linesample route supports only --gauge ball")
            est = ps_linesample(K, args.s, args.samples, rng)
    return {"value": est.value, "route": est.route, "stderr": est.stderr,
            "cost": est.cost, "s": args.s}


def _cmd_area_measure(args) -> dict:
    _check_s(args.s)
    K = _load_body(args.body)
    L = _load_gauge(args.gauge, K.dim)
    rule = sphere_rule(K.dim, args.res)
    bq = boundary_rule(K, args.per_facet)
    m = area_measure(K, L, args.s, bq, rule)
    return {
        "normals": m.normals, "weights": m.weights, "mass": m.mass,
        "centroid": centroid(m),
        "asint_rel_error": identity_asint_check(K, L, args.s, bq, rule,
                                                args.proj_res),
    }


def _cmd_limits(args):
    try:
        s_list = [float(x) for x in args.s_list.split(",") if x]
    except ValueError as exc:
        raise _Validation(f"bad --s-list: {exc}") from exc
    for s in s_list:
        _check_s(s)
    K = _load_body(args.body)
    L = _load_gauge(args.gauge, K.dim)
    res = limit_s0_check(K, L, s_list, boundary_rule(K, args.per_facet),
                         sphere_rule(K.dim, args.res))
    active = np.flatnonzero(K.facet_areas > 0)
    vol_L = res["vol_L"]
    rows = []
    for row in res["rows"]:
        for j, i in enumerate(active):
            rhs = (K.dim * vol_L / 2.0) * K.facet_areas[i]
            rows.append([row["s"], int(i), float(row["ratio"][j] * rhs), rhs,
                         float(row["ratio"][j])])
    return rows


def _cmd_solve(args) -> dict:
    _check_s(args.s)
    try:
        mu = measure_from_json(args.target)
    except (OSError, KeyError, ValueError) as exc:
        raise _Validation(f"cannot read target {args.target!r}: {exc}") from exc
    L = _load_gauge(args.gauge, mu.dim)
    rep = solve_minkowski(MinkowskiProblem(mu, L, args.s),
                          per_facet=args.per_facet, sphere_res=args.res)
    doc = {"support": rep.solution.support_values, "normals": rep.solution.normals,
           "scale": rep.scale, "residual": rep.residual,
           "iterations": rep.iterations, "diagnostics": rep.diagnostics}
    if args.trace:
        doc["objective_trace"] = rep.objective_trace
    return doc


def _cmd_isoperimetric(args) -> dict:
    _check_s(args.s)
    fan = uniform_fan(args.fan)
    L = _load_gauge(args.gauge, 2)
    rep = isoperimetric_search(L, args.s, fan, per_facet=args.per_facet,
                               sphere_res=args.res)
    doc = {"support": rep.optimizer.support_values, "normals": rep.optimizer.normals,
           "gamma_estimate": rep.gamma_estimate,
           "vtilde_spread": rep.vtilde_spread, "ratio_spread": rep.ratio_spread,
           "iterations": rep.iterations, "diagnostics": rep.diagnostics}
    if args.trace:
        doc["objective_trace"] = rep.objective_trace
    return doc


def _cmd_preset(args) -> dict:
    doc = run_preset(args.name)
    status = "PASS" if doc["pass"] else "FAIL"
    print(f"{status} {doc['criterion']}")
    return doc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "perimeter":
            _emit(_cmd_perimeter(args), args.out)
        elif args.command == "area-measure":
            _emit(_cmd_area_measure(args), args.out)
        elif args.command == "limits":
            _emit_csv(_cmd_limits(args), ["s", "facet", "lhs", "rhs", "ratio"],
                      args.out)
        elif args.command == "solve":
            _emit(_cmd_solve(args), args.out)
        elif args.command == "isoperimetric":
            _emit(_cmd_isoperimetric(args), args.out)
        elif args.command == "preset":
            _emit(_cmd_preset(args), args.out)
        return 0
    except (_Validation, InvalidSError, InvalidTargetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FracGeoError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
