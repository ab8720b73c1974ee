"""Command line front end.

Exit codes: 0 when every check passes, 2 when a check fails, 1 on usage
errors (message on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .catalog import catalog_get, catalog_json
from .curves import SolitonCurve, classify_family, icsf_residual, sample_curve
from .errors import BadParams, ConvexityLost, SolitonError, UnknownName
from .export import curve_csv, curve_samples, curve_svg, flow_csv, flow_svg_frames, report_csv, report_json
from .flow import (
    FlowState,
    circle_polygon,
    ellipse_polygon,
    flow_convex_curve,
    homothety_deviation,
    isoperimetric_ratio,
)
from .geometry import geometry_batch
from .lagrangian import (
    J,
    angle_gradient_fd,
    equivariant_soliton,
    lagrangian_angle,
    lagrangian_residual,
    legendrian_residual,
    legendrian_sphere,
    legendrian_torus,
    pseudoumbilical_residual,
    root_curve,
)
from .verifier import sample_grid, scan

RESIDUAL_TOL = 1e-8
LEMMA_TOL = 1e-4
ICSF_TOL = 1e-10
PSEUDO_TOL = 1e-9
LAGRANGIAN_TOL = 1e-8
ANGLE_TOL = 1e-5
HOMOTHETY_TOL = 1e-3

ENTITY_PARAMS = ("n", "n1", "n2", "k", "R", "half_length")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _grid(text: str):
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be an integer or comma list, got {text!r}") from None
    if min(parts) < 1:
        raise argparse.ArgumentTypeError("grid counts must be positive")
    return parts[0] if len(parts) == 1 else parts


def _entity_args(p):
    p.add_argument("name")
    p.add_argument("--n", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--R", type=float)
    p.add_argument("--half-length", type=float)
    p.add_argument("--curve-a", type=float, help="velocity of the curve factor (curve_cylinder; defaults to --a)")
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="imcf-solitons", description="Homothetic IMCF soliton checks and fixtures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    cat = sub.add_parser("catalog", help="catalog listing")
    cat_sub = cat.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cat_sub.add_parser("list", help="print the catalog as JSON")

    ver = sub.add_parser("verify", help="scan a catalog entry against the soliton equation")
    _entity_args(ver)
    ver.add_argument("--a", type=float, required=True)
    ver.add_argument("--grid", type=_grid, default=16)
    ver.add_argument("--tol", type=float, default=RESIDUAL_TOL)
    ver.add_argument("--lemma-tol", type=float, default=LEMMA_TOL)
    ver.add_argument("--format", choices=("json", "csv"), default="json")
    ver.add_argument("--out", type=Path)

    cur = sub.add_parser("curve", help="soliton curves")
    cur_sub = cur.add_subparsers(dest="action", required=True, parser_class=_Parser)
    gen = cur_sub.add_parser("gen", help="sample a family member")
    gen.add_argument("--a", type=float, required=True)
    gen.add_argument("--c1", type=float, required=True)
    gen.add_argument("--c2", type=float, required=True)
    gen.add_argument("--theta-min", type=float, required=True)
    gen.add_argument("--theta-max", type=float, required=True)
    gen.add_argument("--samples", type=int, default=2001)
    gen.add_argument("--format", choices=("csv", "svg"))
    gen.add_argument("--out", type=Path)

    lag = sub.add_parser("lagrangian", help="Lagrangian and Legendrian checks")
    lag_sub = lag.add_subparsers(dest="action", required=True, parser_class=_Parser)
    chk = lag_sub.add_parser("check", help="Kaehler form residual and H = J grad(theta)")
    _entity_args(chk)
    chk.add_argument("--a", type=float, help="velocity for curve_cylinder")
    chk.add_argument("--grid", type=_grid, default=8)
    chk.add_argument("--out", type=Path)

    pse = sub.add_parser("pseudo", help="pseudoumbilical constructions")
    pse_sub = pse.add_subparsers(dest="action", required=True, parser_class=_Parser)
    bld = pse_sub.add_parser("build", help="equivariant soliton from the n-th root of a soliton curve")
    bld.add_argument("--a", type=float, required=True)
    bld.add_argument("--n", type=int, required=True)
    bld.add_argument("--c1", type=float, required=True)
    bld.add_argument("--c2", type=float, required=True)
    bld.add_argument("--theta-min", type=float)
    bld.add_argument("--theta-max", type=float)
    bld.add_argument("--grid", type=_grid, default=16)
    bld.add_argument("--out", type=Path)

    flo = sub.add_parser("flow", help="IMCF of convex curves")
    flo_sub = flo.add_subparsers(dest="action", required=True, parser_class=_Parser)
    run = flo_sub.add_parser("run", help="flow a circle or an ellipse")
    run.add_argument("--shape", choices=("circle", "ellipse"), required=True)
    run.add_argument("--dt", type=float, required=True)
    run.add_argument("--T", type=float, required=True)
    run.add_argument("--vertices", type=int, default=512)
    run.add_argument("--radius", type=float, default=1.0)
    run.add_argument("--aspect", type=float, default=1.2, help="ellipse axis ratio")
    run.add_argument("--snapshots", type=int, default=10, help="number of snapshots after t = 0")
    run.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    run.add_argument("--out", type=Path)
    return parser


# helpers -------------------------------------------------------------------


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _entity(args, velocity=None):
    params = {k: getattr(args, k) for k in ENTITY_PARAMS if getattr(args, k) is not None}
    if args.name == "curve_cylinder":
        params.pop("R", None)
        curve_a = args.curve_a if args.curve_a is not None else velocity
        if curve_a is None:
            raise BadParams("curve_cylinder needs --curve-a or --a")
        params["a"] = curve_a
        params["c1"] = 1.0 if args.c1 is None else args.c1
        params["c2"] = 0.0 if args.c2 is None else args.c2
    if args.name in ("legendrian_sphere", "legendrian_torus"):
        n = params.get("n", 2 if args.name == "legendrian_sphere" else 3)
        psi = (legendrian_sphere if args.name == "legendrian_sphere" else legendrian_torus)(n)
        return psi.immersion, None
    return catalog_get(args.name, **params)


def _fail(msg: str) -> int:
    print(f"check failed: {msg}", file=sys.stderr)
    return 2


# subcommands ---------------------------------------------------------------


def cmd_catalog(args) -> int:
    sys.stdout.write(catalog_json() + "\n")
    return 0


def cmd_verify(args) -> int:
    imm, _ = _entity(args, args.a)
    report = scan(imm, args.a, args.grid, keep_samples=args.format == "csv")
    _emit(report_json(report) if args.format == "json" else report_csv(report), args.out)
    if not report.max_residual < args.tol:
        return _fail(f"max_residual {report.max_residual:.3e} >= {args.tol:g}")
    if not report.lemma_b_max_dev < args.lemma_tol:
        return _fail(f"lemma_b_max_dev {report.lemma_b_max_dev:.3e} >= {args.lemma_tol:g}")
    return 0


def cmd_curve(args) -> int:
    sc = SolitonCurve(args.a, args.c1, args.c2)
    if not args.theta_max > args.theta_min:
        raise UsageError("--theta-max must exceed --theta-min")
    fmt = args.format or ("svg" if args.out is not None and args.out.suffix == ".svg" else "csv")
    cj = curve_samples(sc, args.theta_min, args.theta_max, args.samples)
    tag = classify_family(sc.a, sc.c1, sc.c2)
    if fmt == "svg":
        _emit(curve_svg(cj, title=f"{tag} a={sc.a:g} c1={sc.c1:g} c2={sc.c2:g}"), args.out)
    else:
        _emit(curve_csv(cj), args.out)
    regular = ~cj.cusp
    sub = sample_curve(sc, cj.theta[regular])
    worst = float(np.max(icsf_residual(sub, sc.a))) if regular.any() else 0.0
    # both terms scale like |alpha'|
    scale = max(1.0, float(np.max(np.abs(sub.dz)))) if regular.any() else 1.0
    if not worst <= ICSF_TOL * scale:
        return _fail(f"icsf residual {worst:.3e}")
    return 0


def cmd_lagrangian(args) -> int:
    imm, _ = _entity(args, args.a)
    result = {"name": imm.name}
    if args.name in ("legendrian_sphere", "legendrian_torus"):
        res = legendrian_residual(imm, args.grid)
        result["legendrian_residual"] = res
        _emit(_json(result), args.out)
        return 0 if res < LAGRANGIAN_TOL else _fail(f"legendrian residual {res:.3e}")
    if imm.ambient_dim != 2 * imm.intrinsic_dim:
        result["lagrangian"] = False
        result["reason"] = "ambient dimension is not twice the intrinsic dimension"
        _emit(_json(result), args.out)
        return _fail(result["reason"])
    res = lagrangian_residual(imm, args.grid)
    result["lagrangian_residual"] = res
    result["lagrangian"] = res < LAGRANGIAN_TOL
    if not result["lagrangian"]:
        _emit(_json(result), args.out)
        return _fail(f"Kaehler form residual {res:.3e}")
    counts = (args.grid,) * imm.intrinsic_dim if np.isscalar(args.grid) else tuple(args.grid)
    u = sample_grid(imm.domain, counts).reshape(-1, imm.intrinsic_dim)
    gs, bad = geometry_batch(imm.jet(u))
    u, H = u[~bad], gs.H[~bad]
    scale = np.maximum(1.0, np.linalg.norm(H, axis=-1))
    theta, jgrad = lagrangian_angle(imm, u)
    fd = angle_gradient_fd(imm, u)
    result["angle_exact_gap"] = float(np.max(np.linalg.norm(jgrad - H, axis=-1) / scale))
    result["angle_fd_gap"] = float(np.max(np.linalg.norm(fd + J(H), axis=-1) / scale))
    _emit(_json(result), args.out)
    if max(result["angle_exact_gap"], result["angle_fd_gap"]) >= ANGLE_TOL:
        return _fail("H differs from J grad(theta)")
    return 0


def cmd_pseudo(args) -> int:
    theta_range = None
    if args.theta_min is not None or args.theta_max is not None:
        if args.theta_min is None or args.theta_max is None or not args.theta_max > args.theta_min:
            raise UsageError("give both --theta-min < --theta-max or neither")
        theta_range = (args.theta_min, args.theta_max)
    if args.n < 2:
        raise BadParams("pseudo build needs n >= 2")
    imm = equivariant_soliton(args.n, args.a, args.c1, args.c2, theta_range)
    report = scan(imm, args.a, args.grid)
    dom = imm.domain[0]
    theta = np.linspace(dom.lo, dom.hi, 4097)
    beta = sample_curve(SolitonCurve(args.n * args.a, args.c1, args.c2), theta)
    alpha = root_curve(beta, args.n)
    pseudo = pseudoumbilical_residual(alpha, args.n, args.a)
    _emit(report_json(report, {"name": imm.name, "pseudoumbilical_residual": pseudo}), args.out)
    if not report.max_residual < RESIDUAL_TOL:
        return _fail(f"max_residual {report.max_residual:.3e}")
    if not report.lemma_b_max_dev < LEMMA_TOL:
        return _fail(f"lemma_b_max_dev {report.lemma_b_max_dev:.3e}")
    if not pseudo < PSEUDO_TOL:
        return _fail(f"pseudoumbilical residual {pseudo:.3e}")
    return 0


def cmd_flow(args) -> int:
    if args.vertices < 8 or args.T <= 0 or args.dt <= 0 or args.snapshots < 1:
        raise UsageError("need --vertices >= 8, --T > 0, --dt > 0, --snapshots >= 1")
    if args.shape == "circle":
        curve0 = circle_polygon(args.radius, args.vertices)
    else:
        curve0 = ellipse_polygon(args.radius * args.aspect, args.radius, args.vertices)
    state = FlowState(time=0.0, dt=args.dt, curve=curve0)
    steps = max(1, round(args.T / args.dt))
    every = max(1, steps // args.snapshots)
    try:
        final = flow_convex_curve(state, args.T, snapshot_every=every)
    except ConvexityLost as exc:
        return _fail(str(exc))
    result = {
        "shape": args.shape,
        "time": final.time,
        "dt": args.dt,
        "vertices": args.vertices,
        "homothety_deviation": homothety_deviation(curve0, final.curve, 1.0, final.time),
        "isoperimetric_ratio_initial": isoperimetric_ratio(curve0),
        "isoperimetric_ratio_final": isoperimetric_ratio(final.curve),
        "mean_radius_final": float(np.mean(np.linalg.norm(final.curve, axis=-1))),
    }
    if args.format == "json":
        _emit(_json(result), args.out)
    elif args.format == "csv":
        _emit(flow_csv(final.snapshots), args.out)
    else:
        if args.out is None:
            raise UsageError("--format svg needs --out DIRECTORY")
        flow_svg_frames(final.snapshots, args.out)
    if args.shape == "circle":
        if not result["homothety_deviation"] < HOMOTHETY_TOL:
            return _fail(f"homothety deviation {result['homothety_deviation']:.3e}")
    elif not result["isoperimetric_ratio_final"] > result["isoperimetric_ratio_initial"]:
        return _fail("isoperimetric ratio did not increase")
    return 0


COMMANDS = {
    "catalog": cmd_catalog,
    "verify": cmd_verify,
    "curve": cmd_curve,
    "lagrangian": cmd_lagrangian,
    "pseudo": cmd_pseudo,
    "flow": cmd_flow,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, BadParams, UnknownName) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SolitonError as exc:
        return _fail(f"{type(exc).__name__}: {exc}")
    except ValueError as exc:
        # invalid numeric parameters rejected by constructors
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
