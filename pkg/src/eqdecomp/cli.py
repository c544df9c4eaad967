"""Command line front end.

Subcommands: build, fiber, eval, trace, verify, enumerate, render.  Exit
codes: 0 on success, 1 when a requested verification fails, 2 on invalid
input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .catalog import (
    DistanceToConvex,
    HalfLineSeed,
    OrthogonalProjection,
    PointSeed,
    SegmentSeed,
    SignedDistanceSigmaPlane,
    SignedDistanceSigmaSphere,
    SphereRotation,
    ambient_of,
    base_space,
    enumerate_sphere,
    evaluate,
    fiber,
    singular_set,
)
from .errors import InvalidInputError
from .geometry import PlanePoint, SpherePoint, UnitTangent, sample_piece
from .leaves import PlaneSigmaParams, SphereSigmaParams, build_sigma_plane, build_sigma_sphere
from .quotient import FoldSegmentToSegment, SegmentSpace, compose
from .render import render_svg
from .serialize import (
    canonical_dumps,
    curve_from_json,
    curve_to_json,
    descriptor_from_json,
    descriptor_to_json,
    fiber_to_json,
)
from .verify import (
    ToleranceProfile,
    check_connectivity,
    check_equidistance,
    check_junctions_c1,
    check_lipschitz_and_ball,
    check_positive_reach,
    sample_on_pieces,
    trace_horizontal,
)


def _parse_kv(pairs, caster=float) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise InvalidInputError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = caster(v)
    return out


def _parse_point(text: str):
    coords = [float(c) for c in text.split(",")]
    if len(coords) == 2:
        return PlanePoint(*coords)
    if len(coords) == 3:
        return SpherePoint.normalized(*coords)
    raise InvalidInputError(f"point must have 2 or 3 coordinates, got {text!r}")


def _parse_convex(spec: str):
    kind, _, rest = spec.partition(":")
    vals = [float(c) for c in rest.split(",")] if rest else []
    if kind == "point" and len(vals) == 2:
        return PointSeed(PlanePoint(*vals))
    if kind == "segment" and len(vals) == 4:
        return SegmentSeed(PlanePoint(vals[0], vals[1]), PlanePoint(vals[2], vals[3]))
    if kind == "halfline" and len(vals) == 4:
        origin = PlanePoint(vals[0], vals[1])
        n = math.hypot(vals[2], vals[3])
        return HalfLineSeed(origin, UnitTangent(origin, (vals[2] / n, vals[3] / n)))
    raise InvalidInputError(
        f"convex seed must be point:x,y | segment:x1,y1,x2,y2 | halfline:x,y,dx,dy, got {spec!r}")


def _descriptor_from_args(args):
    chosen = None
    if args.plane_sigma is not None:
        kv = _parse_kv(args.plane_sigma)
        chosen = SignedDistanceSigmaPlane(PlaneSigmaParams(kv.get("a", 1.0), kv.get("h", 0.0)))
    if args.sphere_sigma is not None:
        if chosen is not None:
            raise InvalidInputError("give exactly one descriptor")
        kv = _parse_kv(args.sphere_sigma, caster=lambda v: int(float(v)))
        chosen = SignedDistanceSigmaSphere(SphereSigmaParams(kv["k"], kv["s"]))
    if args.rotation is not None:
        if chosen is not None:
            raise InvalidInputError("give exactly one descriptor")
        pole = _parse_point(args.rotation) if args.rotation else SpherePoint(0.0, 0.0, 1.0)
        chosen = SphereRotation(pole)
    if args.projection is not None:
        if chosen is not None:
            raise InvalidInputError("give exactly one descriptor")
        chosen = OrthogonalProjection(args.projection)
    if args.convex is not None:
        if chosen is not None:
            raise InvalidInputError("give exactly one descriptor")
        chosen = DistanceToConvex(_parse_convex(args.convex))
    if args.descriptor is not None:
        if chosen is not None:
            raise InvalidInputError("give exactly one descriptor")
        with open(args.descriptor) as fh:
            chosen = descriptor_from_json(json.load(fh))
    if chosen is None:
        raise InvalidInputError("no descriptor given (try --plane-sigma / --sphere-sigma / ...)")
    if getattr(args, "fold_degree", None):
        base = base_space(chosen)
        if not isinstance(base, SegmentSpace):
            raise InvalidInputError("--fold-degree needs a segment base space")
        outer = FoldSegmentToSegment(base.lo, base.hi, args.fold_degree,
                                     getattr(args, "fold_phase", 0.0) or 0.0)
        chosen = compose(chosen, outer)
    return chosen


def _add_descriptor_args(sub):
    sub.add_argument("--plane-sigma", nargs="*", metavar="K=V",
                     help="glued-arc plane curve, keys a and h")
    sub.add_argument("--sphere-sigma", nargs="*", metavar="K=V",
                     help="glued-arc sphere curve, keys k and s")
    sub.add_argument("--rotation", nargs="?", const="", metavar="PX,PY,PZ",
                     help="distance from a pole on the sphere")
    sub.add_argument("--projection", nargs="?", const=0.0, type=float, metavar="ANGLE",
                     help="orthogonal projection of the plane")
    sub.add_argument("--convex", metavar="SPEC",
                     help="distance to a convex seed: point:x,y | segment:... | halfline:...")
    sub.add_argument("--descriptor", metavar="FILE", help="descriptor JSON file")
    sub.add_argument("--fold-degree", type=int, metavar="K",
                     help="post-compose with a degree-K segment fold")
    sub.add_argument("--fold-phase", type=float, metavar="PH",
                     help="phase of the segment fold (default 0)")


def _build_curve(d, window: float):
    if isinstance(d, SignedDistanceSigmaPlane):
        return build_sigma_plane(d.params, window)
    if isinstance(d, SignedDistanceSigmaSphere):
        return build_sigma_sphere(d.params)
    raise InvalidInputError("build needs a plane-sigma or sphere-sigma descriptor")


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        print(f"wrote {path}")


def cmd_build(args) -> int:
    d = _descriptor_from_args(args)
    curve = _build_curve(d, args.window)
    _write(args.out, canonical_dumps(curve_to_json(curve)))
    print(f"pieces: {len(curve.pieces)}  junctions: {len(curve.junctions)}  "
          f"components: {check_connectivity(curve)}")
    return 0


def cmd_fiber(args) -> int:
    d = _descriptor_from_args(args)
    f = fiber(d, args.level, args.window)
    _write(args.out, canonical_dumps(fiber_to_json(f)))
    print(f"level {args.level}: pieces: {len(f.pieces)}  components: {len(f.components)}  "
          f"singular points: {len(f.singular_points)}")
    if args.csv:
        rows = ["x,y,level"] if ambient_of(d) == "plane" else ["x,y,z,level"]
        for piece in f.pieces:
            for row in sample_piece(piece, args.csv_samples):
                rows.append(",".join(repr(float(c)) for c in row) + f",{args.level!r}")
        _write(args.csv, "\n".join(rows))
    return 0


def cmd_eval(args) -> int:
    d = _descriptor_from_args(args)
    p = _parse_point(args.point)
    print(evaluate(d, p))
    return 0


def cmd_trace(args) -> int:
    d = _descriptor_from_args(args)
    start = _parse_point(args.start)
    tol = ToleranceProfile(rng_seed=args.seed, tol_metric=args.tol_metric)
    result = trace_horizontal(d, start, outward=not args.inward, t_max=args.t_max,
                              dt=args.dt, tol=tol, window=args.window)
    if args.out:
        dim = result.points.shape[1]
        head = "t,x,y,level" if dim == 2 else "t,x,y,z,level"
        rows = [head]
        for t, pt, v in zip(result.t, result.points, result.profile):
            rows.append(",".join([repr(float(t))] + [repr(float(c)) for c in pt] + [repr(float(v))]))
        _write(args.out, "\n".join(rows))
    status = "pass" if result.report.passed else "FAIL"
    flag = f"  flagged at t={result.singular_time}" if result.flagged else ""
    print(f"fold identity: {status}  max deviation {result.report.max_deviation:.3e}{flag}")
    return 0 if result.report.passed else 1


def _verify_suite(d, tol: ToleranceProfile, window: float, full: bool, curve=None):
    rng = np.random.default_rng(tol.rng_seed)
    reports = []
    base = base_space(d)
    sigma = isinstance(d, (SignedDistanceSigmaPlane, SignedDistanceSigmaSphere))
    if curve is not None:
        reports.append(check_junctions_c1(curve, tol))
    elif sigma:
        reports.append(check_junctions_c1(_build_curve(d, window), tol))
    # equidistance on a few random level pairs
    pairs = 4 if full else 2
    for _ in range(pairs):
        if isinstance(base, SegmentSpace):
            e1, e2 = sorted(rng.uniform(base.lo, base.hi, 2))
        else:
            e1, e2 = sorted(rng.uniform(0.0, window / 2.0, 2))
        if abs(e2 - e1) < 1e-3:
            e2 = e1 + 1e-2
        reports.append(check_equidistance(d, float(e1), float(e2), tol, window=window))
    # ball-to-ball at random points plus singular points
    count = 4 if full else 2
    if ambient_of(d) == "plane":
        centers = [PlanePoint(*row) for row in rng.uniform(-window / 4.0, window / 4.0, (count, 2))]
    else:
        raw = rng.normal(size=(count, 3))
        centers = [SpherePoint.normalized(*row) for row in raw]
    centers += list(singular_set(d).points)
    for x in centers:
        r = float(rng.uniform(0.2, 1.0))
        reports.append(check_lipschitz_and_ball(d, x, r, tol))
    # horizontal traces from the zero fiber
    f0 = fiber(d, 0.0 if isinstance(base, SegmentSpace) and base.lo < 0 else
               (base.lo if isinstance(base, SegmentSpace) else 0.0), window)
    if f0.pieces:
        starts, _, _ = sample_on_pieces(f0.pieces, 2, rng)
        ambient = ambient_of(d)
        for row in starts:
            start = SpherePoint.normalized(*row) if ambient == "sphere" else PlanePoint(*row)
            t_max = 3.0 if ambient == "plane" else math.pi * 0.9
            reports.append(trace_horizontal(d, start, True, t_max, 0.05, tol, window).report)
    if sigma:
        a = d.params.a
        f = fiber(d, 0.0, window + 4.0 * a) if ambient_of(d) == "plane" else fiber(d, 0.0)
        sample_radius = window - 2.0 * a if ambient_of(d) == "plane" else None
        reports.append(check_positive_reach(f, 0.9 * a, tol, sample_radius=sample_radius))
    return reports


def cmd_verify(args) -> int:
    d = _descriptor_from_args(args)
    tol = ToleranceProfile(rng_seed=args.seed, tol_metric=args.tol_metric,
                           samples=10_000 if args.suite == "full" else 2_000)
    curve = None
    if args.curve:
        with open(args.curve) as fh:
            curve = curve_from_json(json.load(fh))
    reports = _verify_suite(d, tol, args.window, args.suite == "full", curve=curve)
    ok = all(r.passed for r in reports)
    bundle = {
        "descriptor": descriptor_to_json(d),
        "seed": tol.rng_seed,
        "pass": ok,
        "reports": [r.to_dict() for r in reports],
    }
    _write(args.out, canonical_dumps(bundle))
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.check_name:20s} max deviation {r.max_deviation:.3e}")
    print("suite:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_enumerate(args) -> int:
    rows = []
    for d in enumerate_sphere(args.kmax):
        if isinstance(d, SphereRotation):
            rows.append(("rotation", "-", "-", "segment [0, pi]", 1))
        else:
            k, s = d.params.k, d.params.s
            comp = check_connectivity(build_sigma_sphere(d.params))
            rows.append(("sphere-sigma", str(k), str(s), f"segment [-pi/{2*k}, pi/{2*k}]", comp))
    print(f"{'kind':14s}{'k':>3s} {'s':>3s}  {'base space':24s}{'components'}")
    for kind, k, s, base, comp in rows:
        print(f"{kind:14s}{k:>3s} {s:>3s}  {base:24s}{comp}")
    return 0


def cmd_render(args) -> int:
    d = _descriptor_from_args(args)
    levels = [float(v) for v in args.levels.split(",")] if args.levels else None
    if levels is None:
        base = base_space(d)
        if isinstance(base, SegmentSpace):
            levels = [base.lo, 0.5 * (base.lo + base.hi), base.hi]
        else:
            levels = [0.0, 1.0, 2.0]
    svg = render_svg(d, levels, window=args.window, size=args.size)
    _write(args.out or "figure.svg", svg)
    return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed for all checks")
    common.add_argument("--tol-metric", type=float, default=1e-6, help="metric tolerance")
    common.add_argument("--window", type=float, default=12.0, help="plane window radius")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    ap = argparse.ArgumentParser(
        prog="eqdecomp",
        description="Equidistant decompositions of the plane and the sphere: "
                    "build leaf curves, evaluate signed distances, trace horizontal "
                    "geodesics, verify the submetry axioms, and render figures.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common],
                       help="construct a leaf curve and write its JSON")
    _add_descriptor_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("fiber", parents=[common],
                       help="construct one fiber and write its JSON")
    _add_descriptor_args(p)
    p.add_argument("--level", type=float, required=True)
    p.add_argument("--csv", default=None, help="also write sampled points as CSV")
    p.add_argument("--csv-samples", type=int, default=64)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("eval", parents=[common], help="evaluate the base value at a point")
    _add_descriptor_args(p)
    p.add_argument("--point", required=True, metavar="X,Y[,Z]")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("trace", parents=[common],
                       help="trace a horizontal geodesic and check the fold identity")
    _add_descriptor_args(p)
    p.add_argument("--start", required=True, metavar="X,Y[,Z]")
    p.add_argument("--inward", action="store_true")
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", parents=[common],
                       help="run the verification suite for a descriptor")
    _add_descriptor_args(p)
    p.add_argument("--suite", choices=("fast", "full"), default="fast")
    p.add_argument("--curve", default=None, help="verify junctions of a stored curve JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", parents=[common],
                       help="list the spherical classification up to k-max")
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("render", parents=[common], help="render fibers as an SVG figure")
    _add_descriptor_args(p)
    p.add_argument("--levels", default=None, metavar="L1,L2,...")
    p.add_argument("--size", type=int, default=640)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        # GeometryError subclasses ValueError; malformed numbers and files
        # land here too, so every path exits 0, 1, or 2
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
