"""Command line front end: JSON certificates and reports for every operation.

Exit codes: 0 all checks passed, 1 a certificate or criterion failed,
2 usage error.  Output is JSON only, with full float precision, so the
numbers can be re-verified downstream.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import acceptance
from . import fibers4 as fb
from .exactgeom import (
    arrangement_for_n,
    format_sign_vector,
    format_vector,
    parse_vector,
    rational,
    sign_vector,
)
from .moment import grassmann_moment, hypersimplex_moment, simplex_moment
from .plucker import GrassmannPoint
from .regularity import (
    chamber_orbits,
    enumerate_chambers,
    is_regular_grassmann,
    is_regular_projective,
    largest_chamber_witness,
)


def _parse_seed(text: str) -> int:
    return int(text, 0)


def _parse_tolerances(items: list[str] | None) -> dict[str, float]:
    overrides: dict[str, float] = {}
    for item in items or []:
        if "=" not in item:
            raise ValueError(f"tolerance override must look like name=value, got {item!r}")
        key, _, value = item.partition("=")
        overrides[key.strip()] = float(value)
    return overrides


def _json_default(value):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _emit(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, default=_json_default)
    print(text)
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _complex_matrix(text: str) -> np.ndarray:
    data = json.loads(text)
    return np.array([[complex(entry[0], entry[1]) for entry in row] for row in data])


def _complex_vector(text: str) -> np.ndarray:
    data = json.loads(text)
    return np.array([complex(entry[0], entry[1]) for entry in data])


def _classification(point, n: int) -> dict:
    signs = sign_vector(point, arrangement_for_n(n))
    projective = is_regular_projective(point, n) if n <= 6 else None
    return {
        "n": n,
        "point": format_vector(point),
        "id": format_sign_vector(signs),
        "regular_mu": is_regular_grassmann(point, n),
        "regular_mu_tilde": projective,
    }


def cmd_chambers(args) -> int:
    if args.classify:
        if args.n > 6:
            print("classification supports n <= 6", file=sys.stderr)
            return 2
        point = parse_vector(args.classify)
        _emit(_classification(point, args.n), args.json_out)
        return 0
    if args.n != 4:
        print("chamber enumeration supports n = 4 only", file=sys.stderr)
        return 2
    orbits = chamber_orbits()
    label_of = {}
    for orbit in orbits:
        for chamber in orbit.chambers:
            label_of[chamber.id] = orbit.label
    chambers = [
        {
            "id": format_sign_vector(c.id),
            "dim": c.dimension,
            "representative": format_vector(c.representative),
            "orbit": label_of[c.id],
        }
        for c in enumerate_chambers(4)
    ]
    payload = {
        "n": 4,
        "chambers": chambers,
        "orbit_count": len(orbits),
        "orbit_sizes": [len(o.chambers) for o in orbits],
    }
    _emit(payload, args.json_out)
    return 0


def cmd_regular(args) -> int:
    point = parse_vector(args.classify)
    if args.n != len(point):
        print("point length does not match --n", file=sys.stderr)
        return 2
    _emit(_classification(point, args.n), args.json_out)
    return 0


def cmd_moment(args) -> int:
    name = args.map
    if name == "mu":
        matrix = _complex_matrix(args.point)
        plane = GrassmannPoint(matrix)
        output = grassmann_moment(plane, args.n)
        echo = json.loads(args.point)
    elif name in ("mu_tilde", "mu_hat"):
        coords = _complex_vector(args.point)
        output = hypersimplex_moment(coords, args.n) if name == "mu_tilde" else simplex_moment(coords)
        echo = json.loads(args.point)
    else:  # pragma: no cover - argparse guards the choices
        return 2
    _emit({"map": name, "n": args.n, "input": echo, "output": [float(v) for v in output]},
          args.json_out)
    return 0


def cmd_fiber(args) -> int:
    overrides = _parse_tolerances(args.tol)
    second_orbit = args.orbit == "plus"
    rng = np.random.default_rng(args.seed)
    certificates = []
    failing = None
    all_passed = True
    max_residuals: dict[str, float] = {}
    rank_histogram: dict[str, int] = {}
    for _ in range(args.samples):
        point = fb.sample_for_kind(args.kind, rng, second_orbit=second_orbit)
        cert, passed = fb.build_certificate(args.kind, point, second_orbit=second_orbit,
                                            tolerances=overrides)
        certificates.append(cert)
        for key, value in cert["residuals"].items():
            if value is not None:
                max_residuals[key] = max(max_residuals.get(key, 0.0), value)
        if cert["jacobian_rank"] is not None:
            rank_histogram[str(cert["jacobian_rank"])] = rank_histogram.get(
                str(cert["jacobian_rank"]), 0) + 1
        if not passed:
            all_passed = False
            if failing is None:
                failing = cert
    payload = {
        "kind": args.kind,
        "samples": args.samples,
        "seed": args.seed,
        "second_orbit": second_orbit,
        "certificates": certificates,
        "aggregate": {
            "max_residuals": max_residuals,
            "rank_histogram": rank_histogram,
            "all_passed": all_passed,
        },
        "failing_sample": failing,
    }
    _emit(payload, args.json_out)
    return 0 if all_passed else 1


def cmd_jacobian(args) -> int:
    second_orbit = args.orbit == "plus"
    rng = np.random.default_rng(args.seed)
    rank_histogram: dict[str, int] = {}
    max_f = [0.0, 0.0, 0.0]
    max_fd = 0.0
    for index in range(args.samples):
        point = fb.sample_fiber5(rng, method="surface" if index % 2 == 0 else "sphere",
                                 second_orbit=second_orbit)
        chart = fb.fiber5_chart(point, second_orbit=second_orbit)
        f1, f2, f3 = fb.complete_intersection_f(chart)
        max_f = [max(max_f[0], abs(f1)), max(max_f[1], abs(f2 + 1.0)), max(max_f[2], abs(f3))]
        u, v = chart.as_uv()
        rank = fb.jacobian_rank(u, v)
        rank_histogram[str(rank)] = rank_histogram.get(str(rank), 0) + 1
        if index % 25 == 0:
            max_fd = max(max_fd, float(np.max(np.abs(fb.ci_jacobian(u, v) - fb.ci_jacobian_fd(u, v)))))
    all_rank3 = set(rank_histogram) <= {"3"}
    payload = {
        "samples": args.samples,
        "seed": args.seed,
        "second_orbit": second_orbit,
        "rank_histogram": rank_histogram,
        "max_f_deviation": max_f,
        "max_fd_deviation": max_fd,
        "all_rank_3": all_rank3,
    }
    _emit(payload, args.json_out)
    return 0 if all_rank3 else 1


def cmd_transition(args) -> int:
    rng = np.random.default_rng(args.seed)
    max_cocycle = 0.0
    for _ in range(args.samples):
        t = fb.random_phases(rng, 3)
        forward = fb.bundle_transition(fb.bundle_transition(t, "01"), "10")
        backward = fb.bundle_transition(fb.bundle_transition(t, "10"), "01")
        max_cocycle = max(max_cocycle,
                          max(abs(a - b) for a, b in zip(forward, t)),
                          max(abs(a - b) for a, b in zip(backward, t)))
    determinant = fb.transition_determinant()
    ok = determinant == -1 and max_cocycle <= 1e-12
    payload = {
        "exponent_matrix": [list(row) for row in fb.TRANSITION_EXPONENTS],
        "determinant": determinant,
        "cocycle_max_error": max_cocycle,
        "samples": args.samples,
        "ok": ok,
    }
    _emit(payload, args.json_out)
    return 0 if ok else 1


def cmd_triangle(args) -> int:
    triangle = fb.solve_moment_triangle()
    edges = {}
    for edge in range(3):
        endpoints = [triangle.edge_point(edge, Fraction(0)),
                     triangle.edge_point(edge, Fraction(1, 3))]
        edges[f"I{edge}"] = {
            "vanishing_coordinate": edge,
            "endpoints": [format_vector(p) for p in endpoints],
        }
    payload = {
        "solution": {
            "constant": format_vector(triangle.constant),
            "x4_coefficients": format_vector(triangle.direction_x4),
            "x5_coefficients": format_vector(triangle.direction_x5),
        },
        "vertices": {k: format_vector(v) for k, v in triangle.vertices.items()},
        "edges": edges,
        "target": format_vector(fb.CHAMBER_POINT_MINUS if args.orbit == "minus"
                                else fb.CHAMBER_POINT_PLUS),
    }
    _emit(payload, args.json_out)
    return 0


def cmd_curve(args) -> int:
    x0 = float(rational(args.x0)) if "/" in args.x0 else float(args.x0)
    x1 = float(rational(args.x1)) if "/" in args.x1 else float(args.x1)
    payload = {
        "x0": x0,
        "x1": x1,
        "fixed_sign_residual": fb.curve_residual(x0, x1),
        "closure_residual": fb.curve_closure_residual(x0, x1),
    }
    _emit(payload, args.json_out)
    return 0


def cmd_witness(args) -> int:
    witness = largest_chamber_witness(args.n, seed=args.seed)
    _emit({"n": args.n, "witness": format_vector(witness)}, args.json_out)
    return 0


def cmd_report(args) -> int:
    results = acceptance.run_all(seed=args.seed, samples=args.samples, only=args.only)
    payload = {
        "seed": args.seed,
        "samples": args.samples,
        "criteria": [r.to_json() for r in results],
        "all_passed": all(r.passed for r in results),
    }
    _emit(payload, args.json_out)
    return 0 if payload["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grassmoment",
        description="Exact chamber combinatorics and verified n=4 moment fibers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples_default=1000):
        p.add_argument("--seed", type=_parse_seed, default=acceptance.DEFAULT_SEED)
        p.add_argument("--samples", type=int, default=samples_default)
        p.add_argument("--orbit", choices=["minus", "plus"], default="minus")
        p.add_argument("--json-out", default=None)

    p = sub.add_parser("chambers", help="enumerate n=4 chambers or classify a point")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--classify", default=None, help="comma separated rational point")
    p.add_argument("--json-out", default=None)
    p.set_defaults(func=cmd_chambers)

    p = sub.add_parser("regular", help="regularity report for one rational point")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--classify", required=True)
    p.add_argument("--json-out", default=None)
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("moment", help="evaluate one of the three moment maps")
    p.add_argument("--map", choices=["mu", "mu_tilde", "mu_hat"], required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--point", required=True,
                   help="JSON [re,im] pairs; a 2 x n matrix of pairs for mu")
    p.add_argument("--json-out", default=None)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("fiber", help="sample a fiber and emit residual certificates")
    p.add_argument("kind", choices=["mq7", "mq5", "m2", "m3"])
    common(p)
    p.add_argument("--tol", action="append", default=None, metavar="NAME=VALUE")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("jacobian", help="rank histogram of the chart Jacobian")
    common(p, samples_default=200)
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("transition", help="chart transition cocycle report")
    common(p, samples_default=200)
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("triangle", help="exact solution triangle of the moment system")
    p.add_argument("--orbit", choices=["minus", "plus"], default="minus")
    p.add_argument("--json-out", default=None)
    p.set_defaults(func=cmd_triangle)

    p = sub.add_parser("curve", help="edge curve residuals at one parameter point")
    p.add_argument("--x0", required=True)
    p.add_argument("--x1", required=True)
    p.add_argument("--json-out", default=None)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("witness", help="largest chamber witness point")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=_parse_seed, default=acceptance.DEFAULT_SEED)
    p.add_argument("--json-out", default=None)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("report", help="run the acceptance suite")
    p.add_argument("--seed", type=_parse_seed, default=acceptance.DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=acceptance.DEFAULT_SAMPLES)
    p.add_argument("--only", default=None)
    p.add_argument("--json-out", default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, json.JSONDecodeError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
