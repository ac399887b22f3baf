"""Command-line front end: every pipeline stage, machine-readable output.

Subcommands
-----------
curve-info          discriminant, both j-invariant conventions, the two
                    cover-critical points and their image difference
find-points         genericity search, writes the certificate
verify-config-curve the full numeric verification pipeline
genus               tower genus, recursion and closed form
k-squared           intersection-engine derivation with transcript
invariants          full invariant report
slope-table         exact slopes for a range of r

Exit codes: 0 success, 2 usage error (bad flags, invalid or singular
lambda, odd r where even is required), 3 verification failure,
4 precision exhaustion.  Reports are deterministic: the same
configuration produces byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config_curve import genus
from .elliptic import EllipticCurve, SingularCurveError
from .generic_points import SearchExhausted, find_generic_points
from .intersection import k_squared
from .invariants import (
    OddFiberParameterError,
    invariant_report,
    slope_table,
    slope_table_csv,
)
from .scalars import DEFAULT_PREC_BITS, DEFAULT_TOL, format_rational, scalar_to_json
from .verifier import (
    PrecisionExhausted,
    lambda_at,
    parse_lambda_spec,
    verify_claim,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFICATION_FAILED = 3
EXIT_PRECISION_EXHAUSTED = 4

PRECISION_ENV_VAR = "KODAIRA_PRECISION_BITS"


def _default_precision() -> int:
    value = os.environ.get(PRECISION_ENV_VAR)
    if value is None:
        return DEFAULT_PREC_BITS
    try:
        return int(value)
    except ValueError:
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", default="1/1",
                        help="curve parameter: 'num/den' or 're,im' (default 1/1)")
    common.add_argument("--precision", type=int, default=_default_precision(),
                        help="working precision in bits (default 256, "
                             f"or ${PRECISION_ENV_VAR})")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="equality tolerance for approximate arithmetic")
    common.add_argument("--seed", type=int, default=0, help="sampling seed")
    common.add_argument("--bound", type=int, default=30,
                        help="height bound for the rational point search")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--output", default=None, help="write to file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="kodaira",
        description="construct the fibred-surface family and verify its invariants")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("curve-info", parents=[common],
                   help="discriminant, j-invariants, cover data")

    p = sub.add_parser("find-points", parents=[common],
                       help="search generic offsets, emit certificate")
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("verify-config-curve", parents=[common],
                       help="run the verification pipeline")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--dump-enumeration", default=None,
                   help="also write the branch-point enumeration as CSV")

    p = sub.add_parser("genus", parents=[common],
                       help="tower genus: recursion and closed form")
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("k-squared", parents=[common],
                       help="canonical self-intersection derivation")
    p.add_argument("--gamma", type=int, default=None)
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--r", type=int, default=None)

    p = sub.add_parser("invariants", parents=[common], help="full invariant report")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--gamma", type=int, default=None)
    p.add_argument("--deg-cover", type=int, default=None)

    p = sub.add_parser("slope-table", parents=[common],
                       help="exact slope values over a range")
    p.add_argument("--r-min", type=int, required=True)
    p.add_argument("--r-max", type=int, required=True)

    return parser


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_report(command: str, payload: dict) -> str:
    return json.dumps({"schema": "1", "command": command, **payload}, indent=2) + "\n"


def _cmd_curve_info(args) -> int:
    spec = parse_lambda_spec(args.lam)
    lam = lambda_at(spec, args.precision, args.tol)
    curve = EllipticCurve(lam, args.precision, args.tol)
    from .genus2 import GenusTwoCurve

    x_curve = GenusTwoCurve(lam, args.precision, args.tol)
    s_plus = x_curve.branch_point(+1)
    s_minus = x_curve.branch_point(-1)
    delta = curve.delta()
    payload = {
        "lambda": scalar_to_json(lam),
        "discriminant": scalar_to_json(curve.discriminant()),
        "j_ratio": scalar_to_json(curve.j_ratio()),
        "j_standard": scalar_to_json(curve.j_standard()),
        "branch_point_plus": _point_json(s_plus),
        "branch_point_minus": _point_json(s_minus),
        "branch_image_difference": {
            "x": scalar_to_json(delta.x), "y": scalar_to_json(delta.y)},
    }
    if args.format == "text":
        lines = [f"lambda = {lam!r}",
                 f"discriminant = {curve.discriminant()!r}",
                 f"j (bare ratio) = {curve.j_ratio()!r}",
                 f"j (standard, x 1728*4) = {curve.j_standard()!r}",
                 f"cover branch points: {s_plus!r}, {s_minus!r}",
                 f"branch image difference: {delta!r}"]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json_report("curve-info", payload))
    return EXIT_OK


def _point_json(p) -> dict:
    if p.is_infinity:
        return {"infinity": getattr(p, "infinity_sign", True)}
    return {"x": scalar_to_json(p.x), "y": scalar_to_json(p.y)}


def _cmd_find_points(args) -> int:
    spec = parse_lambda_spec(args.lam)
    lam = lambda_at(spec, args.precision, args.tol)
    curve = EllipticCurve(lam, args.precision, args.tol)
    cert = find_generic_points(curve, args.r, bound=args.bound)
    _emit(args, cert.to_json())
    return EXIT_OK


def _cmd_verify(args) -> int:
    spec = parse_lambda_spec(args.lam)
    run = verify_claim(spec, args.r, samples=args.samples, seed=args.seed,
                       prec=args.precision, tol=args.tol)
    if args.dump_enumeration:
        from .config_curve import ConfigurationCurve
        from .generic_points import find_generic_points as _fgp
        from .genus2 import GenusTwoCurve

        lam = lambda_at(spec, args.precision, args.tol)
        x_curve = GenusTwoCurve(lam, args.precision, args.tol)
        cert = _fgp(x_curve.elliptic_quotient(), args.r)
        config = ConfigurationCurve(x_curve, cert.offsets())
        with open(args.dump_enumeration, "w") as fh:
            fh.write(config.enumeration_to_csv(config.branch_points()))
    _emit(args, run.to_json())
    return EXIT_OK if run.passed else EXIT_VERIFICATION_FAILED


def _cmd_genus(args) -> int:
    rec, closed = genus(args.r)
    payload = {"r": args.r, "genus_by_recursion": rec, "genus_closed_form": closed}
    if args.format == "text":
        _emit(args, f"genus(r={args.r}): recursion {rec}, closed form {closed}\n")
    else:
        _emit(args, _json_report("genus", payload))
    return EXIT_OK


def _cmd_k_squared(args) -> int:
    gamma = None if args.symbolic else args.gamma
    derivation = k_squared(r=args.r, gamma=gamma)
    payload = {
        "r": args.r if args.r is not None else "symbolic",
        "gamma": gamma if gamma is not None else "symbolic",
        "k_squared": str(derivation.value),
        "raw_expansion": str(derivation.raw_expansion),
        "adjunction": {k: str(v) for k, v in
                       sorted(derivation.adjunction.substitutions.items())},
        "transcript": derivation.transcript.to_json_dict(),
    }
    if args.format == "text":
        _emit(args, derivation.transcript.to_text()
              + f"K^2 = {derivation.value}\n")
    else:
        _emit(args, _json_report("k-squared", payload))
    return EXIT_OK


def _cmd_invariants(args) -> int:
    report = invariant_report(args.r, gamma=args.gamma, deg_cover=args.deg_cover)
    _emit(args, report.to_json())
    return EXIT_OK


def _cmd_slope_table(args) -> int:
    if args.format == "csv":
        _emit(args, slope_table_csv(args.r_min, args.r_max))
        return EXIT_OK
    rows = [{"r": r, "g": g, "upsilon": format_rational(u)}
            for r, g, u in slope_table(args.r_min, args.r_max)]
    if args.format == "text":
        lines = [f"r={row['r']:>3}  g={row['g']:>3}  slope={row['upsilon']}"
                 for row in rows]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json_report("slope-table", {"rows": rows}))
    return EXIT_OK


_COMMANDS = {
    "curve-info": _cmd_curve_info,
    "find-points": _cmd_find_points,
    "verify-config-curve": _cmd_verify,
    "genus": _cmd_genus,
    "k-squared": _cmd_k_squared,
    "invariants": _cmd_invariants,
    "slope-table": _cmd_slope_table,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, SingularCurveError, OddFiberParameterError,
            SearchExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION_EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())
