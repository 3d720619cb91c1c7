"""
Command-line interface.

Every subcommand prints one JSON document (or a short text rendering with
--format text) on stdout. Library errors exit with status 2, a failed
verification with status 1.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import orjson
from pydantic import ValidationError

from .catalog import Scope, select_descent_model, verify_all
from .classfield import QuadOrder
from .core import Poly, format_rational, to_rational
from .curves import (
    Level,
    cm_field_of_definition,
    cm_locus,
    fixed_point_count,
    fixed_point_fields,
    fixed_point_loci,
    genus,
    quotient_cm_field,
    scan_genus_one,
)
from .fields import FieldSpec, fingerprint_of_compositum, fingerprint_of_spec, splitting_fingerprint
from .models import (
    CurvePoint,
    EllipticCurveSW,
    GenusOneModel,
    descent_quartic,
    select_criterion_model,
    subgroup_representatives,
    twist,
)
from .schemas import PointsFile
from .shared.config import OutputFormat, get_config
from .shared.errors import ShimuraError
from .shared.utils import setup_logging

logger = setup_logging("cli")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_ERROR = 2


class UsageError(ShimuraError):
    """Malformed command-line value"""


# -- argument parsing -------------------------------------------------------

def _rational(text: str):
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from e


def _rational_list(text: str) -> List:
    return [_rational(part.strip()) for part in text.split(",")]


def _point(text: str) -> CurvePoint:
    if text.strip().lower() in ("o", "inf", "infinity"):
        return CurvePoint.zero()
    values = _rational_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"a point is 'x,y', got {text!r}")
    return CurvePoint.at(*values)


def _json_argument(text: str) -> Any:
    """Inline JSON, or @path to read it from a file"""
    raw = Path(text[1:]).read_bytes() if text.startswith("@") else text.encode()
    try:
        return orjson.loads(raw)
    except orjson.JSONDecodeError as e:
        raise UsageError(f"invalid JSON argument: {e}") from e


def _field_spec(text: str) -> FieldSpec:
    try:
        return FieldSpec.from_dict(_json_argument(text))
    except ValidationError as e:
        raise UsageError(f"invalid field spec: {e.error_count()} error(s)") from e


def _add_level(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--D", type=int, required=True, help="quaternion discriminant")
    parser.add_argument("--N", type=int, default=1, help="Eichler level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shimura",
        description="Re-derive and verify models of genus-one Shimura curves",
    )
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=None,
        help="output format (default from SHIMURA_OUTPUT_FORMAT)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genus", help="genus of X0(D, N)")
    _add_level(p)

    p = sub.add_parser("scan", help="all genus-one levels with D N <= max-dn")
    p.add_argument("--max-dn", type=int, required=True)

    p = sub.add_parser("cm", help="CM locus of an order on X0(D, N)")
    _add_level(p)
    p.add_argument("--disc", type=int, required=True, help="discriminant of the order")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true", help="only the number of CM points")
    mode.add_argument("--field", action="store_true", help="field of definition of the points")
    p.add_argument("--quotient-m", type=int, default=None,
                   help="with --field, the field of the image on X0(D, N)/<w_m>")

    p = sub.add_parser("fixed-points", help="fixed points of w_m")
    _add_level(p)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("descent", help="2-descent quartic of a point on the twist E_d")
    p.add_argument("--A", type=_rational, required=True)
    p.add_argument("--B", type=_rational, required=True)
    p.add_argument("--d", type=_rational, default=1)
    p.add_argument("--point", type=_point, required=True, help="x,y on E_d")

    p = sub.add_parser("method1", help="select the descent model matching a target field")
    p.add_argument("--A", type=_rational, required=True)
    p.add_argument("--B", type=_rational, required=True)
    p.add_argument("--d", type=_rational, required=True)
    p.add_argument("--points", type=Path, required=True,
                   help="JSON file with 'points' (class representatives) or 'generators'")
    p.add_argument("--target-field", type=str, required=True, help="field spec JSON or @file")

    p = sub.add_parser("method2", help="criterion models from the quotient Jacobian")
    p.add_argument("--Aprime", type=_rational, required=True)
    p.add_argument("--Bprime", type=_rational, required=True)
    p.add_argument("--d", type=_rational, required=True)
    p.add_argument("--target-jacobian", type=_rational_list, default=None, help="A,B")

    p = sub.add_parser("fingerprint", help="Galois fingerprint of a quartic or a field spec")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--quartic", type=_rational_list, help="a0,a1,a2,a3,a4")
    source.add_argument("--field", type=str, help="field spec JSON or @file")

    p = sub.add_parser("verify", help="re-derive the catalog")
    p.add_argument("--scope", choices=[s.value for s in Scope], default=Scope.ALL.value)
    return parser


# -- commands ---------------------------------------------------------------

def cmd_genus(args: argparse.Namespace) -> Any:
    return genus(Level(args.D, args.N))


def cmd_scan(args: argparse.Namespace) -> Any:
    return [level.to_dict() for level in scan_genus_one(args.max_dn)]


def cmd_cm(args: argparse.Namespace) -> Any:
    level = Level(args.D, args.N)
    order = QuadOrder.from_disc(args.disc)
    if args.count:
        return cm_locus(level, order).count
    if args.field:
        if args.quotient_m is not None:
            return quotient_cm_field(level, order, args.quotient_m).to_dict()
        return cm_field_of_definition(level, order).to_dict()
    return cm_locus(level, order).to_dict()


def cmd_fixed_points(args: argparse.Namespace) -> Any:
    level = Level(args.D, args.N)
    fields = fixed_point_fields(level, args.m)
    return {
        **level.to_dict(),
        "m": args.m,
        "count": fixed_point_count(level, args.m),
        "orders": [locus.to_dict() for locus in fixed_point_loci(level, args.m)],
        "fields": [f.to_dict() for f in fields],
        "fingerprint": fingerprint_of_compositum(f.fingerprint for f in fields).to_dict(),
    }


def cmd_descent(args: argparse.Namespace) -> Any:
    curve = twist(EllipticCurveSW(args.A, args.B), args.d)
    quartic = descent_quartic(curve, args.point)
    data: Dict[str, Any] = {"curve": curve.to_dict(), "quartic": quartic.to_json()}
    if not args.point.infinity:
        data["model"] = GenusOneModel(args.d, quartic).to_dict()
    return data


def _load_points(path: Path, curve: EllipticCurveSW, d) -> Dict[str, Any]:
    try:
        spec = PointsFile.model_validate(orjson.loads(path.read_bytes()))
    except (OSError, orjson.JSONDecodeError, ValidationError) as e:
        raise UsageError(f"cannot read points file {path}: {e}") from e
    if spec.points is not None:
        points = [p.to_point() for p in spec.points]
        return {"reps": points, "labels": spec.labels}
    generators = [g.to_point() for g in spec.generators]
    reps = subgroup_representatives(twist(curve, d), generators)
    return {
        "reps": [point for _, point in reps],
        "labels": spec.labels or [",".join(map(str, coefficients)) for coefficients, _ in reps],
    }


def cmd_method1(args: argparse.Namespace) -> Any:
    curve = EllipticCurveSW(args.A, args.B)
    points = _load_points(args.points, curve, args.d)
    target = fingerprint_of_spec(_field_spec(args.target_field))
    return select_descent_model(curve, args.d, points["reps"], target, points["labels"]).to_dict()


def cmd_method2(args: argparse.Namespace) -> Any:
    target = None
    if args.target_jacobian is not None:
        if len(args.target_jacobian) != 2:
            raise UsageError("--target-jacobian takes A,B")
        target = EllipticCurveSW(*args.target_jacobian)
    candidates = select_criterion_model(args.Aprime, args.Bprime, args.d, target)
    return {
        "quotient_jacobian": EllipticCurveSW(args.Aprime, args.Bprime).to_dict(),
        "d": format_rational(args.d),
        "candidates": [c.to_dict() for c in candidates],
    }


def cmd_fingerprint(args: argparse.Namespace) -> Any:
    if args.quartic is not None:
        return splitting_fingerprint(Poly.of(*args.quartic)).to_dict()
    return fingerprint_of_spec(_field_spec(args.field)).to_dict()


def cmd_verify(args: argparse.Namespace) -> Any:
    return verify_all(args.scope)


COMMANDS: Dict[str, Callable[[argparse.Namespace], Any]] = {
    "genus": cmd_genus,
    "scan": cmd_scan,
    "cm": cmd_cm,
    "fixed-points": cmd_fixed_points,
    "descent": cmd_descent,
    "method1": cmd_method1,
    "method2": cmd_method2,
    "fingerprint": cmd_fingerprint,
    "verify": cmd_verify,
}


# -- output -----------------------------------------------------------------

def render_json(payload: Any) -> str:
    return orjson.dumps(payload, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2).decode()


def _render_text(payload: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
        return lines
    if isinstance(payload, list):
        lines = []
        for item in payload:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
        return lines
    return [f"{pad}{payload}"]


def render_report_text(report) -> str:
    lines = []
    for scope in report.scopes:
        status = "PASS" if scope.passed else "FAIL"
        lines.append(f"{status} {scope.scope}: {len(scope.checks)} checks, {scope.latency_ms} ms")
        for check in scope.failures:
            lines.append(f"  failed {check.name}: {render_json(check.witness)}")
    lines.append("all checks passed" if report.passed else f"{len(report.failures())} check(s) failed")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    output_format = OutputFormat(args.format) if args.format else get_config().output_format

    try:
        result = COMMANDS[args.command](args)
    except (ShimuraError, ValidationError) as e:
        logger.info("command_failed", command=args.command, error_type=type(e).__name__)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    if args.command == "verify":
        if output_format is OutputFormat.TEXT:
            print(render_report_text(result))
        else:
            print(render_json(result.to_dict()))
        return EXIT_OK if result.passed else EXIT_VERIFY_FAILED

    if output_format is OutputFormat.TEXT:
        print("\n".join(_render_text(result)))
    else:
        print(render_json(result))
    return EXIT_OK
