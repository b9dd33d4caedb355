"""Command-line entry point.  Every command prints one JSON envelope on standard output.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import DomainError
from .exactnum import CycNumber, TorusPoint, as_fraction, fraction_str


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        # --help lands here; keep the envelope contract
        raise UsageError(message or self.format_help())


# ---------------------------------------------------------------------------
# argument decoding


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError("PARSE", f"invalid JSON: {exc.msg}") from exc


def _number_list(text: str) -> list[Fraction]:
    text = text.strip()
    items = _json_arg(text) if text.startswith("[") else [s for s in text.split(",") if s.strip()]
    return [as_fraction(x) for x in items]


def _cyc(text: str) -> CycNumber:
    text = text.strip()
    if text.startswith("{"):
        return CycNumber.from_json(_json_arg(text))
    return CycNumber.rational(as_fraction(text))


def _cyc_out(x: CycNumber):
    return str(x) if x.is_rational() else x.to_json()


def _torus(text: str | None, dim: int) -> TorusPoint:
    if text is None:
        return TorusPoint.identity(dim)
    point = TorusPoint.from_json(_json_arg(text))
    if len(point.values) != dim:
        raise DomainError("DOMAIN", f"torus point needs {dim} entries")
    return point


def _automorphism(system: str, twist: str):
    from .rootsys import build_root_system
    from .twist import automorphism_from_json, builtin_automorphism

    if twist.strip().startswith("{"):
        return automorphism_from_json(build_root_system(system), _json_arg(twist))
    return builtin_automorphism(system, twist)


def _weight(rs, text: str, labels: bool):
    values = _number_list(text)
    if labels or len(values) != rs.ambient_dim:
        return rs.from_dynkin_labels(values)
    return tuple(values)


# ---------------------------------------------------------------------------
# handlers


def _lefschetz_gl(args):
    from .lefschetz import gl_example

    value, _ = gl_example(args.n)
    return _cyc_out(value)


def _lefschetz_compose(args):
    from .lefschetz import orbital_value

    return _cyc_out(orbital_value(args.q, _cyc(args.e), _cyc(args.tr)))


def _twchar_eval(args):
    from .rootsys import build_root_system
    from .twchar import TwistedElement, TwistedWeightDatum, twisted_character
    from .twist import orbits_on_roots

    rs = build_root_system(args.system)
    auto = _automorphism(args.system, args.twist)
    tc = orbits_on_roots(rs, auto)
    datum = TwistedWeightDatum.create(tc, _weight(rs, args.mu, args.labels), _cyc(args.z))
    el = TwistedElement(_torus(args.h, rs.ambient_dim), auto, _torus(args.t, rs.ambient_dim))
    value = twisted_character(rs, tc, datum, el)
    return {"value": _cyc_out(value), "conductor": value.N}


def _twchar_tau_trace(args):
    from .rootsys import build_root_system
    from .twchar import TwistedElement, TwistedWeightDatum, singular_limit, trace_at_involution
    from .twist import orbits_on_roots

    rs = build_root_system(args.system)
    auto = _automorphism(args.system, args.twist)
    mu = _weight(rs, args.mu, args.labels)
    if args.method == "folded":
        return fraction_str(trace_at_involution(rs, auto, mu))
    tc = orbits_on_roots(rs, auto)
    return _cyc_out(singular_limit(rs, tc, TwistedWeightDatum.create(tc, mu), TwistedElement.pure(auto)))


def _matrix(args):
    from .glntwist import to_matrix

    M = to_matrix(_json_arg(args.matrix))
    if getattr(args, "n", None) is not None and M.rows != args.n:
        raise DomainError("DOMAIN", f"matrix is {M.rows}x{M.rows}, expected n = {args.n}")
    return M


def _gln_norm(args):
    from .glntwist import matrix_to_json, norm

    return matrix_to_json(norm(_matrix(args), args.variant, args.d))


def _gln_tau(args):
    from .glntwist import matrix_to_json, tau_apply

    return matrix_to_json(tau_apply(_matrix(args), args.variant))


def _gln_charpoly(args):
    from .glntwist import charpoly

    return [fraction_str(c) for c in charpoly(_matrix(args))]


def _gln_companion(args):
    from .glntwist import matrix_to_json, sl_companion

    return matrix_to_json(sl_companion(_number_list(args.coeffs)))


def _gln_cross_section(args):
    from .glntwist import even_orthogonal_regular, fixed_group_regular, matrix_to_json

    poly = _number_list(args.poly)
    if args.type == "o-even":
        r = even_orthogonal_regular(poly)
        return {
            "matrix": matrix_to_json(r.matrix),
            "form": matrix_to_json(r.gram),
            "label": "split" if r.split else "quasi_split",
            "zeta1": r.zeta1,
            "zeta2": r.zeta2,
        }
    variant = "symplectic" if args.type == "sp" else "odd_orthogonal"
    r = fixed_group_regular(poly, variant)
    return {"matrix": matrix_to_json(r.matrix), "form": matrix_to_json(r.form)}


def _gln_stable_class(args):
    from .glntwist import stable_class_of

    return stable_class_of(_matrix(args), args.field).to_json()


def _gln_square_classes(args):
    from .glntwist import square_classes

    return [str(c) for c in square_classes(args.field)]


def _gln_diagonalize(args):
    from .glntwist import diagonalize_symmetric, matrix_to_json

    D, g = diagonalize_symmetric(_matrix(args))
    return {"diagonal": matrix_to_json(D), "congruence": matrix_to_json(g)}


def _gln_ff_classes(args):
    from .glntwist import ff_twisted_classes

    table = ff_twisted_classes(args.n, args.q, args.variant)
    out = table.to_json()
    out["regular_semisimple_fibers_single"] = table.regular_semisimple_fibers_single()
    return out


def _verify(args):
    from .acceptance import run_suite

    results = run_suite(args.suite, args.seed)
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {"suite": args.suite, "seed": args.seed, "criteria": [r.to_json() for r in results]}
    if all(r.passed for r in results):
        return report
    failed = [r.number for r in results if not r.passed]
    raise _VerifyFailed(report, failed)


class _VerifyFailed(Exception):
    def __init__(self, report, failed):
        super().__init__(f"criteria failed: {failed}")
        self.report = report


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    from .acceptance import DEFAULT_SEED

    parser = _Parser(prog="twistlie", description=__doc__)
    parser.add_argument("--format", choices=["json"], default="json")
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    lef = top.add_parser("lefschetz").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = lef.add_parser("gl")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_lefschetz_gl)
    p = lef.add_parser("compose")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--e", required=True)
    p.add_argument("--tr", required=True)
    p.set_defaults(handler=_lefschetz_compose)

    tw = top.add_parser("twchar").add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, handler in [("eval", _twchar_eval), ("tau-trace", _twchar_tau_trace)]:
        p = tw.add_parser(name)
        p.add_argument("--system", required=True)
        p.add_argument("--twist", default="identity")
        p.add_argument("--mu", required=True)
        p.add_argument("--labels", action="store_true", help="read --mu as Dynkin labels")
        p.set_defaults(handler=handler)
        if name == "eval":
            p.add_argument("--z", default="1")
            p.add_argument("--h")
            p.add_argument("--t")
        else:
            p.add_argument("--method", choices=["folded", "limit"], default="folded")

    gln = top.add_parser("gln").add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, handler in [("norm", _gln_norm), ("tau", _gln_tau)]:
        p = gln.add_parser(name)
        p.add_argument("--n", type=int)
        p.add_argument("--variant", choices=["orthogonal", "symplectic"], default="orthogonal")
        p.add_argument("--matrix", required=True)
        if name == "norm":
            p.add_argument("--d", type=int, default=2)
        p.set_defaults(handler=handler)
    p = gln.add_parser("charpoly")
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=_gln_charpoly)
    p = gln.add_parser("companion")
    p.add_argument("--coeffs", required=True)
    p.set_defaults(handler=_gln_companion)
    p = gln.add_parser("cross-section")
    p.add_argument("--type", choices=["sp", "o-odd", "o-even"], required=True)
    p.add_argument("--poly", required=True)
    p.set_defaults(handler=_gln_cross_section)
    p = gln.add_parser("stable-class")
    p.add_argument("--field", required=True)
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=_gln_stable_class)
    p = gln.add_parser("square-classes")
    p.add_argument("--field", required=True)
    p.set_defaults(handler=_gln_square_classes)
    p = gln.add_parser("diagonalize")
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=_gln_diagonalize)
    p = gln.add_parser("ff-classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--variant", choices=["orthogonal", "symplectic"], default="orthogonal")
    p.set_defaults(handler=_gln_ff_classes)

    p = top.add_parser("verify")
    p.add_argument("suite", choices=["quick", "all"], nargs="?", default="quick")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(handler=_verify)
    return parser


def run(argv) -> tuple[int, dict]:
    """Dispatch without printing; returns (exit code, envelope)."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return 2, {"ok": False, "error": {"code": "USAGE", "message": str(exc).strip()}}
    try:
        return 0, {"ok": True, "value": args.handler(args)}
    except _VerifyFailed as exc:
        return 1, {"ok": False, "value": exc.report, "error": {"code": "VERIFY_FAILED", "message": str(exc)}}
    except DomainError as exc:
        return 1, {"ok": False, "error": {"code": exc.code, "message": exc.message}}


def main(argv=None) -> int:
    code, envelope = run(sys.argv[1:] if argv is None else argv)
    print(json.dumps(envelope))
    return code


if __name__ == "__main__":
    sys.exit(main())
