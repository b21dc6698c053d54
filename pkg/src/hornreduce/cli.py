"""Command-line interface: list, describe, reduce, eval, verify, catalog."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .annihilator import rewrite_rules
from .catalog import get_definition, list_functions
from .errors import (
    DomainError,
    EvaluationError,
    ExceptionalParametersError,
    HornError,
    ParseError,
    UnknownFunctionError,
)
from .reduction import reduce, verify_reduction
from .series import DEFAULT_DPS, EvalPoint, eval_series, sample_points
from .symbolic import parse, to_text

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_EXCEPTIONAL = 3
EXIT_UNKNOWN = 4
EXIT_VERIFY_FAILED = 5

# options whose values may start with '-' (negative shifts, parameters, z)
_VALUE_OPTIONS = ("--shift", "--params", "--z")


class _UsageError(Exception):
    pass


def _split(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _shift(defn, text: Optional[str]) -> tuple[int, ...]:
    if text is None:
        raise _UsageError("--shift is required")
    try:
        shift = tuple(int(s) for s in _split(text))
    except ValueError as exc:
        raise _UsageError(f"bad --shift {text!r}: integers expected") from exc
    if len(shift) != len(defn.params):
        raise _UsageError(f"{defn.name} takes {len(defn.params)} shifts ({','.join(defn.params)}), got {len(shift)}")
    return shift


def _params(defn, text: Optional[str]):
    if text is None:
        return None
    items = _split(text)
    if len(items) != len(defn.params):
        raise _UsageError(f"{defn.name} takes {len(defn.params)} parameters ({','.join(defn.params)}), got {len(items)}")
    try:
        return [parse(s) for s in items]
    except ParseError as exc:
        raise _UsageError(str(exc)) from exc


def _numeric_params(defn, text: Optional[str]) -> Optional[dict]:
    vals = _params(defn, text)
    if vals is None:
        return None
    if not all(v.is_constant() for v in vals):
        return None
    return {p: v.constant_value() for p, v in zip(defn.params, vals)}


def _z(text: Optional[str]) -> Optional[tuple[Fraction, Fraction]]:
    if text is None:
        return None
    items = _split(text)
    if len(items) != 2:
        raise _UsageError("--z takes two values z1,z2")
    try:
        return tuple(Fraction(s) for s in items)
    except ValueError as exc:
        raise _UsageError(f"bad --z {text!r}") from exc


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------------------
# subcommands


def run_list(args) -> int:
    rows = list_functions()
    if args.format == "json":
        _emit([{"name": n, "params": list(p), "rank": r} for n, p, r in rows])
        return EXIT_OK
    for name, params, rank in rows:
        print(f"{name:<7} ({', '.join(params)})  rank {rank}")
    return EXIT_OK


def _factor_text(f) -> str:
    parts = []
    for mu, m in zip(f.mu, ("m1", "m2")):
        if mu:
            coef = "" if abs(mu) == 1 else f"{abs(mu)}*"
            sign = "-" if mu < 0 else "+"
            parts.append(f"{sign}{coef}{m}")
    index = "".join(parts).lstrip("+")
    return f"({f.param})_{{{index}}}"


def describe_lines(name: str) -> list[str]:
    defn = get_definition(name)
    up = " ".join(_factor_text(f) for f in defn.factors if f.role == "upper") or "1"
    low = " ".join(_factor_text(f) for f in defn.factors if f.role == "lower")
    den = " ".join(x for x in (low, "m1! m2!") if x)
    lines = [
        f"{defn.name}({', '.join(defn.params)}; z1, z2)",
        f"  series term: {up} / ({den}) * z1^m1 z2^m2",
        f"  rank: {defn.rank}",
    ]
    if defn.printed_signature:
        lines.append(f"  printed signature: ({', '.join(defn.printed_signature)})")
    ex = ", ".join(defn.exceptional) if defn.exceptional else "none"
    lines.append(f"  exceptional when integer: {ex}")
    if defn.exceptional_alt:
        lines.append(f"  alternate exceptional reading: {json.dumps(defn.exceptional_alt)}")
    if defn.note:
        lines.append(f"  note: {defn.note}")
    locus = "; ".join(s + " = 0" for s in defn.singular_locus_text) or "none"
    lines.append(f"  singular locus: {locus}")
    lines.append("  rewrite rules (coefficients of 1, theta1, theta2, theta1*theta2):")
    for rel in rewrite_rules(defn):
        lines.append(f"    {rel.head} = {rel.coeffs.to_text()}")
    if defn.rank == 3:
        lines.append(f"  extra PDE (t_i = theta_i): {defn.extra_pde} = 0")
    return lines


def run_describe(args) -> int:
    defn = get_definition(args.function)
    if args.format == "json":
        _emit({
            "name": defn.name,
            "params": list(defn.params),
            "rank": defn.rank,
            "factors": [{"param": f.param, "role": f.role, "mu": list(f.mu)} for f in defn.factors],
            "exceptional": list(defn.exceptional),
            "singular_locus": list(defn.singular_locus_text),
            "rewrite_rules": {r.head: [to_text(c) for c in r.coeffs.coeffs] for r in rewrite_rules(defn)},
            "extra_pde": defn.extra_pde,
            "note": defn.note,
        })
        return EXIT_OK
    print("\n".join(describe_lines(defn.name)))
    return EXIT_OK


def run_reduce(args) -> int:
    defn = get_definition(args.function)
    shift = _shift(defn, args.shift)
    params = _params(defn, args.params)
    result = reduce(defn.name, shift, params)
    if args.format == "json":
        _emit(result.to_json())
    elif args.format == "cas":
        print(result.to_cas())
    else:
        print(result.to_text())
    return EXIT_OK


def run_eval(args) -> int:
    defn = get_definition(args.function)
    pv = _numeric_params(defn, args.params)
    if pv is None:
        raise _UsageError("eval needs numeric --params")
    z = _z(args.z)
    if z is None:
        raise _UsageError("eval needs --z z1,z2")
    rep = eval_series(defn, EvalPoint(pv, z), args.N, args.dps)
    if args.format == "json":
        _emit({"function": defn.name, **EvalPoint(pv, z).as_dict(), "N": args.N, **rep.as_dict()})
        return EXIT_OK
    for k, v in rep.as_dict().items():
        print(f"{k:<10} {v}")
    return EXIT_OK


def run_verify(args) -> int:
    defn = get_definition(args.function)
    shift = _shift(defn, args.shift)
    fixed = _numeric_params(defn, args.params)
    z = _z(args.z)
    if fixed is not None:
        symbolic = reduce(defn.name, shift, [fixed[p] for p in defn.params])
    else:
        if args.params is not None and _params(defn, args.params) != _params(defn, ",".join(defn.params)):
            raise _UsageError("verify takes numeric --params or none (auto-sampled)")
        symbolic = reduce(defn.name, shift)
    points = sample_points(defn, args.points, args.seed, params=fixed)
    if z is not None:
        points = [EvalPoint(pt.params, z) for pt in points[:1]]
    reports = []
    for pt in points:
        reports.append(verify_reduction(defn.name, symbolic, pt.params, pt.z, args.N, args.tol, args.dps))
    failed = [r for r in reports if r.status == "fail"]
    if args.format == "json":
        _emit({"function": defn.name, "shift": list(shift), "tol": args.tol,
               "points": [r.as_dict() for r in reports], "failed": len(failed)})
    else:
        print(f"{defn.name} shift {list(shift)}  tol {args.tol:g}")
        for i, r in enumerate(reports):
            d = r.as_dict()
            params = ", ".join(f"{k}={v}" for k, v in d["params"].items())
            extra = f"  ({r.reason})" if r.reason and r.status == "fail" else ""
            print(f"  point {i}: {params}; z=({', '.join(d['z'])})  rel_err {d['rel_error']}  {r.status}{extra}")
        counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "inconclusive")}
        print(f"  {counts['pass']} pass, {counts['fail']} fail, {counts['inconclusive']} inconclusive")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def run_catalog(args) -> int:
    print(resources.files("hornreduce").joinpath("data/catalog.json").read_text(), end="")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hornreduce", description="Differential reduction of two-variable Horn-type hypergeometric functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, function=True):
        if function:
            p.add_argument("function", help="function name, e.g. G1, H1c")
        p.add_argument("--format", choices=("text", "json", "cas"), default="text")

    p = sub.add_parser("list", help="list the 30 functions")
    common(p, function=False)
    p.set_defaults(run=run_list)

    p = sub.add_parser("describe", help="series data, exceptional sets, loci and rewrite rules")
    common(p)
    p.set_defaults(run=run_describe)

    p = sub.add_parser("reduce", help="coefficients of H(J) in terms of H(J+shift)")
    common(p)
    p.add_argument("--shift", help="comma-separated integer shifts, one per parameter")
    p.add_argument("--params", help="comma-separated symbols, rationals or expressions (default: catalog symbols)")
    p.set_defaults(run=run_reduce)

    p = sub.add_parser("eval", help="truncated series value and theta-derivatives")
    common(p)
    p.add_argument("--params", help="comma-separated rationals")
    p.add_argument("--z", help="z1,z2 as decimals or fractions")
    p.add_argument("--N", type=int, default=40, help="truncation order per variable")
    p.add_argument("--dps", type=int, default=DEFAULT_DPS, help="working decimal digits")
    p.set_defaults(run=run_eval)

    p = sub.add_parser("verify", help="check a reduction numerically at sample points")
    common(p)
    p.add_argument("--shift", help="comma-separated integer shifts")
    p.add_argument("--params", help="comma-separated rationals (default: sampled per point)")
    p.add_argument("--z", help="single z1,z2 point instead of sampled points")
    p.add_argument("--points", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--N", type=int, default=40)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--dps", type=int, default=DEFAULT_DPS)
    p.set_defaults(run=run_verify)

    p = sub.add_parser("catalog", help="dump the embedded function catalog as JSON")
    p.set_defaults(run=run_catalog)
    return parser


def _join_values(argv: Sequence[str]) -> list[str]:
    """Attach values like '-1,-1,0' to their option so argparse does not read them as flags."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownFunctionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except ExceptionalParametersError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXCEPTIONAL
    except (DomainError, ParseError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HornError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
